#include "amoeba/baselines.hpp"

#include <functional>
#include <queue>

namespace amoeba {

namespace {

using Clock = std::chrono::steady_clock;

void check_source(const DirectedGraph& graph, NodeId source) {
  if (source < 0 || static_cast<std::size_t>(source) >= graph.node_count()) {
    throw ParameterError("source " + std::to_string(source) + " is not a node");
  }
}

BaselineResult empty_result(const DirectedGraph& graph, NodeId source) {
  BaselineResult r;
  r.distances.assign(graph.node_count(), std::nullopt);
  r.parent.assign(graph.node_count(), std::nullopt);
  r.distances[static_cast<std::size_t>(source)] = 0.0;
  return r;
}

}  // namespace

std::string_view to_string(BaselineAlgorithm algorithm) {
  return algorithm == BaselineAlgorithm::label_setting ? "label_setting" : "bellman_ford";
}

BaselineResult label_setting_spt(const DirectedGraph& graph, NodeId source) {
  check_source(graph, source);
  for (const auto& e : graph.edges()) {
    if (!(e.length > 0.0)) throw ParameterError("label setting requires positive lengths");
  }
  const auto start = Clock::now();
  auto r = empty_result(graph, source);
  std::vector<char> settled(graph.node_count(), 0);

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    auto& done = settled[static_cast<std::size_t>(v)];
    if (done) continue;
    done = 1;
    for (EdgeId id : graph.out_edges(v)) {
      const auto& e = graph.edge(id);
      const auto w = static_cast<std::size_t>(e.head);
      if (settled[w]) continue;
      ++r.relaxations;
      const double candidate = d + e.length;
      if (!r.distances[w] || candidate < *r.distances[w]) {
        r.distances[w] = candidate;
        r.parent[w] = id;
        heap.emplace(candidate, e.head);
      }
    }
  }
  r.wall_time = Clock::now() - start;
  return r;
}

BaselineResult bellman_ford_spt(const DirectedGraph& graph, NodeId source) {
  check_source(graph, source);
  const auto start = Clock::now();
  auto r = empty_result(graph, source);
  const auto& edges = graph.edges();
  for (std::size_t round = 0; round + 1 < graph.node_count(); ++round) {
    bool changed = false;
    for (std::size_t id = 0; id < edges.size(); ++id) {
      const auto& e = edges[id];
      const auto& du = r.distances[static_cast<std::size_t>(e.tail)];
      if (!du) continue;
      ++r.relaxations;
      auto& dv = r.distances[static_cast<std::size_t>(e.head)];
      const double candidate = *du + e.length;
      if (!dv || candidate < *dv) {
        dv = candidate;
        r.parent[static_cast<std::size_t>(e.head)] = static_cast<EdgeId>(id);
        changed = true;
      }
    }
    if (!changed) break;
  }
  r.wall_time = Clock::now() - start;
  return r;
}

BaselineResult run_baseline(const DirectedGraph& graph, NodeId source, BaselineAlgorithm algorithm) {
  return algorithm == BaselineAlgorithm::label_setting ? label_setting_spt(graph, source)
                                                       : bellman_ford_spt(graph, source);
}

BaselineResult recompute_on_update(const DirectedGraph& graph, const UpdateSet& updates, NodeId source,
                                   BaselineAlgorithm algorithm) {
  const auto start = Clock::now();
  const auto mutated = apply_updates(graph, updates);
  auto r = run_baseline(mutated, source, algorithm);
  r.wall_time = Clock::now() - start;
  return r;
}

}  // namespace amoeba
