#include "amoeba/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace amoeba {

std::string format_node_list(const std::vector<NodeId>& nodes, std::size_t limit) {
  std::ostringstream os;
  for (std::size_t i = 0; i < nodes.size() && i < limit; ++i) {
    if (i) os << ", ";
    os << nodes[i];
  }
  if (nodes.size() > limit) os << ", ... (" << nodes.size() << " total)";
  return os.str();
}

namespace {

void check_length(double length, std::size_t index) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ParameterError("edge " + std::to_string(index) + " has non-positive or non-finite length");
  }
}

// Counting-sort edge ids by key into CSR form.
template <typename Key>
void build_csr(std::size_t node_count, const std::vector<Edge>& edges, Key key,
               std::vector<std::size_t>& offsets, std::vector<EdgeId>& ids) {
  offsets.assign(node_count + 1, 0);
  for (const auto& e : edges) ++offsets[static_cast<std::size_t>(key(e)) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  ids.resize(edges.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    ids[cursor[static_cast<std::size_t>(key(edges[e]))]++] = static_cast<EdgeId>(e);
  }
}

}  // namespace

DirectedGraph::DirectedGraph(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ == 0) throw ParameterError("graph must have at least one node");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.tail < 0 || e.head < 0 || static_cast<std::size_t>(e.tail) >= node_count_ ||
        static_cast<std::size_t>(e.head) >= node_count_) {
      throw ParameterError("edge " + std::to_string(i) + " has an endpoint outside [0, " +
                           std::to_string(node_count_) + ")");
    }
    if (e.tail == e.head) throw ParameterError("edge " + std::to_string(i) + " is a self-loop");
    check_length(e.length, i);
    const auto key = (static_cast<std::uint64_t>(e.tail) << 32) | static_cast<std::uint32_t>(e.head);
    if (!seen.insert(key).second) {
      throw ParameterError("duplicate edge (" + std::to_string(e.tail) + ", " + std::to_string(e.head) + ")");
    }
  }
  build_adjacency();
}

void DirectedGraph::build_adjacency() {
  build_csr(node_count_, edges_, [](const Edge& e) { return e.tail; }, out_offsets_, out_ids_);
  build_csr(node_count_, edges_, [](const Edge& e) { return e.head; }, in_offsets_, in_ids_);
}

std::span<const EdgeId> DirectedGraph::out_edges(NodeId v) const {
  const auto i = static_cast<std::size_t>(v);
  return {out_ids_.data() + out_offsets_.at(i), out_offsets_.at(i + 1) - out_offsets_[i]};
}

std::span<const EdgeId> DirectedGraph::in_edges(NodeId v) const {
  const auto i = static_cast<std::size_t>(v);
  return {in_ids_.data() + in_offsets_.at(i), in_offsets_.at(i + 1) - in_offsets_[i]};
}

std::optional<EdgeId> DirectedGraph::find_edge(NodeId tail, NodeId head) const {
  if (tail < 0 || static_cast<std::size_t>(tail) >= node_count_) return std::nullopt;
  for (EdgeId id : out_edges(tail)) {
    if (edges_[static_cast<std::size_t>(id)].head == head) return id;
  }
  return std::nullopt;
}

std::vector<double> DirectedGraph::lengths() const {
  std::vector<double> out(edges_.size());
  std::transform(edges_.begin(), edges_.end(), out.begin(), [](const Edge& e) { return e.length; });
  return out;
}

DirectedGraph DirectedGraph::with_lengths(std::vector<double> lengths) const {
  if (lengths.size() != edges_.size()) {
    throw ParameterError("expected " + std::to_string(edges_.size()) + " lengths, got " +
                         std::to_string(lengths.size()));
  }
  DirectedGraph copy = *this;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    check_length(lengths[i], i);
    copy.edges_[i].length = lengths[i];
  }
  return copy;
}

bool DirectedGraph::same_topology(const DirectedGraph& other) const {
  if (node_count_ != other.node_count_ || edges_.size() != other.edges_.size()) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].tail != other.edges_[i].tail || edges_[i].head != other.edges_[i].head) return false;
  }
  return true;
}

DirectedGraph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                                   const GeneratorOptions& options) {
  if (n < 2) throw ParameterError("generate_erdos_renyi: n must be at least 2");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("generate_erdos_renyi: p must lie in (0, 1]");
  if (!(options.weight_min > 0.0) || !(options.weight_min <= options.weight_max)) {
    throw ParameterError("generate_erdos_renyi: need 0 < weight_min <= weight_max");
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::uniform_real_distribution<double> real_weight(options.weight_min, options.weight_max);
  std::uniform_int_distribution<long long> int_weight(
      static_cast<long long>(std::ceil(options.weight_min)),
      static_cast<long long>(std::floor(options.weight_max)));
  if (options.weights == WeightKind::integer &&
      std::ceil(options.weight_min) > std::floor(options.weight_max)) {
    throw ParameterError("generate_erdos_renyi: no integer lies in [weight_min, weight_max]");
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(static_cast<double>(n * (n - 1)) * p * 1.1) + 16);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !coin(rng)) continue;
      double w = options.weights == WeightKind::integer ? static_cast<double>(int_weight(rng))
                                                        : real_weight(rng);
      edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), w});
    }
  }
  return DirectedGraph(n, std::move(edges));
}

std::vector<NodeId> validate_reachable(const DirectedGraph& graph, NodeId source) {
  if (source < 0 || static_cast<std::size_t>(source) >= graph.node_count()) {
    throw ParameterError("source " + std::to_string(source) + " is not a node");
  }
  std::vector<char> seen(graph.node_count(), 0);
  std::vector<NodeId> frontier{source};
  seen[static_cast<std::size_t>(source)] = 1;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    for (EdgeId e : graph.out_edges(frontier[head])) {
      const NodeId next = graph.edge(e).head;
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = 1;
        frontier.push_back(next);
      }
    }
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

std::vector<NodeId> unreachable_from(const DirectedGraph& graph, NodeId source) {
  const auto reached = validate_reachable(graph, source);
  std::vector<NodeId> missing;
  std::size_t k = 0;
  for (NodeId v = 0; static_cast<std::size_t>(v) < graph.node_count(); ++v) {
    if (k < reached.size() && reached[k] == v) {
      ++k;
    } else {
      missing.push_back(v);
    }
  }
  return missing;
}

std::string_view to_string(UpdateCategory category) {
  switch (category) {
    case UpdateCategory::increase: return "increase";
    case UpdateCategory::decrease: return "decrease";
    case UpdateCategory::mixed: return "mixed";
  }
  return "unknown";
}

UpdateCategory parse_update_category(std::string_view text) {
  if (text == "increase") return UpdateCategory::increase;
  if (text == "decrease") return UpdateCategory::decrease;
  if (text == "mixed") return UpdateCategory::mixed;
  throw ParameterError("unknown update category '" + std::string(text) + "'");
}

std::size_t updated_edge_count(std::size_t edge_count, double rue) {
  const auto k = static_cast<std::size_t>(std::llround(rue * static_cast<double>(edge_count)));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(edge_count, 1));
}

UpdateSet sample_updates(const DirectedGraph& graph, double rue, double rcw,
                         UpdateCategory category, std::uint64_t seed) {
  if (!(rue > 0.0 && rue <= 1.0)) throw ParameterError("rue must lie in (0, 1]");
  const double rcw_max = category == UpdateCategory::increase ? 10.0 : 0.9;
  if (!(rcw > 0.0 && rcw <= rcw_max)) {
    throw ParameterError("rcw for category " + std::string(to_string(category)) + " must lie in (0, " +
                         (category == UpdateCategory::increase ? "10" : "0.9") + "]");
  }
  if (graph.edge_count() == 0) throw ParameterError("cannot sample updates on a graph without edges");

  const std::size_t m = graph.edge_count();
  const std::size_t k = updated_edge_count(m, rue);

  // Partial Fisher-Yates: the first k slots are a uniform draw without
  // replacement, in random order.
  std::mt19937_64 rng(seed);
  std::vector<EdgeId> ids(m);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, m - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }

  UpdateSet set;
  set.category = category;
  set.rue = rue;
  set.rcw = rcw;
  set.seed = seed;
  set.changes.reserve(k);
  const std::size_t increase_count = category == UpdateCategory::increase   ? k
                                     : category == UpdateCategory::decrease ? 0
                                                                            : (k + 1) / 2;
  for (std::size_t i = 0; i < k; ++i) {
    const double old_length = graph.edge(ids[i]).length;
    const double factor = i < increase_count ? 1.0 + rcw : 1.0 - rcw;
    set.changes.push_back({ids[i], old_length, old_length * factor});
  }
  return set;
}

DirectedGraph apply_updates(const DirectedGraph& graph, const UpdateSet& updates) {
  auto lengths = graph.lengths();
  for (const auto& change : updates.changes) {
    if (change.edge < 0 || static_cast<std::size_t>(change.edge) >= lengths.size()) {
      throw ParameterError("update refers to unknown edge id " + std::to_string(change.edge));
    }
    lengths[static_cast<std::size_t>(change.edge)] = change.new_length;
  }
  return graph.with_lengths(std::move(lengths));
}

UpdateSet inverse(const UpdateSet& updates) {
  UpdateSet out = updates;
  for (auto& change : out.changes) std::swap(change.old_length, change.new_length);
  if (updates.category == UpdateCategory::increase) out.category = UpdateCategory::decrease;
  if (updates.category == UpdateCategory::decrease) out.category = UpdateCategory::increase;
  return out;
}

}  // namespace amoeba
