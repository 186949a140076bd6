#ifndef AMOEBA_BASELINES_HPP
#define AMOEBA_BASELINES_HPP

#include <chrono>
#include <optional>
#include <string_view>
#include <vector>

#include "amoeba/graph.hpp"

namespace amoeba {

// Per-node distance; std::nullopt marks a node the source cannot reach.
using Distances = std::vector<std::optional<double>>;

struct BaselineResult {
  Distances distances;
  std::vector<std::optional<EdgeId>> parent;  // predecessor edge on the tree
  std::size_t relaxations = 0;
  std::chrono::nanoseconds wall_time{0};
};

enum class BaselineAlgorithm { label_setting, bellman_ford };

std::string_view to_string(BaselineAlgorithm algorithm);

// Dijkstra with a binary heap (lazy deletion). Ties on distance pop the
// smaller node id first; a parent is replaced only on strict improvement.
BaselineResult label_setting_spt(const DirectedGraph& graph, NodeId source);

// Round-based Bellman-Ford in edge-list order, stopping after the first
// round that changes nothing.
BaselineResult bellman_ford_spt(const DirectedGraph& graph, NodeId source);

BaselineResult run_baseline(const DirectedGraph& graph, NodeId source, BaselineAlgorithm algorithm);

// Applies `updates` and recomputes from scratch; wall_time covers both.
BaselineResult recompute_on_update(const DirectedGraph& graph, const UpdateSet& updates, NodeId source,
                                   BaselineAlgorithm algorithm);

}  // namespace amoeba

#endif  // AMOEBA_BASELINES_HPP
