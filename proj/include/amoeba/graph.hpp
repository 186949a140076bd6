#ifndef AMOEBA_GRAPH_HPP
#define AMOEBA_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amoeba/errors.hpp"

namespace amoeba {

struct Edge {
  NodeId tail;
  NodeId head;
  double length;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed weighted graph G(V, E, L) with CSR out/in adjacency over edge ids.
// Immutable once built; mutation goes through with_lengths().
class DirectedGraph {
 public:
  DirectedGraph() = default;

  // Throws ParameterError on self-loops, duplicate (tail, head) pairs,
  // out-of-range endpoints or non-positive / non-finite lengths.
  DirectedGraph(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_.at(static_cast<std::size_t>(id)); }

  std::span<const EdgeId> out_edges(NodeId v) const;
  std::span<const EdgeId> in_edges(NodeId v) const;

  std::optional<EdgeId> find_edge(NodeId tail, NodeId head) const;

  std::vector<double> lengths() const;

  // Same topology, new lengths (one per edge, all > 0).
  DirectedGraph with_lengths(std::vector<double> lengths) const;

  // Edge-for-edge identical (tail, head) sequence and node count.
  bool same_topology(const DirectedGraph& other) const;

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  void build_adjacency();

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<EdgeId> out_ids_;
  std::vector<std::size_t> in_offsets_;
  std::vector<EdgeId> in_ids_;
};

enum class WeightKind { continuous, integer };

struct GeneratorOptions {
  double weight_min = 1.0;
  double weight_max = 1000.0;
  WeightKind weights = WeightKind::continuous;
};

// Directed G(n, p): one Bernoulli(p) trial per ordered pair (i, j), i != j,
// visited in row-major order; lengths uniform on [weight_min, weight_max].
DirectedGraph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                                   const GeneratorOptions& options = {});

// Nodes reachable from `source` by directed paths, ascending.
std::vector<NodeId> validate_reachable(const DirectedGraph& graph, NodeId source);

// Nodes NOT reachable from `source`, ascending.
std::vector<NodeId> unreachable_from(const DirectedGraph& graph, NodeId source);

enum class UpdateCategory { increase, decrease, mixed };

std::string_view to_string(UpdateCategory category);
UpdateCategory parse_update_category(std::string_view text);

struct EdgeChange {
  EdgeId edge;
  double old_length;
  double new_length;

  friend bool operator==(const EdgeChange&, const EdgeChange&) = default;
};

struct UpdateSet {
  std::vector<EdgeChange> changes;
  UpdateCategory category = UpdateCategory::mixed;
  double rue = 0.0;
  double rcw = 0.0;
  std::uint64_t seed = 0;

  bool empty() const noexcept { return changes.empty(); }
};

// Number of edges touched for ratio `rue`: nearest integer, at least 1.
std::size_t updated_edge_count(std::size_t edge_count, double rue);

// Samples round(rue * |E|) distinct edges without replacement. Increase
// scales by (1 + rcw), decrease by (1 - rcw); mixed applies increase to the
// first ceil(k/2) picks and decrease to the rest.
UpdateSet sample_updates(const DirectedGraph& graph, double rue, double rcw,
                         UpdateCategory category, std::uint64_t seed);

DirectedGraph apply_updates(const DirectedGraph& graph, const UpdateSet& updates);

// Swaps old and new lengths of every change.
UpdateSet inverse(const UpdateSet& updates);

// Plain-text graph format: "n m" then m lines "tail head length".
void write_graph(std::ostream& out, const DirectedGraph& graph);
DirectedGraph read_graph(std::istream& in);
void save_graph(const std::string& path, const DirectedGraph& graph);
DirectedGraph load_graph(const std::string& path);

// Update file: one "tail head new_length" line per change; '#' comments.
UpdateSet read_updates(std::istream& in, const DirectedGraph& graph);

}  // namespace amoeba

#endif  // AMOEBA_GRAPH_HPP
