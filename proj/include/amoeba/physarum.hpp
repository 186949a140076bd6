#ifndef AMOEBA_PHYSARUM_HPP
#define AMOEBA_PHYSARUM_HPP

#include <Eigen/Core>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "amoeba/baselines.hpp"
#include "amoeba/graph.hpp"

namespace amoeba {

enum class ModeKind { two_terminal, tree };

std::string_view to_string(ModeKind kind);

// Where the flow enters and leaves. Two-terminal: +I0 at source, -I0 at
// sink, sink grounded. Tree: +I0 at source, -I0/(N-1) at every other node,
// source grounded.
struct SolveMode {
  ModeKind kind = ModeKind::tree;
  NodeId source = 0;
  NodeId sink = -1;

  static SolveMode two_terminal(NodeId source, NodeId sink) { return {ModeKind::two_terminal, source, sink}; }
  static SolveMode tree(NodeId source) { return {ModeKind::tree, source, -1}; }

  NodeId ground() const { return kind == ModeKind::two_terminal ? sink : source; }
};

enum class ConductivityRule {
  explicit_euler,  // D <- D + dt (Q - D), Q clipped at 0 on reversed edges
  semi_implicit,   // D <- (D + dt Q) / (1 + dt)
};

enum class InitialConductivity { constant, seeded_random };

struct SolverConfig {
  double dt = 0.5;
  // Stop once sum_e |D_new - D_old| <= delta * demand_scale.
  double delta = 1e-10;
  // Support keeps edges carrying at least flux_epsilon * demand_scale.
  double flux_epsilon = 0.05;
  // 0 selects 10000 * node_count.
  std::size_t max_iterations = 0;
  double source_current = 1.0;
  double conductivity_floor = 1e-6;
  double linear_tolerance = 1e-10;
  ConductivityRule rule = ConductivityRule::explicit_euler;
  InitialConductivity initial = InitialConductivity::constant;
  std::uint64_t initial_seed = 0;

  // Throws ParameterError unless 0 < dt < 1, delta > 0, 0 < flux_epsilon < 1,
  // source_current > 0 and conductivity_floor >= 0.
  void validate() const;

  // Flux drawn by one sink: I0 in two-terminal mode, I0 / (N - 1) in tree mode.
  double demand_scale(ModeKind kind, std::size_t node_count) const {
    return kind == ModeKind::tree && node_count > 1 ? source_current / static_cast<double>(node_count - 1)
                                                    : source_current;
  }
  double stop_threshold(ModeKind kind, std::size_t node_count) const {
    return delta * demand_scale(kind, node_count);
  }
  std::size_t iteration_budget(std::size_t node_count) const {
    return max_iterations > 0 ? max_iterations : 10000 * node_count;
  }
};

struct PhysarumState {
  Eigen::VectorXd conductivity;  // D, per edge
  Eigen::VectorXd pressure;      // p, per node, ground at exactly 0
  Eigen::VectorXd flux;          // Q after the directed cutoff, per edge
  Eigen::VectorXd net_flux;      // D / L (p_tail - p_head) before the cutoff
  std::size_t iteration = 0;
  double last_delta = std::numeric_limits<double>::infinity();
};

struct SptResult {
  SolveMode mode;
  Distances distances;
  std::vector<EdgeId> support;
  PhysarumState state;
  std::size_t iterations_used = 0;
  bool converged = false;
  std::chrono::nanoseconds wall_time{0};
  // Set when the run stopped on a linear-solve failure.
  std::optional<std::string> failure;
  std::shared_ptr<const DirectedGraph> graph;
};

// Right-hand side of the Kirchhoff system, scaled by `source_current`.
// In tree mode the source entry is the compensated negative sum of the sink
// entries, so the vector sums to zero.
Eigen::VectorXd pressure_rhs(const SolveMode& mode, std::size_t node_count, double source_current = 1.0);

PhysarumState initial_state(const DirectedGraph& graph, const SolverConfig& config);

// One pressure solve, flux evaluation, cutoff and conductivity update.
// Propagates DisconnectedSystemError / SolverFailure from the linear solve.
PhysarumState step(const DirectedGraph& graph, const PhysarumState& state, const Eigen::VectorXd& rhs,
                   NodeId ground, const SolverConfig& config);

bool converged(const PhysarumState& state, const SolveMode& mode, const SolverConfig& config);

// Called after every iteration with the graph being solved and the new state.
using StepObserver = std::function<void(const DirectedGraph&, const PhysarumState&)>;

// Iterates step() until converged() or the iteration budget runs out. A cold
// start uses initial_state(); a warm start continues from the supplied
// conductivities. Throws UnreachableError when a node that must receive flow
// cannot be reached from the source.
SptResult solve(const DirectedGraph& graph, const SolveMode& mode, const SolverConfig& config,
                const PhysarumState* warm_start = nullptr, const StepObserver& observer = {});

// Warm-start continuation on a graph whose lengths changed. Throws
// ParameterError if the topology differs from previous.graph.
SptResult resolve_after_update(const SptResult& previous, const DirectedGraph& new_graph,
                               const SolverConfig& config, const StepObserver& observer = {});

// Edges whose cut-off flux reaches flux_epsilon * I0 (two-terminal) or
// flux_epsilon * I0 / (N - 1) (tree). An unconverged snapshot also keeps
// edges that are still growing (Q >= D > 0).
std::vector<EdgeId> extract_support(const PhysarumState& state, const SolveMode& mode, const SolverConfig& config);

// Shortest distances from `source` using only the support edges.
Distances distances_from_support(const DirectedGraph& graph, const std::vector<EdgeId>& support, NodeId source);

}  // namespace amoeba

#endif  // AMOEBA_PHYSARUM_HPP
