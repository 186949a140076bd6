#include "amoeba/physarum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "amoeba/linsolve.hpp"
#include "stepper.hpp"

namespace amoeba {

namespace {

using Clock = std::chrono::steady_clock;

void check_node(const DirectedGraph& graph, NodeId v, const char* what) {
  if (v < 0 || static_cast<std::size_t>(v) >= graph.node_count()) {
    throw ParameterError(std::string(what) + " " + std::to_string(v) + " is not a node");
  }
}

void check_mode(const DirectedGraph& graph, const SolveMode& mode) {
  check_node(graph, mode.source, "source");
  if (mode.kind == ModeKind::two_terminal) {
    check_node(graph, mode.sink, "sink");
    if (mode.sink == mode.source) throw ParameterError("two-terminal mode needs distinct source and sink");
  }
  if (graph.node_count() < 2) throw ParameterError("solver needs at least two nodes");
}

}  // namespace

std::string_view to_string(ModeKind kind) { return kind == ModeKind::tree ? "tree" : "two_terminal"; }

void SolverConfig::validate() const {
  if (!(dt > 0.0 && dt < 1.0)) throw ParameterError("dt must lie in (0, 1)");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (!(flux_epsilon > 0.0 && flux_epsilon < 1.0)) throw ParameterError("flux_epsilon must lie in (0, 1)");
  if (!(source_current > 0.0)) throw ParameterError("source_current must be positive");
  if (!(conductivity_floor >= 0.0)) throw ParameterError("conductivity_floor must be non-negative");
  if (!(linear_tolerance > 0.0)) throw ParameterError("linear_tolerance must be positive");
}

Eigen::VectorXd pressure_rhs(const SolveMode& mode, std::size_t node_count, double source_current) {
  if (node_count < 2) throw ParameterError("pressure_rhs: need at least two nodes");
  const auto n = static_cast<Eigen::Index>(node_count);
  if (mode.source < 0 || mode.source >= n) throw ParameterError("pressure_rhs: source is not a node");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  if (mode.kind == ModeKind::two_terminal) {
    if (mode.sink < 0 || mode.sink >= n || mode.sink == mode.source) {
      throw ParameterError("pressure_rhs: sink must be a node distinct from the source");
    }
    rhs[mode.source] = source_current;
    rhs[mode.sink] = -source_current;
    return rhs;
  }
  const double demand = -source_current / static_cast<double>(node_count - 1);
  // Neumaier summation of the sink entries.
  double sum = 0.0, carry = 0.0;
  for (Eigen::Index v = 0; v < n; ++v) {
    if (v == mode.source) continue;
    rhs[v] = demand;
    const double t = sum + demand;
    carry += std::abs(sum) >= std::abs(demand) ? (sum - t) + demand : (demand - t) + sum;
    sum = t;
  }
  rhs[mode.source] = -(sum + carry);
  return rhs;
}

PhysarumState initial_state(const DirectedGraph& graph, const SolverConfig& config) {
  const auto m = static_cast<Eigen::Index>(graph.edge_count());
  PhysarumState s;
  if (config.initial == InitialConductivity::constant) {
    s.conductivity = Eigen::VectorXd::Ones(m);
  } else {
    // Uniform on (0, 1].
    std::mt19937_64 rng(config.initial_seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    s.conductivity.resize(m);
    for (Eigen::Index e = 0; e < m; ++e) s.conductivity[e] = 1.0 - u(rng);
  }
  s.conductivity = s.conductivity.cwiseMax(config.conductivity_floor);
  s.pressure = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(graph.node_count()));
  s.flux = Eigen::VectorXd::Zero(m);
  s.net_flux = Eigen::VectorXd::Zero(m);
  return s;
}

namespace detail {

void require_reachable(const DirectedGraph& graph, const SolveMode& mode) {
  check_mode(graph, mode);
  if (mode.kind == ModeKind::tree) {
    if (auto missing = unreachable_from(graph, mode.source); !missing.empty()) {
      throw UnreachableError("nodes unreachable from source " + std::to_string(mode.source) + ": " +
                                 format_node_list(missing),
                             std::move(missing));
    }
  } else {
    const auto reached = validate_reachable(graph, mode.source);
    if (!std::binary_search(reached.begin(), reached.end(), mode.sink)) {
      throw UnreachableError("sink " + std::to_string(mode.sink) + " unreachable from source " +
                                 std::to_string(mode.source),
                             {mode.sink});
    }
  }
}

Stepper::Stepper(const SolverConfig& config)
    : config_(config), solver_(SolveOptions<double>{config.linear_tolerance}) {}

void Stepper::advance(const DirectedGraph& graph, PhysarumState& state, const Eigen::VectorXd& rhs, NodeId ground) {
  const auto& edges = graph.edges();
  const auto m = static_cast<Eigen::Index>(edges.size());
  if (state.conductivity.size() != m) throw ParameterError("state conductivity does not match the graph");

  AssemblyOptions<double> assembly;
  const auto system = assemble<double>(graph, state.conductivity, rhs, ground, assembly);
  state.pressure = solver_.solve(system);

  state.net_flux.resize(m);
  state.flux.resize(m);
  double change = 0.0;
  for (Eigen::Index e = 0; e < m; ++e) {
    const auto& edge = edges[static_cast<std::size_t>(e)];
    const double d = state.conductivity[e];
    const double drop = state.pressure[edge.tail] - state.pressure[edge.head];
    const double q = d >= assembly.zero_threshold && d > 0.0 ? d / edge.length * drop : 0.0;
    state.net_flux[e] = q;
    // p_tail == p_head takes the growth branch; q is 0 there, so both agree.
    const double clipped = drop >= 0.0 ? std::max(q, 0.0) : 0.0;
    state.flux[e] = clipped;
    double next = config_.rule == ConductivityRule::explicit_euler ? d + (clipped - d) * config_.dt
                                                                   : (d + config_.dt * clipped) / (1.0 + config_.dt);
    next = std::max(next, config_.conductivity_floor);
    change += std::abs(next - d);
    state.conductivity[e] = next;
  }
  state.last_delta = change;
  ++state.iteration;
}

}  // namespace detail

PhysarumState step(const DirectedGraph& graph, const PhysarumState& state, const Eigen::VectorXd& rhs,
                   NodeId ground, const SolverConfig& config) {
  config.validate();
  detail::Stepper stepper(config);
  PhysarumState next = state;
  stepper.advance(graph, next, rhs, ground);
  return next;
}

bool converged(const PhysarumState& state, const SolveMode& mode, const SolverConfig& config) {
  return state.iteration > 0 &&
         state.last_delta <= config.stop_threshold(mode.kind, static_cast<std::size_t>(state.pressure.size()));
}

std::vector<EdgeId> extract_support(const PhysarumState& state, const SolveMode& mode, const SolverConfig& config) {
  const double threshold =
      config.flux_epsilon * config.demand_scale(mode.kind, static_cast<std::size_t>(state.pressure.size()));
  std::vector<EdgeId> support;
  // A snapshot that has not met the stop test also keeps tubes that are
  // still growing (Q >= D > 0, i.e. u >= L). Near-tied routes trade flux at a
  // rate proportional to their length gap, so a budget-limited run can end
  // with the shorter route still below the flux threshold.
  const bool snapshot = !converged(state, mode, config);
  for (Eigen::Index e = 0; e < state.flux.size(); ++e) {
    const bool growing = snapshot && state.flux[e] > 0.0 && state.flux[e] >= state.conductivity[e];
    if (state.flux[e] >= threshold || growing) support.push_back(static_cast<EdgeId>(e));
  }
  return support;
}

Distances distances_from_support(const DirectedGraph& graph, const std::vector<EdgeId>& support, NodeId source) {
  std::vector<Edge> kept;
  kept.reserve(support.size());
  for (EdgeId id : support) {
    if (id < 0 || static_cast<std::size_t>(id) >= graph.edge_count()) {
      throw ParameterError("support edge " + std::to_string(id) + " is not an edge of the graph");
    }
    kept.push_back(graph.edge(id));
  }
  return label_setting_spt(DirectedGraph(graph.node_count(), std::move(kept)), source).distances;
}

SptResult solve(const DirectedGraph& graph, const SolveMode& mode, const SolverConfig& config,
                const PhysarumState* warm_start, const StepObserver& observer) {
  config.validate();
  check_mode(graph, mode);

  detail::require_reachable(graph, mode);

  const auto start = Clock::now();
  SptResult result;
  result.mode = mode;
  result.graph = std::make_shared<const DirectedGraph>(graph);

  if (warm_start) {
    if (static_cast<std::size_t>(warm_start->conductivity.size()) != graph.edge_count() ||
        static_cast<std::size_t>(warm_start->pressure.size()) != graph.node_count()) {
      throw ParameterError("warm start state is shaped for a different graph");
    }
    result.state = *warm_start;
    result.state.iteration = 0;
    result.state.last_delta = std::numeric_limits<double>::infinity();
  } else {
    result.state = initial_state(graph, config);
  }

  const Eigen::VectorXd rhs = pressure_rhs(mode, graph.node_count(), config.source_current);
  const std::size_t budget = config.iteration_budget(graph.node_count());
  detail::Stepper stepper(config);
  try {
    while (result.state.iteration < budget) {
      stepper.advance(graph, result.state, rhs, mode.ground());
      if (observer) observer(graph, result.state);
      if (converged(result.state, mode, config)) {
        result.converged = true;
        break;
      }
    }
  } catch (const DisconnectedSystemError& e) {
    result.failure = e.what();
  } catch (const SolverFailure& e) {
    result.failure = e.what();
  }

  result.iterations_used = result.state.iteration;
  result.support = extract_support(result.state, mode, config);
  result.distances = distances_from_support(graph, result.support, mode.source);
  result.wall_time = Clock::now() - start;
  return result;
}

SptResult resolve_after_update(const SptResult& previous, const DirectedGraph& new_graph, const SolverConfig& config,
                               const StepObserver& observer) {
  if (!previous.graph || !previous.graph->same_topology(new_graph)) {
    throw ParameterError("resolve_after_update: new graph topology differs from the solved graph");
  }
  return solve(new_graph, previous.mode, config, &previous.state, observer);
}

}  // namespace amoeba
