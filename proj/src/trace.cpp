#include "amoeba/trace.hpp"

#include <ostream>

#include "stepper.hpp"

namespace amoeba {

FluxTrace trace(const DirectedGraph& graph, const SolveMode& mode, const SolverConfig& config,
                const std::vector<ScheduledUpdate>& schedule, std::size_t stride) {
  config.validate();
  detail::require_reachable(graph, mode);
  if (stride == 0) throw ParameterError("trace stride must be positive");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i].trigger_iteration <= schedule[i - 1].trigger_iteration) {
      throw ParameterError("trace schedule triggers must be strictly increasing");
    }
  }

  FluxTrace out;
  out.final_graph = graph;
  PhysarumState state = initial_state(graph, config);
  const Eigen::VectorXd rhs = pressure_rhs(mode, graph.node_count(), config.source_current);
  const std::size_t budget = config.iteration_budget(graph.node_count());
  detail::Stepper stepper(config);

  auto record = [&] {
    out.frames.push_back({state.iteration, state.flux, state.conductivity, state.last_delta});
  };

  std::size_t next_event = 0;
  std::size_t phase_start = 0;
  while (true) {
    if (next_event < schedule.size() && state.iteration == schedule[next_event].trigger_iteration) {
      if (!out.frames.empty() && out.frames.back().iteration != state.iteration) record();
      const auto& event = schedule[next_event];
      out.final_graph = apply_updates(out.final_graph, event.updates);
      out.events.push_back({state.iteration, event.updates.category, event.updates.changes.size()});
      phase_start = state.iteration;
      ++next_event;
      continue;
    }
    const bool waiting = next_event < schedule.size();
    if (!waiting && state.iteration - phase_start >= budget) break;

    stepper.advance(out.final_graph, state, rhs, mode.ground());
    if (state.iteration % stride == 0) record();

    // A run that settles before the next trigger keeps iterating at its fixed
    // point so the event lands at the scheduled iteration.
    if (!waiting && converged(state, mode, config) && state.iteration > phase_start) {
      out.converged = true;
      break;
    }
  }
  if (out.frames.empty() || out.frames.back().iteration != state.iteration) record();
  return out;
}

void write_trace_csv(std::ostream& out, const FluxTrace& trace) {
  const auto old_precision = out.precision(17);
  const auto& edges = trace.final_graph.edges();
  out << "iteration,edge_tail,edge_head,flux,conductivity\n";
  std::size_t event = 0;
  for (const auto& frame : trace.frames) {
    while (event < trace.events.size() && trace.events[event].iteration < frame.iteration) {
      out << "# update iteration=" << trace.events[event].iteration
          << " category=" << to_string(trace.events[event].category) << '\n';
      ++event;
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto i = static_cast<Eigen::Index>(e);
      out << frame.iteration << ',' << edges[e].tail << ',' << edges[e].head << ',' << frame.flux[i] << ','
          << frame.conductivity[i] << '\n';
    }
  }
  for (; event < trace.events.size(); ++event) {
    out << "# update iteration=" << trace.events[event].iteration
        << " category=" << to_string(trace.events[event].category) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace amoeba
