#ifndef AMOEBA_TRACE_HPP
#define AMOEBA_TRACE_HPP

#include <iosfwd>
#include <vector>

#include "amoeba/physarum.hpp"

namespace amoeba {

// Applied once `trigger_iteration` iterations have completed.
struct ScheduledUpdate {
  std::size_t trigger_iteration = 0;
  UpdateSet updates;
};

struct TraceFrame {
  std::size_t iteration = 0;
  Eigen::VectorXd flux;
  Eigen::VectorXd conductivity;
  double last_delta = 0.0;
};

struct TraceEvent {
  std::size_t iteration = 0;  // iterations completed before the update
  UpdateCategory category = UpdateCategory::mixed;
  std::size_t change_count = 0;
};

struct FluxTrace {
  std::vector<TraceFrame> frames;
  std::vector<TraceEvent> events;
  DirectedGraph final_graph;
  bool converged = false;
};

// Runs the solver from a cold start, applying each scheduled update when
// its trigger is reached, and records flux and conductivity every `stride`
// iterations (the last iteration is always recorded). After the last event
// the run continues until converged or the iteration budget is spent.
FluxTrace trace(const DirectedGraph& graph, const SolveMode& mode, const SolverConfig& config,
                const std::vector<ScheduledUpdate>& schedule, std::size_t stride = 1);

// CSV "iteration,edge_tail,edge_head,flux,conductivity", one row per edge
// per frame, with "# update iteration=K category=C" before the first frame
// recorded after each event.
void write_trace_csv(std::ostream& out, const FluxTrace& trace);

}  // namespace amoeba

#endif  // AMOEBA_TRACE_HPP
