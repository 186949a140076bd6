#ifndef AMOEBA_REPORT_HPP
#define AMOEBA_REPORT_HPP

#include <json.hpp>

#include "amoeba/baselines.hpp"
#include "amoeba/physarum.hpp"

namespace amoeba {

// {"mode", "converged", "iterations", "distances", "support", "wall_time_ms"};
// unreached distances are null, support edges are [tail, head] pairs.
nlohmann::json result_json(const SptResult& result);

// Same layout for a baseline run; "support" holds the parent-tree edges.
nlohmann::json baseline_json(const DirectedGraph& graph, const BaselineResult& result, BaselineAlgorithm algorithm);

nlohmann::json solver_config_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig base = {});

}  // namespace amoeba

#endif  // AMOEBA_REPORT_HPP
