#include "amoeba/report.hpp"

namespace amoeba {

namespace {

nlohmann::json distances_json(const Distances& distances) {
  auto out = nlohmann::json::array();
  for (const auto& d : distances) out.push_back(d ? nlohmann::json(*d) : nlohmann::json(nullptr));
  return out;
}

double to_ms(std::chrono::nanoseconds t) { return std::chrono::duration<double, std::milli>(t).count(); }

}  // namespace

nlohmann::json result_json(const SptResult& result) {
  nlohmann::json j;
  j["mode"] = to_string(result.mode.kind);
  j["source"] = result.mode.source;
  if (result.mode.kind == ModeKind::two_terminal) {
    j["sink"] = result.mode.sink;
    j["pressure_drop"] = result.state.pressure[result.mode.source] - result.state.pressure[result.mode.sink];
  }
  j["converged"] = result.converged;
  j["iterations"] = result.iterations_used;
  j["last_delta"] = result.state.last_delta;
  j["distances"] = distances_json(result.distances);
  auto support = nlohmann::json::array();
  for (EdgeId id : result.support) {
    const auto& e = result.graph->edge(id);
    support.push_back({e.tail, e.head});
  }
  j["support"] = std::move(support);
  j["wall_time_ms"] = to_ms(result.wall_time);
  if (result.failure) j["failure"] = *result.failure;
  return j;
}

nlohmann::json baseline_json(const DirectedGraph& graph, const BaselineResult& result, BaselineAlgorithm algorithm) {
  nlohmann::json j;
  j["mode"] = to_string(algorithm);
  j["converged"] = true;
  j["iterations"] = result.relaxations;
  j["distances"] = distances_json(result.distances);
  auto support = nlohmann::json::array();
  for (const auto& p : result.parent) {
    if (p) support.push_back({graph.edge(*p).tail, graph.edge(*p).head});
  }
  j["support"] = std::move(support);
  j["wall_time_ms"] = to_ms(result.wall_time);
  return j;
}

nlohmann::json solver_config_json(const SolverConfig& c) {
  return {{"dt", c.dt},
          {"delta", c.delta},
          {"flux_epsilon", c.flux_epsilon},
          {"max_iterations", c.max_iterations},
          {"source_current", c.source_current},
          {"conductivity_floor", c.conductivity_floor},
          {"linear_tolerance", c.linear_tolerance},
          {"rule", c.rule == ConductivityRule::explicit_euler ? "explicit" : "semi_implicit"},
          {"initial", c.initial == InitialConductivity::constant ? "constant" : "random"},
          {"initial_seed", c.initial_seed}};
}

SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig c) {
  if (!j.is_object()) throw ParameterError("solver config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "dt") c.dt = value.get<double>();
    else if (key == "delta") c.delta = value.get<double>();
    else if (key == "flux_epsilon") c.flux_epsilon = value.get<double>();
    else if (key == "max_iterations") c.max_iterations = value.get<std::size_t>();
    else if (key == "source_current") c.source_current = value.get<double>();
    else if (key == "conductivity_floor") c.conductivity_floor = value.get<double>();
    else if (key == "linear_tolerance") c.linear_tolerance = value.get<double>();
    else if (key == "initial_seed") c.initial_seed = value.get<std::uint64_t>();
    else if (key == "rule") {
      const auto rule = value.get<std::string>();
      if (rule == "explicit") c.rule = ConductivityRule::explicit_euler;
      else if (rule == "semi_implicit") c.rule = ConductivityRule::semi_implicit;
      else throw ParameterError("unknown conductivity rule '" + rule + "'");
    } else if (key == "initial") {
      const auto init = value.get<std::string>();
      if (init == "constant") c.initial = InitialConductivity::constant;
      else if (init == "random") c.initial = InitialConductivity::seeded_random;
      else throw ParameterError("unknown initial conductivity '" + init + "'");
    } else {
      throw ParameterError("unknown solver config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

}  // namespace amoeba
