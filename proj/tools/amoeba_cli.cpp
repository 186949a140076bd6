// amoeba: command-line front end for the graph generator, the solvers, the
// flux tracer and the benchmark sweep.
//
// Exit codes: 0 success, 1 oracle mismatch, 2 usage or input error,
// 3 solver or I/O failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "amoeba/baselines.hpp"
#include "amoeba/bench.hpp"
#include "amoeba/graph.hpp"
#include "amoeba/physarum.hpp"
#include "amoeba/report.hpp"
#include "amoeba/trace.hpp"

namespace {

using namespace amoeba;

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;
constexpr int kFailure = 3;

struct SolverFlags {
  double dt = SolverConfig{}.dt;
  double delta = SolverConfig{}.delta;
  double flux_epsilon = SolverConfig{}.flux_epsilon;
  std::size_t max_iterations = 0;
  double floor = SolverConfig{}.conductivity_floor;
  std::string rule = "explicit";

  void attach(CLI::App* app) {
    app->add_option("--dt", dt, "time step, 0 < dt < 1");
    app->add_option("--delta", delta, "stop threshold on total conductivity change, in per-sink demand units");
    app->add_option("--flux-epsilon", flux_epsilon, "support threshold as a fraction of per-sink demand");
    app->add_option("--max-iterations", max_iterations, "iteration budget (0: 10000 * nodes)");
    app->add_option("--floor", floor, "conductivity floor");
    app->add_option("--rule", rule, "conductivity update rule")->check(CLI::IsMember({"explicit", "semi_implicit"}));
  }

  SolverConfig config() const {
    SolverConfig c;
    c.dt = dt;
    c.delta = delta;
    c.flux_epsilon = flux_epsilon;
    c.max_iterations = max_iterations;
    c.conductivity_floor = floor;
    c.rule = rule == "explicit" ? ConductivityRule::explicit_euler : ConductivityRule::semi_implicit;
    c.validate();
    return c;
  }
};

void write_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

SolveMode make_mode(NodeId source, int sink) {
  return sink >= 0 ? SolveMode::two_terminal(source, sink) : SolveMode::tree(source);
}

// Tree mode: every distance. Two-terminal mode: the sink only.
bool amoeba_matches(const SptResult& result, const Distances& oracle) {
  if (result.mode.kind == ModeKind::tree) return distances_match(result.distances, oracle);
  const auto t = static_cast<std::size_t>(result.mode.sink);
  return result.distances[t] && oracle[t] && std::abs(*result.distances[t] - *oracle[t]) <= 1e-6 * *oracle[t];
}

int run_gen(std::size_t nodes, double prob, std::uint64_t seed, double wmin, double wmax, bool integer,
            const std::string& out) {
  GeneratorOptions options{wmin, wmax, integer ? WeightKind::integer : WeightKind::continuous};
  const auto graph = generate_erdos_renyi(nodes, prob, seed, options);
  if (out.empty() || out == "-") {
    write_graph(std::cout, graph);
  } else {
    save_graph(out, graph);
  }
  std::cerr << "generated " << graph.node_count() << " nodes, " << graph.edge_count() << " edges\n";
  return kOk;
}

int run_solve(const std::string& graph_path, const std::string& algo, NodeId source, int sink,
              const SolverFlags& flags, const std::string& out) {
  const auto graph = load_graph(graph_path);
  const auto oracle = label_setting_spt(graph, source).distances;
  if (algo == "amoeba") {
    const auto result = solve(graph, make_mode(source, sink), flags.config());
    auto j = result_json(result);
    const bool ok = amoeba_matches(result, oracle);
    j["matches_oracle"] = ok;
    write_json(j, out);
    return ok ? kOk : kMismatch;
  }
  const auto algorithm = algo == "label_setting" ? BaselineAlgorithm::label_setting : BaselineAlgorithm::bellman_ford;
  const auto result = run_baseline(graph, source, algorithm);
  auto j = baseline_json(graph, result, algorithm);
  const bool ok = distances_match(result.distances, oracle);
  j["matches_oracle"] = ok;
  write_json(j, out);
  return ok ? kOk : kMismatch;
}

UpdateSet load_or_sample_updates(const DirectedGraph& graph, const std::string& updates_path, double rue, double rcw,
                                 const std::string& category, std::uint64_t seed) {
  if (!updates_path.empty()) {
    std::ifstream in(updates_path);
    if (!in) throw ParameterError("cannot open '" + updates_path + "'");
    return read_updates(in, graph);
  }
  return sample_updates(graph, rue, rcw, parse_update_category(category), seed);
}

int run_update(const std::string& graph_path, const std::string& updates_path, double rue, double rcw,
               const std::string& category, std::uint64_t seed, NodeId source, int sink, const SolverFlags& flags,
               const std::string& out_graph, const std::string& out) {
  const auto graph = load_graph(graph_path);
  const auto config = flags.config();
  const auto updates = load_or_sample_updates(graph, updates_path, rue, rcw, category, seed);
  const auto mutated = apply_updates(graph, updates);
  if (!out_graph.empty()) save_graph(out_graph, mutated);

  const auto mode = make_mode(source, sink);
  const auto initial = solve(graph, mode, config);
  const auto warm = resolve_after_update(initial, mutated, config);
  const bool ok = amoeba_matches(warm, label_setting_spt(mutated, source).distances);

  nlohmann::json j;
  j["category"] = to_string(updates.category);
  j["changes"] = updates.changes.size();
  j["initial_iterations"] = initial.iterations_used;
  j["initial_converged"] = initial.converged;
  j["result"] = result_json(warm);
  j["matches_oracle"] = ok;
  write_json(j, out);
  return ok ? kOk : kMismatch;
}

// "K,category,rue,rcw"
ScheduledUpdate parse_event(const std::string& text, const DirectedGraph& graph, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  if (parts.size() != 4) throw ParameterError("event '" + text + "' is not K,category,rue,rcw");
  ScheduledUpdate event;
  try {
    event.trigger_iteration = std::stoull(parts[0]);
    event.updates = sample_updates(graph, std::stod(parts[2]), std::stod(parts[3]), parse_update_category(parts[1]), seed);
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ParameterError*>(&e)) throw;
    throw ParameterError("event '" + text + "': " + e.what());
  }
  return event;
}

int run_trace(const std::string& graph_path, const std::vector<std::string>& events, std::uint64_t seed,
              NodeId source, int sink, std::size_t every, const SolverFlags& flags, const std::string& out) {
  auto graph = load_graph(graph_path);
  std::vector<ScheduledUpdate> schedule;
  DirectedGraph current = graph;
  for (std::size_t i = 0; i < events.size(); ++i) {
    schedule.push_back(parse_event(events[i], current, seed + i));
    current = apply_updates(current, schedule.back().updates);
  }
  const auto result = trace(graph, make_mode(source, sink), flags.config(), schedule, every);
  if (out.empty() || out == "-") {
    write_trace_csv(std::cout, result);
  } else {
    std::ofstream file(out);
    if (!file) throw ParameterError("cannot open '" + out + "' for writing");
    write_trace_csv(file, result);
  }
  std::cerr << "recorded " << result.frames.size() << " frames, converged=" << (result.converged ? "true" : "false")
            << '\n';
  return kOk;
}

int run_bench(const std::string& config_path, const std::string& out_dir, std::size_t threads) {
  std::ifstream in(config_path);
  if (!in) throw ParameterError("cannot open '" + config_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(config_path + ": " + e.what());
  }
  auto config = experiment_config_from_json(j);
  if (const char* env = std::getenv("PHYSARUM_SEED")) {
    try {
      config.base_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ParameterError(std::string("PHYSARUM_SEED is not an unsigned integer: ") + env);
    }
  }
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (threads > 0) config.threads = threads;

  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path dir(config.output_dir);
  std::vector<ReportRow> rows;
  try {
    rows = run_sweep(config);
  } catch (const OracleMismatch& e) {
    std::cerr << "oracle mismatch: " << e.what() << '\n';
    return kMismatch;
  }
  std::ofstream rows_csv(dir / "rows.csv");
  write_rows_csv(rows_csv, rows);
  std::ofstream summary_csv(dir / "summary.csv");
  write_summary_csv(summary_csv, summarize(rows));
  std::ofstream effective(dir / "config.json");
  effective << experiment_config_json(config).dump(2) << '\n';
  if (!rows_csv || !summary_csv || !effective) throw std::runtime_error("failed writing reports to " + dir.string());
  std::cerr << "wrote " << rows.size() << " rows to " << (dir / "rows.csv").string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive amoeba shortest-path-tree solver"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a seeded directed Erdos-Renyi graph");
  std::size_t nodes = 0;
  double prob = 0.0, wmin = 1.0, wmax = 1000.0;
  std::uint64_t seed = 1;
  bool integer = false;
  std::string out;
  gen->add_option("--nodes", nodes, "node count")->required();
  gen->add_option("--prob", prob, "edge probability per ordered pair")->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--wmin", wmin, "smallest edge length");
  gen->add_option("--wmax", wmax, "largest edge length");
  gen->add_flag("--integer", integer, "draw integer lengths");
  gen->add_option("--out", out, "output file (default stdout)");

  SolverFlags flags;
  std::string graph_path, algo = "amoeba";
  NodeId source = 0;
  int sink = -1;

  auto* solve_cmd = app.add_subcommand("solve", "one shortest-path-tree run, JSON result");
  solve_cmd->add_option("graph", graph_path, "graph file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--algo", algo, "solver")->check(CLI::IsMember({"amoeba", "label_setting", "bellman_ford"}));
  solve_cmd->add_option("--source", source, "source node");
  solve_cmd->add_option("--sink", sink, "sink node; selects two-terminal mode (amoeba only)");
  solve_cmd->add_option("--out", out, "output file (default stdout)");
  flags.attach(solve_cmd);

  auto* update = app.add_subcommand("update", "apply edge-weight updates and warm-resolve");
  std::string updates_path, category = "mixed", out_graph;
  double rue = 0.2, rcw = 0.1;
  update->add_option("graph", graph_path, "graph file")->required()->check(CLI::ExistingFile);
  update->add_option("--updates", updates_path, "update file of 'tail head new_length' lines")
      ->check(CLI::ExistingFile);
  update->add_option("--rue", rue, "ratio of updated edges");
  update->add_option("--rcw", rcw, "ratio of changed weight");
  update->add_option("--category", category, "increase | decrease | mixed")
      ->check(CLI::IsMember({"increase", "decrease", "mixed"}));
  update->add_option("--seed", seed, "update sampling seed");
  update->add_option("--source", source, "source node");
  update->add_option("--sink", sink, "sink node; selects two-terminal mode");
  update->add_option("--out-graph", out_graph, "write the updated graph here");
  update->add_option("--out", out, "output file (default stdout)");
  flags.attach(update);

  auto* trace_cmd = app.add_subcommand("trace", "flux trajectory CSV for an update schedule");
  std::vector<std::string> events;
  std::size_t every = 1;
  trace_cmd->add_option("graph", graph_path, "graph file")->required()->check(CLI::ExistingFile);
  trace_cmd->add_option("--event", events, "update event K,category,rue,rcw (repeatable)");
  trace_cmd->add_option("--seed", seed, "seed for the first event; later events use seed+i");
  trace_cmd->add_option("--source", source, "source node");
  trace_cmd->add_option("--sink", sink, "sink node; selects two-terminal mode");
  trace_cmd->add_option("--every", every, "record every k-th iteration")->check(CLI::PositiveNumber);
  trace_cmd->add_option("--out", out, "output CSV (default stdout)");
  flags.attach(trace_cmd);

  auto* bench = app.add_subcommand("bench", "run a sweep from a JSON config");
  std::string config_path, out_dir;
  std::size_t threads = 0;
  bench->add_option("--config", config_path, "experiment config JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--out-dir", out_dir, "directory for rows.csv and summary.csv");
  bench->add_option("--threads", threads, "worker threads (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*gen) return run_gen(nodes, prob, seed, wmin, wmax, integer, out);
    if (*solve_cmd) {
      if (sink >= 0 && algo != "amoeba") throw ParameterError("--sink applies to the amoeba solver only");
      return run_solve(graph_path, algo, source, sink, flags, out);
    }
    if (*update) return run_update(graph_path, updates_path, rue, rcw, category, seed, source, sink, flags, out_graph, out);
    if (*trace_cmd) return run_trace(graph_path, events, seed, source, sink, every, flags, out);
    if (*bench) return run_bench(config_path, out_dir, threads);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnreachableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
