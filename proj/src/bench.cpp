#include "amoeba/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "amoeba/baselines.hpp"
#include "amoeba/report.hpp"

namespace amoeba {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Cell {
  std::size_t dataset_index;
  UpdateCategory category;
  SweepParameter swept;
  double value;
  std::size_t repetition;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    for (auto category : config.categories) {
      for (double v : config.rue_values) {
        for (std::size_t r = 0; r < config.repetitions; ++r) cells.push_back({d, category, SweepParameter::rue, v, r});
      }
      for (double v : config.rcw_values) {
        for (std::size_t r = 0; r < config.repetitions; ++r) cells.push_back({d, category, SweepParameter::rcw, v, r});
      }
    }
  }
  return cells;
}

std::string describe(const ExperimentConfig& config, const Cell& cell, std::uint64_t seed) {
  std::ostringstream os;
  os << "dataset=" << config.datasets[cell.dataset_index].name << " category=" << to_string(cell.category) << ' '
     << to_string(cell.swept) << '=' << cell.value << " rep=" << cell.repetition << " seed=" << seed;
  return os.str();
}

std::vector<ReportRow> run_cell(const ExperimentConfig& config, const Cell& cell) {
  const auto& dataset = config.datasets[cell.dataset_index];
  const double rue = cell.swept == SweepParameter::rue ? cell.value : config.fixed_rue;
  const double rcw = cell.swept == SweepParameter::rcw ? cell.value : config.fixed_rcw;
  constexpr NodeId source = 0;

  std::uint64_t seed = cell_seed(config.base_seed, cell.dataset_index, cell.category, cell.swept, cell.value,
                                 cell.repetition);
  std::size_t regenerations = 0;
  DirectedGraph graph = generate_erdos_renyi(dataset.n, dataset.p, seed, config.weights);
  while (!unreachable_from(graph, source).empty()) {
    if (++regenerations > 1000) {
      throw ParameterError("dataset " + dataset.name + ": no graph with every node reachable from 0 in 1000 draws");
    }
    seed = splitmix64(seed);
    graph = generate_erdos_renyi(dataset.n, dataset.p, seed, config.weights);
  }

  const auto mode = SolveMode::tree(source);
  const SptResult initial = solve(graph, mode, config.solver);
  const UpdateSet updates = sample_updates(graph, rue, rcw, cell.category, splitmix64(seed ^ 0x5eedULL));
  const DirectedGraph mutated = apply_updates(graph, updates);
  const Distances oracle = label_setting_spt(mutated, source).distances;

  std::vector<ReportRow> rows;
  auto emit = [&](BenchAlgorithm algorithm, double ms, std::size_t iterations, const Distances& distances) {
    ReportRow row;
    row.dataset = dataset.name;
    row.n = graph.node_count();
    row.m = graph.edge_count();
    row.category = cell.category;
    row.swept = cell.swept;
    row.rue = rue;
    row.rcw = rcw;
    row.repetition = cell.repetition;
    row.algorithm = algorithm;
    row.wall_time_ms = ms;
    row.iterations = iterations;
    row.distances_match_oracle = distances_match(distances, oracle);
    row.graph_seed = seed;
    row.regenerations = regenerations;
    if (!row.distances_match_oracle) {
      throw OracleMismatch(std::string(to_string(algorithm)) + " disagrees with the label-setting oracle at " +
                           describe(config, cell, seed));
    }
    rows.push_back(std::move(row));
  };

  auto start = Clock::now();
  const SptResult warm = resolve_after_update(initial, mutated, config.solver);
  emit(BenchAlgorithm::amoeba_warm, elapsed_ms(start), warm.iterations_used, warm.distances);

  start = Clock::now();
  const SptResult cold = solve(mutated, mode, config.solver);
  emit(BenchAlgorithm::amoeba_cold, elapsed_ms(start), cold.iterations_used, cold.distances);

  for (auto algorithm : {BaselineAlgorithm::label_setting, BaselineAlgorithm::bellman_ford}) {
    start = Clock::now();
    const BaselineResult r = recompute_on_update(graph, updates, source, algorithm);
    emit(algorithm == BaselineAlgorithm::label_setting ? BenchAlgorithm::label_setting : BenchAlgorithm::bellman_ford,
         elapsed_ms(start), 0, r.distances);
  }
  return rows;
}

double rounded_key(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

std::vector<Dataset> reference_datasets() {
  return {{"dataset1", 500, 0.02}, {"dataset2", 1000, 0.01}, {"dataset3", 1500, 0.006}, {"dataset4", 2000, 0.005}};
}

std::string_view to_string(SweepParameter parameter) { return parameter == SweepParameter::rue ? "rue" : "rcw"; }

std::string_view to_string(BenchAlgorithm algorithm) {
  switch (algorithm) {
    case BenchAlgorithm::amoeba_warm: return "amoeba_warm";
    case BenchAlgorithm::amoeba_cold: return "amoeba_cold";
    case BenchAlgorithm::label_setting: return "label_setting";
    case BenchAlgorithm::bellman_ford: return "bellman_ford";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw ParameterError("experiment needs at least one dataset");
  for (const auto& d : datasets) {
    if (d.n < 2 || !(d.p > 0.0 && d.p <= 1.0)) throw ParameterError("dataset " + d.name + " has invalid n or p");
  }
  if (categories.empty()) throw ParameterError("experiment needs at least one category");
  if (repetitions == 0) throw ParameterError("repetitions must be at least 1");
  if (threads == 0) throw ParameterError("threads must be at least 1");
  if (rue_values.empty() && rcw_values.empty()) throw ParameterError("nothing to sweep: rue_values and rcw_values are empty");
  auto check_rue = [](double v) {
    if (!(v > 0.0 && v <= 1.0)) throw ParameterError("rue " + std::to_string(v) + " outside (0, 1]");
  };
  auto check_rcw = [&](double v) {
    for (auto c : categories) {
      const double hi = c == UpdateCategory::increase ? 10.0 : 0.9;
      if (!(v > 0.0 && v <= hi)) {
        throw ParameterError("rcw " + std::to_string(v) + " outside the range for " + std::string(to_string(c)));
      }
    }
  };
  for (double v : rue_values) check_rue(v);
  for (double v : rcw_values) check_rcw(v);
  if (!rue_values.empty()) check_rcw(fixed_rcw);
  if (!rcw_values.empty()) check_rue(fixed_rue);
  solver.validate();
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParameterError("experiment config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "datasets") {
      c.datasets.clear();
      for (const auto& d : value) {
        Dataset ds;
        ds.n = d.at("n").get<std::size_t>();
        ds.p = d.at("p").get<double>();
        ds.name = d.value("name", "n" + std::to_string(ds.n));
        c.datasets.push_back(std::move(ds));
      }
    } else if (key == "rue_values") {
      c.rue_values = value.get<std::vector<double>>();
    } else if (key == "rcw_values") {
      c.rcw_values = value.get<std::vector<double>>();
    } else if (key == "fixed_rcw") {
      c.fixed_rcw = value.get<double>();
    } else if (key == "fixed_rue") {
      c.fixed_rue = value.get<double>();
    } else if (key == "categories") {
      c.categories.clear();
      for (const auto& s : value) c.categories.push_back(parse_update_category(s.get<std::string>()));
    } else if (key == "repetitions") {
      c.repetitions = value.get<std::size_t>();
    } else if (key == "base_seed") {
      c.base_seed = value.get<std::uint64_t>();
    } else if (key == "threads") {
      c.threads = value.get<std::size_t>();
    } else if (key == "weights") {
      c.weights.weight_min = value.value("min", c.weights.weight_min);
      c.weights.weight_max = value.value("max", c.weights.weight_max);
      c.weights.weights = value.value("integer", false) ? WeightKind::integer : WeightKind::continuous;
    } else if (key == "solver_config") {
      c.solver = solver_config_from_json(value);
    } else if (key == "output_dir") {
      c.output_dir = value.get<std::string>();
    } else {
      throw ParameterError("unknown experiment config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

nlohmann::json experiment_config_json(const ExperimentConfig& c) {
  nlohmann::json datasets = nlohmann::json::array();
  for (const auto& d : c.datasets) datasets.push_back({{"name", d.name}, {"n", d.n}, {"p", d.p}});
  nlohmann::json categories = nlohmann::json::array();
  for (auto cat : c.categories) categories.push_back(std::string(to_string(cat)));
  return {{"datasets", datasets},
          {"rue_values", c.rue_values},
          {"rcw_values", c.rcw_values},
          {"fixed_rcw", c.fixed_rcw},
          {"fixed_rue", c.fixed_rue},
          {"categories", categories},
          {"repetitions", c.repetitions},
          {"base_seed", c.base_seed},
          {"threads", c.threads},
          {"weights",
           {{"min", c.weights.weight_min},
            {"max", c.weights.weight_max},
            {"integer", c.weights.weights == WeightKind::integer}}},
          {"solver_config", solver_config_json(c.solver)},
          {"output_dir", c.output_dir}};
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t dataset_index, UpdateCategory category,
                        SweepParameter swept, double value, std::size_t repetition) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ dataset_index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(category));
  h = splitmix64(h ^ static_cast<std::uint64_t>(swept));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(value));
  return splitmix64(h ^ repetition);
}

bool distances_match(const Distances& candidate, const Distances& oracle, double rel_tol) {
  if (candidate.size() != oracle.size()) return false;
  for (std::size_t v = 0; v < oracle.size(); ++v) {
    if (candidate[v].has_value() != oracle[v].has_value()) return false;
    if (!oracle[v]) continue;
    const double expected = *oracle[v];
    if (!(std::abs(*candidate[v] - expected) <= rel_tol * std::abs(expected))) return false;
  }
  return true;
}

std::vector<ReportRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto cells = enumerate_cells(config);
  std::vector<std::vector<ReportRow>> results(cells.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex failure_mutex;
  std::size_t failed_cell = cells.size();
  std::exception_ptr failure;

  // Each worker runs whole cells, so every timing in a cell comes from one thread.
  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = run_cell(config, cells[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_cell) {
          failed_cell = i;
          failure = std::current_exception();
        }
        abort.store(true);
      }
    }
  };

  const std::size_t thread_count = std::min(config.threads, std::max<std::size_t>(cells.size(), 1));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ReportRow> rows;
  rows.reserve(cells.size() * 4);
  for (auto& cell_rows : results) {
    for (auto& row : cell_rows) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw ParameterError("summarize: no rows");
  using Key = std::tuple<std::string, UpdateCategory, SweepParameter, double, BenchAlgorithm>;
  std::map<Key, std::size_t> index;
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> times, iterations;
  for (const auto& row : rows) {
    const double value = row.swept == SweepParameter::rue ? row.rue : row.rcw;
    const Key key{row.dataset, row.category, row.swept, rounded_key(value), row.algorithm};
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      SummaryRow s;
      s.dataset = row.dataset;
      s.category = row.category;
      s.swept = row.swept;
      s.value = value;
      s.algorithm = row.algorithm;
      out.push_back(std::move(s));
      times.emplace_back();
      iterations.emplace_back();
    }
    times[it->second].push_back(row.wall_time_ms);
    iterations[it->second].push_back(static_cast<double>(row.iterations));
  }
  // Sorting before summing makes the statistics independent of row order.
  auto mean_of = [](std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
  };
  for (std::size_t g = 0; g < out.size(); ++g) {
    auto& s = out[g];
    s.count = times[g].size();
    s.mean_ms = mean_of(times[g]);
    s.mean_iterations = mean_of(iterations[g]);
    if (s.count > 1) {
      double ss = 0.0;
      for (double t : times[g]) ss += (t - s.mean_ms) * (t - s.mean_ms);
      s.std_ms = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
  }
  return out;
}

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "dataset,n,m,category,rue,rcw,rep,algorithm,wall_time_ms,iterations,ok\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.n << ',' << r.m << ',' << to_string(r.category) << ',' << r.rue << ',' << r.rcw
        << ',' << r.repetition << ',' << to_string(r.algorithm) << ',' << r.wall_time_ms << ',' << r.iterations
        << ',' << (r.distances_match_oracle ? "true" : "false") << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "dataset,category,param_name,param_value,algorithm,mean_ms,std_ms,mean_iters\n";
  for (const auto& s : summary) {
    out << s.dataset << ',' << to_string(s.category) << ',' << to_string(s.swept) << ',' << s.value << ','
        << to_string(s.algorithm) << ',' << s.mean_ms << ',' << s.std_ms << ',' << s.mean_iterations << '\n';
  }
}

}  // namespace amoeba
