#include <doctest.h>

#include <set>
#include <sstream>

#include "amoeba/bench.hpp"
#include "amoeba/report.hpp"

using namespace amoeba;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.datasets = {{"tiny", 20, 0.2}};
  c.repetitions = 2;
  c.base_seed = 5;
  return c;
}

ReportRow row(std::string dataset, BenchAlgorithm algo, double ms, std::size_t iters = 0) {
  ReportRow r;
  r.dataset = std::move(dataset);
  r.algorithm = algo;
  r.wall_time_ms = ms;
  r.iterations = iters;
  r.rue = 0.2;
  r.rcw = 0.1;
  return r;
}

// Everything except the wall time.
auto comparable(const ReportRow& r) {
  return std::tuple(r.dataset, r.n, r.m, r.category, r.swept, r.rue, r.rcw, r.repetition, r.algorithm, r.iterations,
                    r.distances_match_oracle, r.graph_seed, r.regenerations);
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("reference datasets") {
    const auto d = reference_datasets();
    REQUIRE(d.size() == 4);
    CHECK(d[0].n == 500);
    CHECK(d[0].p == 0.02);
    CHECK(d[3].n == 2000);
    CHECK(d[3].p == 0.005);
  }

  TEST_CASE("config validation") {
    auto c = tiny_config();
    CHECK_NOTHROW(c.validate());
    c.repetitions = 0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = tiny_config();
    c.datasets.clear();
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = tiny_config();
    c.rcw_values = {0.95};
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = tiny_config();
    c.rue_values = {0.0};
    CHECK_THROWS_AS(c.validate(), ParameterError);
  }

  TEST_CASE("config json round trip") {
    auto c = tiny_config();
    c.threads = 3;
    c.solver.dt = 0.25;
    c.weights.weights = WeightKind::integer;
    const auto j = experiment_config_json(c);
    const auto back = experiment_config_from_json(j);
    CHECK(experiment_config_json(back) == j);
    CHECK(back.solver.dt == 0.25);
    CHECK(back.threads == 3);
    CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json{{"bogus", 1}}), ParameterError);
    CHECK_THROWS_AS(solver_config_from_json(nlohmann::json{{"dt", 0.5}, {"typo", 1}}), ParameterError);
    CHECK(solver_config_from_json(solver_config_json(c.solver)).dt == 0.25);
  }

  TEST_CASE("cell seeds are stable and distinct") {
    std::set<std::uint64_t> seen;
    for (std::size_t d = 0; d < 4; ++d) {
      for (auto cat : {UpdateCategory::increase, UpdateCategory::decrease, UpdateCategory::mixed}) {
        for (double v : {0.1, 0.2, 0.3}) {
          for (std::size_t rep = 0; rep < 10; ++rep) {
            const auto s = cell_seed(1, d, cat, SweepParameter::rue, v, rep);
            CHECK(s == cell_seed(1, d, cat, SweepParameter::rue, v, rep));
            seen.insert(s);
            seen.insert(cell_seed(1, d, cat, SweepParameter::rcw, v, rep));
          }
        }
      }
    }
    CHECK(seen.size() == 2 * 4 * 3 * 3 * 10);
    CHECK(cell_seed(1, 0, UpdateCategory::mixed, SweepParameter::rue, 0.1, 0) !=
          cell_seed(2, 0, UpdateCategory::mixed, SweepParameter::rue, 0.1, 0));
  }

  TEST_CASE("distance comparison") {
    CHECK(distances_match({0.0, 1.0}, {0.0, 1.0 + 1e-9}));
    CHECK_FALSE(distances_match({0.0, 1.0}, {0.0, 1.1}));
    CHECK_FALSE(distances_match({0.0, std::nullopt}, {0.0, 1.0}));
    CHECK(distances_match({0.0, std::nullopt}, {0.0, std::nullopt}));
    CHECK_FALSE(distances_match({0.0}, {0.0, 1.0}));
  }

  TEST_CASE("rue sweep cardinality and fixed parameters") {
    auto c = tiny_config();
    c.rcw_values.clear();
    const auto rows = run_sweep(c);
    CHECK(rows.size() == 6 * 2 * 3 * 4);
    for (const auto& r : rows) {
      CHECK(r.swept == SweepParameter::rue);
      CHECK(r.rcw == 0.1);
      CHECK(r.distances_match_oracle);
      CHECK(r.n == 20);
      if (r.algorithm == BenchAlgorithm::amoeba_warm || r.algorithm == BenchAlgorithm::amoeba_cold) {
        CHECK(r.iterations > 0);
      }
    }
  }

  TEST_CASE("rcw sweep holds rue fixed") {
    auto c = tiny_config();
    c.rue_values.clear();
    c.rcw_values = {0.1, 0.6};
    c.repetitions = 1;
    const auto rows = run_sweep(c);
    CHECK(rows.size() == 2 * 1 * 3 * 4);
    for (const auto& r : rows) {
      CHECK(r.swept == SweepParameter::rcw);
      CHECK(r.rue == 0.2);
    }
  }

  TEST_CASE("sweeps are reproducible and thread-count independent") {
    auto c = tiny_config();
    c.rue_values = {0.1, 0.3};
    c.rcw_values = {0.2};
    const auto a = run_sweep(c);
    const auto b = run_sweep(c);
    c.threads = 3;
    const auto t = run_sweep(c);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == t.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(comparable(a[i]) == comparable(b[i]));
      CHECK(comparable(a[i]) == comparable(t[i]));
    }
  }

  TEST_CASE("summary statistics") {
    const std::vector<ReportRow> same{row("x", BenchAlgorithm::label_setting, 2.0),
                                      row("x", BenchAlgorithm::label_setting, 2.0)};
    auto s = summarize(same);
    REQUIRE(s.size() == 1);
    CHECK(s[0].count == 2);
    CHECK(s[0].mean_ms == 2.0);
    CHECK(s[0].std_ms == 0.0);

    const std::vector<ReportRow> spread{row("x", BenchAlgorithm::amoeba_warm, 1.0, 10),
                                        row("x", BenchAlgorithm::amoeba_warm, 3.0, 20)};
    s = summarize(spread);
    CHECK(s[0].mean_ms == 2.0);
    CHECK(s[0].std_ms == doctest::Approx(std::sqrt(2.0)));
    CHECK(s[0].mean_iterations == 15.0);

    CHECK(summarize({row("x", BenchAlgorithm::label_setting, 1.0)})[0].std_ms == 0.0);
    CHECK_THROWS_AS(summarize({}), ParameterError);
  }

  TEST_CASE("summary grouping is order independent") {
    std::vector<ReportRow> rows;
    for (int k = 0; k < 5; ++k) {
      rows.push_back(row("a", BenchAlgorithm::label_setting, 0.1 * k + 0.3));
      rows.push_back(row("b", BenchAlgorithm::label_setting, 1.0 / (k + 1)));
      rows.push_back(row("a", BenchAlgorithm::bellman_ford, 7.0 * k));
    }
    const auto s = summarize(rows);
    CHECK(s.size() == 3);
    auto reversed = rows;
    std::reverse(reversed.begin(), reversed.end());
    const auto r = summarize(reversed);
    REQUIRE(r.size() == 3);
    for (const auto& x : s) {
      const auto it = std::find_if(r.begin(), r.end(), [&](const SummaryRow& y) {
        return y.dataset == x.dataset && y.algorithm == x.algorithm;
      });
      REQUIRE(it != r.end());
      CHECK(it->mean_ms == x.mean_ms);
      CHECK(it->std_ms == x.std_ms);
    }
  }

  TEST_CASE("csv headers") {
    std::ostringstream rows, summary;
    write_rows_csv(rows, {row("x", BenchAlgorithm::bellman_ford, 1.5)});
    write_summary_csv(summary, summarize({row("x", BenchAlgorithm::bellman_ford, 1.5)}));
    CHECK(rows.str().rfind("dataset,n,m,category,rue,rcw,rep,algorithm,wall_time_ms,iterations,ok\n", 0) == 0);
    CHECK(summary.str().rfind("dataset,category,param_name,param_value,algorithm,mean_ms,std_ms,mean_iters\n", 0) == 0);
    CHECK(rows.str().find(",bellman_ford,") != std::string::npos);
  }

  TEST_CASE("result json") {
    const DirectedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 3.0}});
    const auto r = solve(g, SolveMode::two_terminal(0, 2), SolverConfig{});
    const auto j = result_json(r);
    CHECK(j["mode"] == "two_terminal");
    CHECK(j["converged"] == true);
    CHECK(j["support"] == nlohmann::json::array({{0, 1}, {1, 2}}));
    CHECK(j["distances"][2] == 2.0);
    CHECK(j["pressure_drop"].get<double>() == doctest::Approx(2.0));
    CHECK(j.contains("wall_time_ms"));

    const DirectedGraph h(3, {{0, 1, 1.0}});
    const auto b = baseline_json(h, label_setting_spt(h, 0), BaselineAlgorithm::label_setting);
    CHECK(b["distances"][2].is_null());
  }
}
