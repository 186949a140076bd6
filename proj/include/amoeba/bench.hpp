#ifndef AMOEBA_BENCH_HPP
#define AMOEBA_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "amoeba/graph.hpp"
#include "amoeba/physarum.hpp"

namespace amoeba {

struct Dataset {
  std::string name;
  std::size_t n = 0;
  double p = 0.0;
};

// The four graph sizes of the reference experiments.
std::vector<Dataset> reference_datasets();

enum class SweepParameter { rue, rcw };

std::string_view to_string(SweepParameter parameter);

struct ExperimentConfig {
  std::vector<Dataset> datasets;
  // Swept with rcw held at fixed_rcw; empty skips the rue sweep.
  std::vector<double> rue_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  // Swept with rue held at fixed_rue; empty skips the rcw sweep.
  std::vector<double> rcw_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  double fixed_rcw = 0.1;
  double fixed_rue = 0.2;
  std::vector<UpdateCategory> categories{UpdateCategory::increase, UpdateCategory::decrease, UpdateCategory::mixed};
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 1;
  std::size_t threads = 1;
  GeneratorOptions weights;
  SolverConfig solver;
  std::string output_dir = ".";

  // Throws ParameterError on empty datasets, zero repetitions, or rue / rcw
  // values outside the ranges sample_updates accepts.
  void validate() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_json(const ExperimentConfig& config);

enum class BenchAlgorithm { amoeba_warm, amoeba_cold, label_setting, bellman_ford };

std::string_view to_string(BenchAlgorithm algorithm);

struct ReportRow {
  std::string dataset;
  std::size_t n = 0;
  std::size_t m = 0;
  UpdateCategory category = UpdateCategory::mixed;
  SweepParameter swept = SweepParameter::rue;
  double rue = 0.0;
  double rcw = 0.0;
  std::size_t repetition = 0;
  BenchAlgorithm algorithm = BenchAlgorithm::amoeba_warm;
  double wall_time_ms = 0.0;
  std::size_t iterations = 0;  // amoeba rows only
  bool distances_match_oracle = false;
  std::uint64_t graph_seed = 0;
  std::size_t regenerations = 0;  // graphs rejected for unreachable nodes
};

// Raised when a solver's distances disagree with the label-setting oracle.
class OracleMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stable per-cell seed (splitmix64 over the cell coordinates).
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t dataset_index, UpdateCategory category,
                        SweepParameter swept, double value, std::size_t repetition);

// Relative-error distance comparison used for every oracle check.
bool distances_match(const Distances& candidate, const Distances& oracle, double rel_tol = 1e-6);

// One row per (dataset, category, swept value, repetition, algorithm), in
// that nesting order. Throws OracleMismatch on the first disagreement.
std::vector<ReportRow> run_sweep(const ExperimentConfig& config);

struct SummaryRow {
  std::string dataset;
  UpdateCategory category = UpdateCategory::mixed;
  SweepParameter swept = SweepParameter::rue;
  double value = 0.0;
  BenchAlgorithm algorithm = BenchAlgorithm::amoeba_warm;
  std::size_t count = 0;
  double mean_ms = 0.0;
  double std_ms = 0.0;  // sample standard deviation, 0 for a single repetition
  double mean_iterations = 0.0;
};

// Groups by (dataset, category, swept parameter, value, algorithm) in order
// of first appearance.
std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);

// dataset,n,m,category,rue,rcw,rep,algorithm,wall_time_ms,iterations,ok
void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows);
// dataset,category,param_name,param_value,algorithm,mean_ms,std_ms,mean_iters
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);

}  // namespace amoeba

#endif  // AMOEBA_BENCH_HPP
