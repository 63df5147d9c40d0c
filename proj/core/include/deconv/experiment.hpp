#pragma once

#include "deconv/adaptive_test.hpp"
#include "deconv/quadrature.hpp"
#include "deconv/stable_index.hpp"

#include <string>
#include <vector>

namespace deconv {

enum class Scenario {
  level,
  power,
  risk_density,
  risk_functional,
  s_index,
  clt,
};

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

/// One reproducible Monte Carlo experiment. Replicate i always consumes RNG
/// sub-stream i of its phase, so outputs are byte-identical for any thread
/// count. Field defaults mirror the catalog's standard setups.
struct ExperimentConfig {
  Scenario scenario = Scenario::level;
  std::string f = "laplace(1)";    // data-generating density
  std::string f0 = "laplace(1)";   // null density for tests
  std::string noise = "poly(2,1)";
  std::vector<long long> n_list = {2000};
  int reps = 1000;
  int calibration_reps = 1000;
  double eps = 0.1;
  std::uint64_t seed = 1;
  int threads = 1;
  QuadratureSpec quadrature{50.0, 2048};
  GridBounds grid;
  double grid_c = 0.0;
  GridRegime grid_regime = GridRegime::ordinary_null;
  StableIndexParams stable_index;
  double beta_bar = 1.0;
  double true_s = 1.5;       // s_index scenario: the truth s_tilde targets
  double x_eval = 0.0;       // risk_density evaluation point
  std::string clt_statistic = "kernel";  // "kernel" or "product"
  std::string out_dir;

  void validate() const;
  static ExperimentConfig from_json_string(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  std::string to_json_string() const;
};

struct ExperimentResult {
  std::string summary_json;
  std::string csv_path;
  std::string summary_path;
};

/// Runs the configured scenario, writes results.csv and summary.json under
/// cfg.out_dir (when set), and returns the summary. Every number in the
/// summary is recomputable from the CSV rows.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace deconv
