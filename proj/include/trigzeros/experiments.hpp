#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "trigzeros/common.hpp"

namespace trigzeros {

enum class EnsembleKind { qualls, dunnage, mollified };

std::string ensemble_name(EnsembleKind kind);

struct IntervalSpec {
  enum class Mode { full_circle, fixed, shrinking };
  Mode mode = Mode::full_circle;
  double a = 0.0;
  double b = kTwoPi;
  double gamma = 0.0;  // b - a = 2 pi N^{-gamma}
  std::pair<double, double> bounds_for(int degree) const;
};

struct MollifyRule {
  bool use_power = false;  // M = N^beta
  double beta = 0.2;
  std::vector<double> values;  // explicit widths otherwise (first entry used)
  double value_for(int degree) const;
};

struct ExperimentConfig {
  std::string experiment;
  std::vector<int> degrees;
  long trials = 4000;
  std::uint64_t seed = 1;
  IntervalSpec interval;
  double grid_factor = 8.0;
  int threads = 0;  // 0 = hardware concurrency
  EnsembleKind ensemble = EnsembleKind::qualls;
  MollifyRule mollify;
  double quad_tol = 1e-7;
  double tail_eps = 1e-10;
  bool keep_samples = true;  // include normalized samples in the JSON output

  void validate() const;
};

struct DegreeSummary {
  int degree = 0;
  long trials = 0;
  double interval_a = 0.0, interval_b = 0.0;
  double mollify_width = 0.0;  // mollified ensemble only
  double mean = 0.0, variance = 0.0, third_central = 0.0;
  double expected = 0.0;       // analytic (asymptotic for dunnage)
  double var_quad = 0.0, var_quad_error = 0.0;
  double asymptotic_var = 0.0;  // c (b-a) N / (2 pi), short-interval runs
  double ks_raw = 0.0, p_raw = 0.0;
  double ks_jittered = 0.0, p_jittered = 0.0;
  bool ks_skipped = false;
  bool degenerate = false;    // N = 1
  bool exploratory = false;   // no analytic variance reference
  long anomalies = 0;
  long audited = 0;
  long audit_mismatches = 0;  // 32x grid audit disagreements
  std::vector<double> normalized;
  double wall_seconds = 0.0;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<DegreeSummary> records;
  double c_reference = 0.0;  // set for short-interval runs
  double total_seconds = 0.0;
};

ExperimentSummary run_full_circle_clt(const ExperimentConfig& config);
ExperimentSummary run_short_interval_clt(const ExperimentConfig& config);

struct VarianceRow {
  int degree = 0;
  double variance = 0.0, j_integral = 0.0, expected = 0.0, quad_error = 0.0;
  double var_over_n = 0.0, deviation = 0.0;
  bool tol_achieved = true;
};

struct VarianceTable {
  std::vector<VarianceRow> rows;
  double c_reference = 0.0;
  double fitted_exponent = 0.0;  // slope of log|deviation| vs log N
  bool all_tol_achieved = true;
};

VarianceTable run_variance_convergence(const std::vector<int>& degrees, double quad_tol);

struct VarDiffRow {
  double width = 0.0;
  long trials = 0;
  double mean_diff = 0.0;
  double var_diff = 0.0;
  double ratio = 0.0;  // Var(Z - Z^M)/N
  int truncation_index = 0;
  double wall_seconds = 0.0;
};

struct VarDiffTable {
  int degree = 0;
  std::uint64_t seed = 0;
  std::vector<VarDiffRow> rows;
  double total_seconds = 0.0;
};

VarDiffTable run_var_diff(int degree, const std::vector<double>& widths, long trials,
                          std::uint64_t seed, int threads = 0, double grid_factor = 8.0,
                          double tail_eps = 1e-10);

// Deterministic trial-level parallelism: every trial writes only its own
// slots, so results are independent of the thread count.
void parallel_trials(long trials, int threads, const std::function<void(long)>& body);

nlohmann::json to_json(const ExperimentSummary& summary);
nlohmann::json to_json(const VarianceTable& table);
nlohmann::json to_json(const VarDiffTable& table);
std::string to_csv(const ExperimentSummary& summary);
std::string to_csv(const VarianceTable& table);
std::string to_csv(const VarDiffTable& table);

nlohmann::json json_envelope(const std::string& command, const nlohmann::json& config,
                             const nlohmann::json& references);

}  // namespace trigzeros
