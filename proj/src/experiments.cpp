#include "trigzeros/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "trigzeros/analytic.hpp"
#include "trigzeros/ensembles.hpp"
#include "trigzeros/scaling.hpp"
#include "trigzeros/stats.hpp"
#include "trigzeros/zeros.hpp"

namespace trigzeros {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string ensemble_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::qualls: return "qualls";
    case EnsembleKind::dunnage: return "dunnage";
    case EnsembleKind::mollified: return "mollified";
  }
  return "?";
}

std::pair<double, double> IntervalSpec::bounds_for(int degree) const {
  switch (mode) {
    case Mode::full_circle: return {0.0, kTwoPi};
    case Mode::fixed: return {a, b};
    case Mode::shrinking:
      return {0.0, kTwoPi * std::pow(static_cast<double>(degree), -gamma)};
  }
  return {0.0, kTwoPi};
}

double MollifyRule::value_for(int degree) const {
  if (use_power) return std::pow(static_cast<double>(degree), beta);
  if (values.empty()) throw ConfigError("no mollifier width configured");
  return values.front();
}

void ExperimentConfig::validate() const {
  if (degrees.empty()) throw ConfigError("at least one degree required");
  for (int n : degrees) {
    if (n < 1) throw ConfigError("degrees must be >= 1");
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (trials < 100) {
    throw ConfigError("trials must be >= 100 for statistics reporting a standard error");
  }
  if (grid_factor < 4.0) throw ConfigError("grid_factor must be >= 4");
  if (interval.mode == IntervalSpec::Mode::fixed &&
      !(0.0 <= interval.a && interval.a < interval.b && interval.b <= kTwoPi + 1e-12)) {
    throw ConfigError("interval must satisfy 0 <= a < b <= 2 pi");
  }
  if (interval.mode == IntervalSpec::Mode::shrinking &&
      !(interval.gamma >= 0.0 && interval.gamma < 1.0)) {
    throw ConfigError("gamma must lie in [0, 1) so that N(b-a) -> infinity");
  }
  if (ensemble == EnsembleKind::mollified && mollify.use_power && !(mollify.beta < 0.25)) {
    throw ConfigError("mollified CLT runs require M = N^beta with beta < 1/4");
  }
}

void parallel_trials(long trials, int threads, const std::function<void(long)>& body) {
  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (n_threads == 1 || trials < 2) {
    for (long t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const long t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------

namespace {

struct TrialOutcome {
  int count = 0;
  int anomalies = 0;
  int audit_mismatch = -1;  // -1 = not audited
};

// Zero counts of one ensemble over all trials, thread-parallel and
// deterministic. One percent of paths is recounted on a 32x grid.
std::vector<TrialOutcome> run_counts(const ExperimentConfig& config, int degree, double a,
                                     double b, double width) {
  std::vector<TrialOutcome> out(static_cast<std::size_t>(config.trials));
  const double m = degree + 0.5;

  MollifiedSpectrum spectrum;
  if (config.ensemble == EnsembleKind::mollified) {
    spectrum = mollified_spectrum(degree, width, config.tail_eps);
  }

  parallel_trials(config.trials, config.threads, [&](long trial) {
    TrialOutcome& slot = out[static_cast<std::size_t>(trial)];
    const std::uint64_t trial_seed =
        derive_seed(config.seed, static_cast<std::uint64_t>(degree), static_cast<std::uint64_t>(trial));
    TrigSeries path;
    double lo = a, hi = b, freq = degree, bound_freq = 0.0;
    if (config.ensemble == EnsembleKind::mollified) {
      auto pair = coupled_from_spectrum(spectrum, trial_seed);
      path = pair.second.series();
      // Count on the scaled circle; lags map 1:1 onto [a,b] via x = m t.
      lo = a * m;
      hi = b * m;
      freq = static_cast<double>(pair.second.effective_index) / m;
      bound_freq = static_cast<double>(pair.second.truncation_index) / m;
    } else if (config.ensemble == EnsembleKind::dunnage) {
      path = sample_dunnage(degree, trial_seed).series();
    } else {
      path = sample_qualls(degree, trial_seed).series();
    }
    ZeroCountOptions opt;
    opt.grid_factor = config.grid_factor;
    opt.locate = false;
    opt.bound_freq = bound_freq;
    const ZeroReport report = count_zeros(path, lo, hi, freq, opt);
    slot.count = report.count;
    slot.anomalies = report.anomalies;
    if (trial % 100 == 0) {
      ZeroCountOptions audit = opt;
      audit.grid_factor = 32.0;
      const ZeroReport check = count_zeros(path, lo, hi, freq, audit);
      slot.audit_mismatch = check.count == report.count ? 0 : 1;
    }
  });
  return out;
}

DegreeSummary summarize_counts(const ExperimentConfig& config, int degree, double a, double b,
                               double width, const std::vector<TrialOutcome>& outcomes,
                               double expected, double var_quad, double var_quad_error,
                               bool exploratory, bool degenerate) {
  DegreeSummary rec;
  rec.degree = degree;
  rec.trials = config.trials;
  rec.interval_a = a;
  rec.interval_b = b;
  rec.mollify_width = width;
  rec.expected = expected;
  rec.var_quad = var_quad;
  rec.var_quad_error = var_quad_error;
  rec.exploratory = exploratory;
  rec.degenerate = degenerate;

  std::vector<double> counts(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    counts[i] = static_cast<double>(outcomes[i].count);
    rec.anomalies += outcomes[i].anomalies;
    if (outcomes[i].audit_mismatch >= 0) {
      ++rec.audited;
      rec.audit_mismatches += outcomes[i].audit_mismatch;
    }
  }
  const SummaryStats stats = summarize(counts);
  rec.mean = stats.mean;
  rec.variance = stats.variance;
  rec.third_central = stats.third_central;

  // Normalization: analytic mean and quadrature variance when available,
  // sample moments for exploratory ensembles.
  double center = expected, spread_sq = var_quad;
  if (exploratory) {
    center = stats.mean;
    spread_sq = stats.variance;
  }
  if (degenerate || !(spread_sq > 0.0)) {
    rec.ks_skipped = true;
    return rec;
  }
  const double spread = std::sqrt(spread_sq);
  rec.normalized.resize(counts.size());
  std::vector<double> jittered(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    rec.normalized[i] = (counts[i] - center) / spread;
    // Uniform jitter of half a lattice step, from its own stream.
    Rng jrng(config.seed, stream::jitter,
             derive_seed(static_cast<std::uint64_t>(degree), 0, static_cast<std::uint64_t>(i)));
    jittered[i] = rec.normalized[i] + (jrng.uniform() - 0.5) / spread;
  }
  const KsResult raw = ks_statistic(rec.normalized);
  const KsResult jit = ks_statistic(jittered);
  rec.ks_raw = raw.distance;
  rec.p_raw = raw.p_value;
  rec.ks_jittered = jit.distance;
  rec.p_jittered = jit.p_value;
  return rec;
}

}  // namespace

ExperimentSummary run_full_circle_clt(const ExperimentConfig& config) {
  config.validate();
  ExperimentSummary summary;
  summary.config = config;
  const double start = now_seconds();
  for (int degree : config.degrees) {
    const double t0 = now_seconds();
    const auto [a, b] = config.interval.bounds_for(degree);
    double width = 0.0;
    double expected = 0.0, var_quad = 0.0, var_err = 0.0;
    bool exploratory = false, degenerate = false;
    if (config.ensemble == EnsembleKind::dunnage) {
      // Only the asymptotic mean is known here; reported as exploratory.
      expected = 2.0 * degree / std::sqrt(3.0) * (b - a) / kTwoPi;
      exploratory = true;
    } else if (config.ensemble == EnsembleKind::mollified) {
      width = config.mollify.value_for(degree);
      MollifiedCovariance model(degree, width);
      expected = std::sqrt(model.lambda2()) * (degree + 0.5) * (b - a) / kPi;
      const VarianceResult v = variance_for_model(model, degree + 0.5, (b - a) * (degree + 0.5),
                                                  config.quad_tol);
      var_quad = v.variance;
      var_err = v.quad_error;
    } else {
      expected = expected_zeros(degree, a, b);
      const VarianceResult v = b - a >= kTwoPi - 1e-12
                                   ? variance_exact(degree, config.quad_tol)
                                   : variance_on_interval(degree, b - a, config.quad_tol);
      var_quad = v.variance;
      var_err = v.quad_error;
      degenerate = v.degenerate;
    }
    const auto outcomes = run_counts(config, degree, a, b, width);
    DegreeSummary rec = summarize_counts(config, degree, a, b, width, outcomes, expected,
                                         var_quad, var_err, exploratory, degenerate);
    rec.wall_seconds = now_seconds() - t0;
    summary.records.push_back(std::move(rec));
  }
  summary.total_seconds = now_seconds() - start;
  return summary;
}

ExperimentSummary run_short_interval_clt(const ExperimentConfig& config) {
  config.validate();
  if (config.interval.mode == IntervalSpec::Mode::full_circle) {
    throw ConfigError("short-interval run needs --gamma or --interval");
  }
  ExperimentSummary summary;
  summary.config = config;
  summary.c_reference = compute_c(1e-6);
  const double start = now_seconds();
  for (int degree : config.degrees) {
    const double t0 = now_seconds();
    const auto [a, b] = config.interval.bounds_for(degree);
    const double expected = expected_zeros(degree, a, b);
    const VarianceResult v = variance_on_interval(degree, b - a, config.quad_tol);
    const auto outcomes = run_counts(config, degree, a, b, 0.0);
    DegreeSummary rec = summarize_counts(config, degree, a, b, 0.0, outcomes, expected,
                                         v.variance, v.quad_error, false, v.degenerate);
    rec.asymptotic_var = summary.c_reference * (b - a) * degree / kTwoPi;
    rec.wall_seconds = now_seconds() - t0;
    summary.records.push_back(std::move(rec));
  }
  summary.total_seconds = now_seconds() - start;
  return summary;
}

VarianceTable run_variance_convergence(const std::vector<int>& degrees, double quad_tol) {
  if (degrees.empty()) throw ConfigError("at least one degree required");
  VarianceTable table;
  table.c_reference = compute_c(1e-6);
  for (int degree : degrees) {
    const VarianceResult v = variance_exact(degree, quad_tol);
    VarianceRow row;
    row.degree = degree;
    row.variance = v.variance;
    row.j_integral = v.j_integral;
    row.expected = v.expected;
    row.quad_error = v.quad_error;
    row.var_over_n = v.variance / degree;
    row.deviation = std::abs(row.var_over_n - table.c_reference);
    row.tol_achieved = v.tol_achieved;
    table.all_tol_achieved = table.all_tol_achieved && v.tol_achieved;
    table.rows.push_back(row);
  }
  // Fitted decay exponent of the deviation sequence.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (const auto& row : table.rows) {
    if (!(row.deviation > 0.0)) continue;
    const double x = std::log(static_cast<double>(row.degree));
    const double y = std::log(row.deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) table.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return table;
}

VarDiffTable run_var_diff(int degree, const std::vector<double>& widths, long trials,
                          std::uint64_t seed, int threads, double grid_factor, double tail_eps) {
  if (degree < 1) throw ConfigError("degree must be >= 1");
  if (widths.empty()) throw ConfigError("at least one mollifier width required");
  if (trials < 100) throw ConfigError("trials must be >= 100");
  VarDiffTable table;
  table.degree = degree;
  table.seed = seed;
  const double m = degree + 0.5;
  const double start = now_seconds();
  for (double width : widths) {
    const double t0 = now_seconds();
    const MollifiedSpectrum spectrum = mollified_spectrum(degree, width, tail_eps);
    std::vector<double> diffs(static_cast<std::size_t>(trials));
    parallel_trials(trials, threads, [&](long trial) {
      const std::uint64_t trial_seed =
          derive_seed(seed, static_cast<std::uint64_t>(degree), static_cast<std::uint64_t>(trial));
      const auto pair = coupled_from_spectrum(spectrum, trial_seed);
      ZeroCountOptions opt;
      opt.grid_factor = grid_factor;
      opt.locate = false;
      const TrigSeries plain = pair.first.series();
      const ZeroReport a = count_zeros(plain, -kPi * m, kPi * m, degree / m, opt);
      ZeroCountOptions opt_m = opt;
      opt_m.bound_freq = pair.second.truncation_index / m;
      const TrigSeries mol = pair.second.series();
      const ZeroReport b =
          count_zeros(mol, -kPi * m, kPi * m, pair.second.effective_index / m, opt_m);
      diffs[static_cast<std::size_t>(trial)] = static_cast<double>(a.count - b.count);
    });
    const SummaryStats stats = summarize(diffs);
    VarDiffRow row;
    row.width = width;
    row.trials = trials;
    row.mean_diff = stats.mean;
    row.var_diff = stats.variance;
    row.ratio = stats.variance / degree;
    row.truncation_index = spectrum.truncation_index;
    row.wall_seconds = now_seconds() - t0;
    table.rows.push_back(row);
  }
  table.total_seconds = now_seconds() - start;
  return table;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["degrees"] = c.degrees;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  switch (c.interval.mode) {
    case IntervalSpec::Mode::full_circle: j["interval"] = "full"; break;
    case IntervalSpec::Mode::fixed:
      j["interval"] = {c.interval.a, c.interval.b};
      break;
    case IntervalSpec::Mode::shrinking: j["gamma"] = c.interval.gamma; break;
  }
  j["grid_factor"] = c.grid_factor;
  j["ensemble"] = ensemble_name(c.ensemble);
  if (c.ensemble == EnsembleKind::mollified) {
    if (c.mollify.use_power) {
      j["mollify_m"] = "N^" + std::to_string(c.mollify.beta);
    } else {
      j["mollify_m"] = c.mollify.values;
    }
  }
  j["quad_tol"] = c.quad_tol;
  j["tail_eps"] = c.tail_eps;
  return j;
}

}  // namespace

nlohmann::json json_envelope(const std::string& command, const nlohmann::json& config,
                             const nlohmann::json& references) {
  nlohmann::json j;
  j["tool"] = "trigzeros";
  j["version"] = TRIGZEROS_VERSION;
  j["schema_version"] = 1;
  j["command"] = command;
  j["config"] = config;
  j["references"] = references;
  return j;
}

nlohmann::json to_json(const ExperimentSummary& summary) {
  nlohmann::json refs;
  refs["expected_zeros"] = "sqrt(lambda2) (b-a)/pi with lambda2 = (N+1)(2N+1)/6";
  refs["var_quad"] = "J + E Z by Gauss-Kronrod quadrature of the two-point kernel";
  refs["normalization"] = "(Z - E Z)/sqrt(var_quad); jitter uniform half lattice step";
  if (summary.config.ensemble == EnsembleKind::dunnage) {
    refs["expected_zeros"] = "asymptotic 2N/sqrt(3), exploratory";
  }
  nlohmann::json j = json_envelope(summary.config.experiment, config_json(summary.config), refs);
  if (summary.c_reference != 0.0) j["c_reference"] = summary.c_reference;
  nlohmann::json records = nlohmann::json::array();
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& r : summary.records) {
    nlohmann::json rec;
    rec["degree"] = r.degree;
    rec["trials"] = r.trials;
    rec["interval"] = {r.interval_a, r.interval_b};
    if (r.mollify_width > 0.0) rec["mollify_width"] = r.mollify_width;
    rec["mean"] = r.mean;
    rec["variance"] = r.variance;
    rec["third_central"] = r.third_central;
    rec["expected"] = r.expected;
    rec["var_quad"] = r.var_quad;
    rec["var_quad_error"] = r.var_quad_error;
    if (r.asymptotic_var != 0.0) rec["asymptotic_var"] = r.asymptotic_var;
    rec["ks_skipped"] = r.ks_skipped;
    if (!r.ks_skipped) {
      rec["ks_raw"] = r.ks_raw;
      rec["p_raw"] = r.p_raw;
      rec["ks_jittered"] = r.ks_jittered;
      rec["p_jittered"] = r.p_jittered;
    }
    rec["degenerate"] = r.degenerate;
    rec["exploratory"] = r.exploratory;
    rec["anomalies"] = r.anomalies;
    rec["audited"] = r.audited;
    rec["audit_mismatches"] = r.audit_mismatches;
    if (summary.config.keep_samples && !r.normalized.empty()) {
      rec["normalized"] = r.normalized;
    }
    records.push_back(std::move(rec));
    timings.push_back(r.wall_seconds);
  }
  j["results"] = std::move(records);
  j["timing"] = {{"total_s", summary.total_seconds}, {"records_s", std::move(timings)}};
  return j;
}

nlohmann::json to_json(const VarianceTable& table) {
  nlohmann::json refs;
  refs["c"] = "4 c0/(3 pi) + 2/sqrt(3) from the limit-kernel quadrature";
  nlohmann::json j = json_envelope("variance", nlohmann::json::object(), refs);
  j["c_reference"] = table.c_reference;
  j["fitted_exponent"] = table.fitted_exponent;
  j["all_tol_achieved"] = table.all_tol_achieved;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"degree", r.degree},
                    {"variance", r.variance},
                    {"j_integral", r.j_integral},
                    {"expected", r.expected},
                    {"quad_error", r.quad_error},
                    {"var_over_n", r.var_over_n},
                    {"deviation", r.deviation},
                    {"tol_achieved", r.tol_achieved}});
  }
  j["results"] = std::move(rows);
  return j;
}

nlohmann::json to_json(const VarDiffTable& table) {
  nlohmann::json refs;
  refs["ratio"] = "Var(Z - Z^M)/N over coupled spectral paths";
  nlohmann::json j = json_envelope("var-diff", nlohmann::json::object(), refs);
  j["degree"] = table.degree;
  j["seed"] = table.seed;
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"width", r.width},
                    {"trials", r.trials},
                    {"mean_diff", r.mean_diff},
                    {"var_diff", r.var_diff},
                    {"ratio", r.ratio},
                    {"truncation_index", r.truncation_index}});
    timings.push_back(r.wall_seconds);
  }
  j["results"] = std::move(rows);
  j["timing"] = {{"total_s", table.total_seconds}, {"records_s", std::move(timings)}};
  return j;
}

std::string to_csv(const ExperimentSummary& summary) {
  std::ostringstream os;
  os << "degree,trials,a,b,mean,variance,third_central,expected,var_quad,var_quad_error,"
        "asymptotic_var,ks_raw,p_raw,ks_jittered,p_jittered,ks_skipped,anomalies,audited,"
        "audit_mismatches\n";
  os.precision(17);
  for (const auto& r : summary.records) {
    os << r.degree << ',' << r.trials << ',' << r.interval_a << ',' << r.interval_b << ','
       << r.mean << ',' << r.variance << ',' << r.third_central << ',' << r.expected << ','
       << r.var_quad << ',' << r.var_quad_error << ',' << r.asymptotic_var << ',' << r.ks_raw
       << ',' << r.p_raw << ',' << r.ks_jittered << ',' << r.p_jittered << ','
       << (r.ks_skipped ? 1 : 0) << ',' << r.anomalies << ',' << r.audited << ','
       << r.audit_mismatches << '\n';
  }
  return os.str();
}

std::string to_csv(const VarianceTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "degree,variance,j_integral,expected,quad_error,var_over_n,deviation,tol_achieved\n";
  for (const auto& r : table.rows) {
    os << r.degree << ',' << r.variance << ',' << r.j_integral << ',' << r.expected << ','
       << r.quad_error << ',' << r.var_over_n << ',' << r.deviation << ','
       << (r.tol_achieved ? 1 : 0) << '\n';
  }
  os << "# c_reference=" << table.c_reference << " fitted_exponent=" << table.fitted_exponent
     << '\n';
  return os.str();
}

std::string to_csv(const VarDiffTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "width,trials,mean_diff,var_diff,ratio,truncation_index\n";
  for (const auto& r : table.rows) {
    os << r.width << ',' << r.trials << ',' << r.mean_diff << ',' << r.var_diff << ','
       << r.ratio << ',' << r.truncation_index << '\n';
  }
  return os.str();
}

}  // namespace trigzeros
