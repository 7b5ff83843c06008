#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "trigzeros/common.hpp"

namespace trigzeros {

struct ZeroReport {
  double a = 0.0, b = 0.0;
  int count = 0;
  std::vector<double> locations;  // filled when locating; sorted
  long grid_points = 0;
  double refinement_tol = 0.0;
  int anomalies = 0;        // unresolved classifications, surfaced not guessed
  int subgrid_cells = 0;    // cells re-examined at 16x density
  int extremum_checks = 0;  // interior extrema located exactly
  int recovered = 0;        // zeros beyond plain endpoint sign changes
};

struct ZeroCountOptions {
  double grid_factor = 8.0;
  bool locate = true;
  // Bracket refinement tolerance: (b-a) * refine_tol_factor / (freq_hint + 1).
  double refine_tol_factor = 1e-12;
  // |value| below near_zero_rel * amplitude scale counts as a grid hit and
  // triggers 16x local sub-gridding.
  double near_zero_rel = 1e-13;
  // Interior extrema are resolved exactly when the Hermite model of the cell
  // dips below this fraction of the amplitude scale.
  double extremum_screen = 0.08;
  // Frequency used for the zero-count upper bound; defaults to the grid
  // frequency. For spectral paths the bound frequency is the full truncation
  // index while the grid only needs to resolve the modes that carry mass.
  double bound_freq = 0.0;
};

// Locate a zero inside a sign-change bracket by safeguarded bisection with
// Newton steps once the bracket is small.
template <class Evaluator>
double refine_zero(const Evaluator& f, double lo, double hi, double tol) {
  double v_lo, d_lo, v_hi, d_hi;
  f.eval(lo, v_lo, d_lo);
  f.eval(hi, v_hi, d_hi);
  if (v_lo == 0.0) return lo;
  if (v_hi == 0.0) return hi;
  if (v_lo * v_hi > 0.0) throw ConfigError("refine_zero: no sign change in bracket");
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    double t = 0.5 * (lo + hi);
    double v, d;
    f.eval(t, v, d);
    if (v == 0.0) return t;
    // Newton candidate from the midpoint; accept while it stays inside.
    if (d != 0.0) {
      const double t_newton = t - v / d;
      if (t_newton > lo && t_newton < hi) {
        if (v * v_lo > 0.0) {
          lo = t;
          v_lo = v;
        } else {
          hi = t;
          v_hi = v;
        }
        double vn, dn;
        f.eval(t_newton, vn, dn);
        if (vn == 0.0) return t_newton;
        if (vn * v_lo > 0.0) {
          if (t_newton > lo) { lo = t_newton; v_lo = vn; }
        } else {
          if (t_newton < hi) { hi = t_newton; v_hi = vn; }
        }
        continue;
      }
    }
    if (v * v_lo > 0.0) {
      lo = t;
      v_lo = v;
    } else {
      hi = t;
      v_hi = v;
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {

// Interior critical values of the cubic Hermite model of a cell, as the
// least signed value s*c(tau) over critical points; +inf when none.
inline double hermite_min_signed(double h, double v0, double d0, double v1, double d1,
                                 double sign) {
  const double b1 = d0 * h;
  const double b2 = 3.0 * (v1 - v0) - 2.0 * d0 * h - d1 * h;
  const double b3 = 2.0 * (v0 - v1) + d0 * h + d1 * h;
  // c'(tau) = b1 + 2 b2 tau + 3 b3 tau^2
  double roots[2];
  int n_roots = 0;
  const double qa = 3.0 * b3, qb = 2.0 * b2, qc = b1;
  if (std::abs(qa) < 1e-300 * std::abs(qb)) {
    if (qb != 0.0) roots[n_roots++] = -qc / qb;
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      roots[n_roots++] = (-qb - sq) / (2.0 * qa);
      roots[n_roots++] = (-qb + sq) / (2.0 * qa);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_roots; ++i) {
    const double tau = roots[i];
    if (tau <= 0.0 || tau >= 1.0) continue;
    const double c = v0 + tau * (b1 + tau * (b2 + tau * b3));
    best = std::min(best, sign * c);
  }
  return best;
}

// Locate the derivative sign change inside [lo, hi] (secant with bisection
// fallback) and return the function value there.
template <class Evaluator>
void locate_extremum(const Evaluator& f, double lo, double hi, double d_lo, double d_hi,
                     double tol_x, double& t_out, double& v_out) {
  double t0 = lo, t1 = hi, g0 = d_lo, g1 = d_hi;
  double v = 0.0, t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 64 && (t1 - t0) > tol_x; ++iter) {
    double cand;
    if (g1 != g0) {
      cand = t1 - g1 * (t1 - t0) / (g1 - g0);
      const double margin = 0.01 * (t1 - t0);
      if (!(cand > t0 + margin && cand < t1 - margin)) cand = 0.5 * (t0 + t1);
    } else {
      cand = 0.5 * (t0 + t1);
    }
    double d;
    f.eval(cand, v, d);
    t = cand;
    if (d == 0.0) break;
    if (d * g0 > 0.0) {
      t0 = cand;
      g0 = d;
    } else {
      t1 = cand;
      g1 = d;
    }
  }
  t_out = t;
  double d_unused;
  f.eval(0.5 * (t0 + t1), v_out, d_unused);
  t_out = 0.5 * (t0 + t1);
  (void)v;
}

template <class Evaluator>
void eval_grid_dispatch(const Evaluator& f, double a, double h, std::size_t n, double* v,
                        double* d) {
  if constexpr (requires { f.eval_grid(a, h, n, v, d); }) {
    f.eval_grid(a, h, n, v, d);
  } else {
    for (std::size_t i = 0; i < n; ++i) f.eval(a + static_cast<double>(i) * h, v[i], d[i]);
  }
}

}  // namespace detail

// Count (and optionally locate) the zeros of a smooth path on [a, b].
//
// freq_hint bounds the highest angular frequency of the path, so the zero
// count cannot exceed freq_hint (b-a) / pi. The grid holds
// ceil(grid_factor freq_hint (b-a) / (2 pi)) cells. Cells are classified by
// endpoint sign changes; cells whose derivative changes sign get a cubic
// Hermite screen and, when the modeled dip approaches zero, the interior
// extremum is located exactly so hidden zero pairs are recovered. Near-zero
// grid values trigger 16x local sub-gridding before classification.
template <class Evaluator>
ZeroReport count_zeros(const Evaluator& f, double a, double b, double freq_hint,
                       const ZeroCountOptions& opt = {}) {
  if (!(b > a)) throw ConfigError("count_zeros: empty interval");
  if (!(opt.grid_factor >= 4.0)) {
    throw ConfigError("grid_factor must be >= 4 (oversampling vs the pi/N extremum spacing)");
  }
  if (!(freq_hint > 0.0)) throw ConfigError("count_zeros: frequency hint must be positive");

  ZeroReport report;
  report.a = a;
  report.b = b;

  const long cells = std::max<long>(
      8, static_cast<long>(std::ceil(opt.grid_factor * freq_hint * (b - a) / kTwoPi)));
  const double h = (b - a) / static_cast<double>(cells);
  report.grid_points = cells + 1;
  report.refinement_tol = (b - a) * opt.refine_tol_factor / (freq_hint + 1.0);

  std::vector<double> val(static_cast<std::size_t>(cells + 1));
  std::vector<double> der(static_cast<std::size_t>(cells + 1));
  detail::eval_grid_dispatch(f, a, h, static_cast<std::size_t>(cells + 1), val.data(),
                             der.data());

  double sum_sq = 0.0;
  for (double v : val) sum_sq += v * v;
  const double scale = std::sqrt(sum_sq / static_cast<double>(cells + 1));
  if (scale == 0.0) {
    report.anomalies = 1;
    return report;
  }
  const double near_eps = opt.near_zero_rel * scale;

  std::vector<std::pair<double, double>> brackets;
  std::vector<double> exact_hits;

  // Process one monotone-classified segment [t0,t1] with known endpoint data.
  auto classify_segment = [&](double t0, double v0, double t1, double v1) {
    if (v0 * v1 < 0.0) brackets.emplace_back(t0, t1);
  };

  auto handle_extremum_cell = [&](double t0, double v0, double d0, double t1, double v1,
                                  double d1) {
    // Endpoints share a sign here; an interior extremum may dip across zero.
    const double sgn = v0 > 0.0 ? 1.0 : -1.0;
    const double dip = detail::hermite_min_signed(t1 - t0, v0, d0, v1, d1, sgn);
    if (!(dip < opt.extremum_screen * scale)) return;
    ++report.extremum_checks;
    double t_ext, v_ext;
    detail::locate_extremum(f, t0, t1, d0, d1, (t1 - t0) * 1e-3, t_ext, v_ext);
    if (sgn * v_ext < -near_eps) {
      brackets.emplace_back(t0, t_ext);
      brackets.emplace_back(t_ext, t1);
      report.recovered += 2;
    } else if (std::abs(v_ext) <= near_eps) {
      // Grazing extremum: even-order contact, ambiguous at this precision.
      ++report.anomalies;
    }
  };

  auto process_cell = [&](double t0, double v0, double d0, double t1, double v1, double d1) {
    if (v0 * v1 < 0.0) {
      classify_segment(t0, v0, t1, v1);
    } else if (d0 * d1 < 0.0) {
      handle_extremum_cell(t0, v0, d0, t1, v1, d1);
    }
  };

  for (long i = 0; i < cells; ++i) {
    const double t0 = a + static_cast<double>(i) * h;
    const double t1 = (i == cells - 1) ? b : t0 + h;
    const double v0 = val[static_cast<std::size_t>(i)];
    const double v1 = val[static_cast<std::size_t>(i + 1)];
    const double d0 = der[static_cast<std::size_t>(i)];
    const double d1 = der[static_cast<std::size_t>(i + 1)];

    const bool tiny0 = std::abs(v0) < near_eps;
    const bool tiny1 = std::abs(v1) < near_eps;
    if (tiny0 || tiny1) {
      // 16x sub-grid before classification. A tiny left endpoint registers as
      // an exact hit (counted once, at its own cell only).
      ++report.subgrid_cells;
      if (tiny0) {
        exact_hits.push_back(t0);
        ++report.anomalies;
      }
      const int sub = 16;
      const double hs = (t1 - t0) / sub;
      double pv = v0, pd = d0, pt = t0;
      bool prev_tiny = tiny0;
      for (int j = 1; j <= sub; ++j) {
        const double tt = (j == sub) ? t1 : t0 + j * hs;
        double vv, dd;
        if (j == sub) {
          vv = v1;
          dd = d1;
        } else {
          f.eval(tt, vv, dd);
        }
        const bool tiny_here = std::abs(vv) < near_eps;
        if (!prev_tiny && !tiny_here) {
          process_cell(pt, pv, pd, tt, vv, dd);
        }
        if (tiny_here && j < sub) {
          exact_hits.push_back(tt);
          ++report.anomalies;
        }
        pt = tt;
        pv = vv;
        pd = dd;
        prev_tiny = tiny_here;
      }
      continue;
    }
    process_cell(t0, v0, d0, t1, v1, d1);
  }

  report.count = static_cast<int>(brackets.size() + exact_hits.size());
  if (opt.locate) {
    report.locations.reserve(brackets.size() + exact_hits.size());
    for (const auto& br : brackets) {
      report.locations.push_back(refine_zero(f, br.first, br.second, report.refinement_tol));
    }
    for (double t : exact_hits) report.locations.push_back(t);
    std::sort(report.locations.begin(), report.locations.end());
  }

  const double bound_freq = opt.bound_freq > 0.0 ? opt.bound_freq : freq_hint;
  const double max_count = bound_freq * (b - a) / kPi + 1e-9;
  if (static_cast<double>(report.count) > max_count) {
    throw InvariantError("zero count exceeds the frequency bound");
  }
  return report;
}

// Adapter for counting via plain callables.
template <class F>
struct FunctionEvaluator {
  F fn;  // void(double t, double& value, double& deriv)
  void eval(double t, double& v, double& d) const { fn(t, v, d); }
};

template <class F>
FunctionEvaluator<F> make_evaluator(F&& fn) {
  return FunctionEvaluator<F>{std::forward<F>(fn)};
}

}  // namespace trigzeros
