#pragma once

#include <cstddef>
#include <vector>

#include "trigzeros/common.hpp"

namespace trigzeros {

// Finite trigonometric series
//
//   s(t) = const_term + sum_{n=1}^{K} cos_coeffs[n-1] cos(n w t) + sin_coeffs[n-1] sin(n w t)
//
// with value and derivative evaluated together. One pair of trig calls per
// point; the harmonics come from a rotation recurrence, so a point costs O(K).
struct TrigSeries {
  double omega = 1.0;
  double const_term = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  // Derivative weights n*coeff, filled by finalize().
  std::vector<double> n_cos;
  std::vector<double> n_sin;

  void finalize() {
    const std::size_t k = cos_coeffs.size();
    n_cos.resize(k);
    n_sin.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      n_cos[i] = static_cast<double>(i + 1) * cos_coeffs[i];
      n_sin[i] = static_cast<double>(i + 1) * sin_coeffs[i];
    }
  }

  std::size_t terms() const { return cos_coeffs.size(); }

  // Highest angular frequency present.
  double max_frequency() const { return omega * static_cast<double>(terms()); }

  void eval(double t, double& value, double& deriv) const {
    const double a = omega * t;
    const double step_c = std::cos(a);
    const double step_s = std::sin(a);
    double c = step_c, s = step_s;
    double v = const_term;
    double dc = 0.0, ds = 0.0;
    const std::size_t k = cos_coeffs.size();
    const double* pc = cos_coeffs.data();
    const double* ps = sin_coeffs.data();
    const double* nc = n_cos.data();
    const double* ns = n_sin.data();
    for (std::size_t i = 0; i < k; ++i) {
      v += pc[i] * c + ps[i] * s;
      dc += ns[i] * c;
      ds += nc[i] * s;
      const double cn = c * step_c - s * step_s;
      s = s * step_c + c * step_s;
      c = cn;
    }
    value = v;
    deriv = omega * (dc - ds);
  }

  void eval_grid(double a, double h, std::size_t count, double* values, double* derivs) const {
    for (std::size_t i = 0; i < count; ++i) {
      eval(a + static_cast<double>(i) * h, values[i], derivs[i]);
    }
  }
};

}  // namespace trigzeros
