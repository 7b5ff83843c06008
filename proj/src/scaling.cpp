#include "trigzeros/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "trigzeros/quadrature.hpp"

namespace trigzeros {

namespace {

constexpr double kCrossover = 1e-2;

const SincCovariance& sinc_model() {
  static const SincCovariance model;
  return model;
}

const SecondMomentKernel& sinc_kernel() {
  static const SecondMomentKernel kernel(sinc_model(), kCrossover);
  return kernel;
}

// Tail error constant for the analytic remainder; validated against
// quadrature of [X, 4X] in the test suite.
constexpr double kTailErrorConstant = 64.0;

}  // namespace

GTriple g_triple(double x) {
  const CovarianceTriple t = sinc_model().triple(x);
  return {t.r, t.dr, t.ddr};
}

double r_star(double x) {
  if (!(x > 0.0)) {
    if (x == 0.0) {
      // Limit of the series path: q4 / p4.
      const auto p = sinc_kernel().p_coeffs();
      const auto q = sinc_kernel().q_coeffs();
      return q[0] / p[0];
    }
    throw ConfigError("r_star requires x > 0");
  }
  return sinc_kernel().rho(x);
}

double c0_integrand(double x) {
  if (!(x > 0.0)) throw ConfigError("c0_integrand requires x > 0");
  // The first factor equals 3 [ (1/3)(1-g^2) - (g')^2 ] / (1-g^2)^{3/2}, so the
  // kernel machinery applies verbatim: integrand = 3 M(x)/kernel-normalization - 1.
  return 3.0 * sinc_kernel().density(x) - 1.0;
}

C0Result compute_c0(double tol) {
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  C0Result out;
  // Truncation point: analytic remainder error ~ kTailErrorConstant / X^3.
  double upper = std::max(500.0, std::cbrt(4.0 * kTailErrorConstant / tol));
  upper = std::ceil(upper / kPi) * kPi;
  out.upper_limit = upper;

  auto f = [](double x) { return c0_integrand(x); };
  QuadResult head = integrate_adaptive(f, 1e-300, 8.0, tol / 8.0);
  std::vector<double> edges;
  for (double x = 8.0; x < upper; x += kPi / 2.0) edges.push_back(x);
  edges.push_back(upper);
  QuadResult body = integrate_panels(f, edges);

  const double tail = 1.0 / upper + 2.0 * std::sin(2.0 * upper) / (upper * upper);
  const double tail_error = kTailErrorConstant / (upper * upper * upper);

  out.c0 = head.value + body.value + tail;
  out.error_estimate = head.error + body.error + tail_error;
  out.tol_achieved = out.error_estimate <= tol;
  return out;
}

double compute_c(double tol) {
  const C0Result r = compute_c0(tol);
  if (!r.tol_achieved) {
    throw ToleranceError("compute_c: requested tolerance not achieved", r.error_estimate);
  }
  return 4.0 * r.c0 / (3.0 * kPi) + 2.0 / std::sqrt(3.0);
}

double scaled_covariance_error(int degree, double x) {
  const ScaledCovariance f(degree);
  if (!(x >= 0.0) || x > f.domain_halfwidth()) throw ConfigError("x out of [0, pi m]");
  return std::abs(f.triple(x).r - g_triple(x).g);
}

}  // namespace trigzeros
