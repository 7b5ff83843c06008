#include "trigzeros/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "trigzeros/quadrature.hpp"

namespace trigzeros {

double lambda2(int degree) {
  if (degree < 1) throw ConfigError("degree must be >= 1");
  const double n = degree;
  return (n + 1.0) * (2.0 * n + 1.0) / 6.0;
}

std::array<double, 4> spectral_moments(int degree) {
  const double n = degree;
  const double l2 = (n + 1.0) * (2.0 * n + 1.0) / 6.0;
  const double l4 = (n + 1.0) * (2.0 * n + 1.0) * (3.0 * n * n + 3.0 * n - 1.0) / 30.0;
  const double l6 = (n + 1.0) * (2.0 * n + 1.0) *
                    (3.0 * n * n * n * n + 6.0 * n * n * n - 3.0 * n + 1.0) / 42.0;
  const double n2 = n * n, n3 = n2 * n;
  const double l8 = (n + 1.0) * (2.0 * n + 1.0) *
                    (5.0 * n3 * n3 + 15.0 * n2 * n3 + 5.0 * n2 * n2 - 15.0 * n3 - n2 + 9.0 * n - 3.0) /
                    90.0;
  return {l2, l4, l6, l8};
}

double expected_zeros(int degree, double a, double b) {
  if (!(a < b)) throw ConfigError("empty interval");
  return std::sqrt(lambda2(degree)) * (b - a) / kPi;
}

// ---------------------------------------------------------------------------

ExactCovariance::ExactCovariance(int degree) : degree_(degree), m_(degree + 0.5) {
  if (degree < 1) throw ConfigError("degree must be >= 1");
  const auto l = spectral_moments(degree);
  taylor_ = {-l[0] / 2.0, l[1] / 24.0, -l[2] / 720.0, l[3] / 40320.0};
}

CovarianceTriple ExactCovariance::triple(double t) const {
  const double series_width = 1e-3 / degree_;
  if (std::abs(t) < series_width) {
    const auto l = spectral_moments(degree_);
    const double t2 = t * t;
    const double r = 1.0 - l[0] * t2 / 2.0 + l[1] * t2 * t2 / 24.0 - l[2] * t2 * t2 * t2 / 720.0;
    const double dr = t * (-l[0] + l[1] * t2 / 6.0 - l[2] * t2 * t2 / 120.0);
    const double ddr = -l[0] + l[1] * t2 / 2.0 - l[2] * t2 * t2 / 24.0;
    return {r, dr, ddr};
  }
  // Closed Dirichlet form r = (sin(mt)/sin(t/2) - 1) / (2N) and derivatives.
  const double two_n = 2.0 * degree_;
  const double s = std::sin(0.5 * t);
  const double c = std::cos(0.5 * t);
  const double big_s = std::sin(m_ * t);
  const double big_c = std::cos(m_ * t);
  const double r = (big_s / s - 1.0) / two_n;
  const double dr = (m_ * big_c * s - 0.5 * big_s * c) / (s * s) / two_n;
  const double ddr =
      ((s * s * big_s * (0.25 - m_ * m_) - m_ * big_c * s * c + 0.5 * big_s * c * c) / (s * s * s)) /
      two_n;
  return {r, dr, ddr};
}

ScaledCovariance::ScaledCovariance(int degree) : base_(degree), m_(degree + 0.5) {
  const auto c = base_.taylor();
  const double m2 = m_ * m_;
  taylor_ = {c[0] / m2, c[1] / (m2 * m2), c[2] / (m2 * m2 * m2), c[3] / (m2 * m2 * m2 * m2)};
}

CovarianceTriple ScaledCovariance::triple(double x) const {
  const CovarianceTriple base = base_.triple(x / m_);
  return {base.r, base.dr / m_, base.ddr / (m_ * m_)};
}

CovarianceTriple SincCovariance::triple(double x) const {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    const double r = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    const double dr = -x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0)));
    const double ddr = -1.0 / 3.0 + x2 / 10.0 - x2 * x2 / 168.0 + x2 * x2 * x2 / 6480.0;
    return {r, dr, ddr};
  }
  const double s = std::sin(x), c = std::cos(x);
  const double x2 = x * x, x3 = x2 * x;
  return {s / x, c / x - s / x2, -s / x - 2.0 * c / x2 + 2.0 * s / x3};
}

CovarianceTaylor SincCovariance::taylor() const {
  return {-1.0 / 6.0, 1.0 / 120.0, -1.0 / 5040.0, 1.0 / 362880.0};
}

double SincCovariance::domain_halfwidth() const {
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------

CovarianceTriple covariance_triple(const CovarianceModel& model, double t) {
  return model.triple(t);
}

double crossing_kernel(double y) {
  const double u = std::max(0.0, 1.0 - y * y);
  return std::sqrt(u) + y * std::asin(std::clamp(y, -1.0, 1.0));
}

double rho(const CovarianceModel& model, double t, double slack) {
  const CovarianceTriple tr = model.triple(t);
  const double lam2 = model.lambda2();
  const double one_minus_r2 = 1.0 - tr.r * tr.r;
  const double num = tr.ddr * one_minus_r2 + tr.dr * tr.dr * tr.r;
  const double den = lam2 * one_minus_r2 - tr.dr * tr.dr;
  const double value = num / den;
  if (std::abs(value) > 1.0 + slack) {
    throw InvariantError("conditional correlation exceeds 1 beyond slack: rho = " +
                         std::to_string(value));
  }
  return std::clamp(value, -1.0, 1.0);
}

double bleher_di_kernel(double correlation) {
  const double rho2 = correlation * correlation;
  if (rho2 > 1.0) throw ConfigError("|rho| must be <= 1");
  const double one_minus = 1.0 - rho2;
  return 4.0 * one_minus + 4.0 * correlation * std::asin(correlation) * std::sqrt(one_minus);
}

// ---------------------------------------------------------------------------

SecondMomentKernel::SecondMomentKernel(const CovarianceModel& model, double crossover)
    : model_(model), crossover_(crossover) {
  const auto c = model.taylor();
  const double c2 = c[0], c4 = c[1], c6 = c[2], c8 = c[3];
  lambda2p_ = -2.0 * c2;

  // 1 - r^2 = sum d_{2k} x^{2k}
  d_[0] = -2.0 * c2;
  d_[1] = -(c2 * c2 + 2.0 * c4);
  d_[2] = -2.0 * (c6 + c2 * c4);
  d_[3] = -(2.0 * c8 + 2.0 * c2 * c6 + c4 * c4);

  // (r')^2 = sum e_{2k} x^{2k}
  const double e2 = 4.0 * c2 * c2;
  const double e4 = 16.0 * c2 * c4;
  const double e6 = 16.0 * c4 * c4 + 24.0 * c2 * c6;
  const double e8 = 32.0 * c2 * c8 + 48.0 * c4 * c6;

  // numerator lambda2'(1-r^2) - (r')^2; the x^2 coefficient vanishes
  // identically, so the series starts at x^4.
  p_[0] = lambda2p_ * d_[1] - e4;
  p_[1] = lambda2p_ * d_[2] - e6;
  p_[2] = lambda2p_ * d_[3] - e8;

  // rho numerator r''(1-r^2) + r (r')^2; x^2 coefficient vanishes as well.
  // r'' = 2 c2 + 12 c4 x^2 + 30 c6 x^4 + 56 c8 x^6.
  q_[0] = 2.0 * c2 * d_[1] + 12.0 * c4 * d_[0] + e4 + c2 * e2;
  q_[1] = 2.0 * c2 * d_[2] + 12.0 * c4 * d_[1] + 30.0 * c6 * d_[0] + e6 + c2 * e4 + c4 * e2;
  q_[2] = 2.0 * c2 * d_[3] + 12.0 * c4 * d_[2] + 30.0 * c6 * d_[1] + 56.0 * c8 * d_[0] + e8 +
          c2 * e6 + c4 * e4 + c6 * e2;
}

double SecondMomentKernel::rho(double x) const {
  const double ax = std::abs(x);
  if (ax < crossover_) {
    const double x2 = ax * ax;
    const double num = q_[0] + x2 * (q_[1] + x2 * q_[2]);
    const double den = p_[0] + x2 * (p_[1] + x2 * p_[2]);
    return std::clamp(num / den, -1.0, 1.0);
  }
  const CovarianceTriple tr = model_.triple(ax);
  const double one_minus_r2 = 1.0 - tr.r * tr.r;
  const double num = tr.ddr * one_minus_r2 + tr.dr * tr.dr * tr.r;
  const double den = lambda2p_ * one_minus_r2 - tr.dr * tr.dr;
  const double value = num / den;
  if (std::abs(value) > 1.0 + 1e-9) {
    throw InvariantError("second-moment kernel: |rho| > 1 at x = " + std::to_string(x));
  }
  return std::clamp(value, -1.0, 1.0);
}

double SecondMomentKernel::density(double x) const {
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  if (ax < crossover_) {
    const double x2 = ax * ax;
    const double p = p_[0] + x2 * (p_[1] + x2 * p_[2]);
    const double q = q_[0] + x2 * (q_[1] + x2 * q_[2]);
    const double d = d_[0] + x2 * (d_[1] + x2 * (d_[2] + x2 * d_[3]));
    const double rho_val = std::clamp(q / p, -1.0, 1.0);
    // M = x^4 p / (x^2 d)^{3/2} * kernel = x * p / d^{3/2} * kernel
    return ax * p / (d * std::sqrt(d)) * crossing_kernel(rho_val);
  }
  const CovarianceTriple tr = model_.triple(ax);
  const double one_minus_r2 = 1.0 - tr.r * tr.r;
  const double num = lambda2p_ * one_minus_r2 - tr.dr * tr.dr;
  const double rho_num = tr.ddr * one_minus_r2 + tr.dr * tr.dr * tr.r;
  const double rho_val = std::clamp(rho_num / num, -1.0, 1.0);
  return num / (one_minus_r2 * std::sqrt(one_minus_r2)) * crossing_kernel(rho_val);
}

double second_moment_integrand(int degree, double t) {
  ScaledCovariance scaled(degree);
  SecondMomentKernel kernel(scaled);
  const double m = scaled.m();
  return (2.0 / kPi) * m * m * kernel.density(m * t);
}

// ---------------------------------------------------------------------------

namespace {

// Integrate `f` over [0, upper]: adaptive panels on the structured head,
// one Kronrod panel per half-oscillation afterwards.
QuadResult integrate_scaled(const std::function<double(double)>& f, double upper,
                            double abs_tol) {
  const double head_end = std::min(upper, 8.0);
  QuadResult head = integrate_adaptive(f, 0.0, head_end, abs_tol * 0.5);
  QuadResult out = head;
  if (upper > head_end) {
    std::vector<double> edges;
    edges.push_back(head_end);
    for (double x = std::ceil(head_end / kPi) * kPi; x < upper; x += kPi) {
      if (x > head_end) edges.push_back(x);
    }
    edges.push_back(upper);
    QuadResult tail = integrate_panels(f, edges);
    out.value += tail.value;
    out.error += tail.error;
    out.evaluations += tail.evaluations;
    out.converged = out.error <= abs_tol;
  }
  return out;
}

}  // namespace

VarianceResult variance_exact(int degree, double quad_tol) {
  VarianceResult out;
  out.expected = 2.0 * std::sqrt(lambda2(degree));
  if (degree == 1) {
    // One harmonic: exactly two zeros on every sample path.
    out.degenerate = true;
    out.variance = 0.0;
    out.j_integral = -2.0;
    return out;
  }
  ScaledCovariance scaled(degree);
  SecondMomentKernel kernel(scaled);
  const double m = scaled.m();
  const double upper = kPi * m;
  const double scale = 4.0 * m / kPi;
  auto f = [&](double x) { return kernel.centered(x); };
  QuadResult q = integrate_scaled(f, upper, quad_tol / scale);
  out.j_integral = scale * q.value;
  out.quad_error = scale * q.error;
  out.variance = out.j_integral + out.expected;
  out.tol_achieved = out.quad_error <= quad_tol;
  return out;
}

VarianceResult variance_on_interval(int degree, double len, double quad_tol) {
  if (!(len > 0.0) || len > kTwoPi + 1e-12) throw ConfigError("interval length out of range");
  VarianceResult out;
  out.expected = std::sqrt(lambda2(degree)) * len / kPi;
  if (degree == 1 && len >= kTwoPi - 1e-12) {
    out.degenerate = true;
    out.variance = 0.0;
    out.j_integral = -out.expected * out.expected + out.expected * (out.expected - 1.0);
    return out;
  }
  ScaledCovariance scaled(degree);
  SecondMomentKernel kernel(scaled);
  const double m = scaled.m();
  const double upper = m * len;
  const double scale = 2.0 * m / (kPi * kPi);
  auto f = [&](double x) { return (len - x / m) * kernel.centered(x); };
  QuadResult q = integrate_scaled(f, upper, quad_tol / scale);
  out.j_integral = scale * q.value;
  out.quad_error = scale * q.error;
  out.variance = out.j_integral + out.expected;
  out.tol_achieved = out.quad_error <= quad_tol;
  return out;
}

double second_factorial_moment(int degree, double quad_tol) {
  if (degree == 1) return 2.0;  // E Z(Z-1) = 2 for the single harmonic
  const VarianceResult v = variance_exact(degree, quad_tol);
  // Var = J + EZ and E Z(Z-1) = J + (EZ)^2.
  return v.j_integral + v.expected * v.expected;
}

// ---------------------------------------------------------------------------

ConditionalMatrixBundle conditional_bundle(const CovarianceModel& model, double t) {
  const CovarianceTriple tr = model.triple(t);
  const double lam2 = model.lambda2();
  ConditionalMatrixBundle out{};
  const double r = tr.r, r1 = tr.dr, r2 = tr.ddr;
  out.sigma = {1.0, r,   0.0, r1,   //
               r,   1.0, -r1, 0.0,  //
               0.0, -r1, lam2, -r2,  //
               r1,  0.0, -r2, lam2};
  const double one_minus_r2 = 1.0 - r * r;
  out.mu = (lam2 * one_minus_r2 - r1 * r1) / one_minus_r2;
  const double rho_num = r2 * one_minus_r2 + r1 * r1 * r;
  out.rho = rho_num / (lam2 * one_minus_r2 - r1 * r1);
  // Omega = C - B^t A^{-1} B with the 2x2 blocks of sigma.
  const double det_a = one_minus_r2;
  // A^{-1} = (1/det)[[1,-r],[-r,1]], B = [[0, r1], [-r1, 0]].
  // B^t A^{-1} B = (r1^2/det) [[1, r],[r, 1]].
  const double s = r1 * r1 / det_a;
  out.omega = {lam2 - s, -r2 - s * r, -r2 - s * r, lam2 - s};
  out.det_sigma_factored = one_minus_r2 * out.mu * out.mu * (1.0 - out.rho * out.rho);
  // Direct 4x4 determinant via the block identity det = det(A) det(C - B^t A^{-1} B)
  // is what we factored; compute the raw determinant by cofactor expansion
  // instead so the two routes are independent.
  const auto& a = out.sigma;
  auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                 double a31, double a32, double a33) {
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
           a13 * (a21 * a32 - a22 * a31);
  };
  out.det_sigma_direct =
      a[0] * det3(a[5], a[6], a[7], a[9], a[10], a[11], a[13], a[14], a[15]) -
      a[1] * det3(a[4], a[6], a[7], a[8], a[10], a[11], a[12], a[14], a[15]) +
      a[2] * det3(a[4], a[5], a[7], a[8], a[9], a[11], a[12], a[13], a[15]) -
      a[3] * det3(a[4], a[5], a[6], a[8], a[9], a[10], a[12], a[13], a[14]);
  return out;
}

// ---------------------------------------------------------------------------
// theta = r - 1 with full relative precision near the origin.

double ExactCovariance::theta(double t) const {
  // Series radius where the x^10 truncation stays below 1e-12 relative.
  const double width = 0.2 / degree_;
  if (std::abs(t) < width) {
    const auto l = spectral_moments(degree_);
    const double t2 = t * t;
    return t2 * (-l[0] / 2.0 +
                 t2 * (l[1] / 24.0 + t2 * (-l[2] / 720.0 + t2 * l[3] / 40320.0)));
  }
  return triple(t).r - 1.0;
}

double SincCovariance::theta(double x) const {
  if (std::abs(x) < 0.2) {
    const double x2 = x * x;
    return -x2 / 6.0 *
           (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))));
  }
  return triple(x).r - 1.0;
}

}  // namespace trigzeros
