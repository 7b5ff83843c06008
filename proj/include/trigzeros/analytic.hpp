#pragma once

#include <array>
#include <memory>

#include "trigzeros/common.hpp"

namespace trigzeros {

enum class CovarianceKind { exact_xn, scaled_fn, sinc_g, mollified_rnm, joint_rnm0 };

struct CovarianceTriple {
  double r;    // r(t)
  double dr;   // r'(t)
  double ddr;  // r''(t)
};

// Small-lag Taylor data of a unit-variance covariance:
// r(x) = 1 + c[0] x^2 + c[1] x^4 + c[2] x^6 + c[3] x^8 + ...
using CovarianceTaylor = std::array<double, 4>;

// One covariance family: evaluators for r, r', r'' plus its Taylor data.
class CovarianceModel {
 public:
  virtual ~CovarianceModel() = default;
  virtual CovarianceKind kind() const = 0;
  virtual CovarianceTriple triple(double t) const = 0;
  virtual CovarianceTaylor taylor() const = 0;
  // Half-period of the lag domain (pi for the unscaled polynomial family,
  // pi*m for the scaled ones, +inf for the line process).
  virtual double domain_halfwidth() const = 0;
  // r(t) - 1 with full relative precision at small lags, where forming the
  // difference from r alone would round to absolute ~1e-16.
  virtual double theta(double t) const { return triple(t).r - 1.0; }
  // Second spectral moment -r''(0).
  double lambda2() const { return -2.0 * taylor()[0]; }
};

// Covariance of the degree-N random trigonometric polynomial in the unscaled
// variable t: r(t) = (1/N) sum cos(nt), evaluated by the closed Dirichlet form
// away from t=0 and by its Taylor series (exact spectral moments) near 0.
class ExactCovariance final : public CovarianceModel {
 public:
  explicit ExactCovariance(int degree);
  CovarianceKind kind() const override { return CovarianceKind::exact_xn; }
  CovarianceTriple triple(double t) const override;
  CovarianceTaylor taylor() const override { return taylor_; }
  double domain_halfwidth() const override { return kPi; }
  double theta(double t) const override;
  int degree() const { return degree_; }

 private:
  int degree_;
  double m_;
  CovarianceTaylor taylor_;
};

// Same family in the scaled variable x = m t, m = N + 1/2.
class ScaledCovariance final : public CovarianceModel {
 public:
  explicit ScaledCovariance(int degree);
  CovarianceKind kind() const override { return CovarianceKind::scaled_fn; }
  CovarianceTriple triple(double x) const override;
  CovarianceTaylor taylor() const override { return taylor_; }
  double domain_halfwidth() const override { return kPi * m_; }
  double theta(double x) const override { return base_.theta(x / m_); }
  int degree() const { return degree_; }
  double m() const { return m_; }

 private:
  ExactCovariance base_;
  double m_;
  CovarianceTaylor taylor_;
};

// Scaling limit sin(x)/x.
class SincCovariance final : public CovarianceModel {
 public:
  CovarianceKind kind() const override { return CovarianceKind::sinc_g; }
  CovarianceTriple triple(double x) const override;
  CovarianceTaylor taylor() const override;
  double domain_halfwidth() const override;
  double theta(double x) const override;
};

// ---------------------------------------------------------------------------

// lambda2 = (1/N) sum n^2 = (N+1)(2N+1)/6.
double lambda2(int degree);

// Spectral moments (1/N) sum n^{2k} for k = 1..4 (closed Faulhaber forms).
std::array<double, 4> spectral_moments(int degree);

// Expected zero count sqrt(lambda2) (b-a) / pi on [a,b] in [0, 2pi].
double expected_zeros(int degree, double a, double b);

CovarianceTriple covariance_triple(const CovarianceModel& model, double t);

// Conditional derivative correlation
//   rho = (r'' (1-r^2) + (r')^2 r) / (lambda2 (1-r^2) - (r')^2).
// Values beyond 1 by more than `slack` signal an evaluator bug.
double rho(const CovarianceModel& model, double t, double slack = 1e-12);

// sqrt(1-y^2) + y asin(y), the angular factor of the two-point kernel.
double crossing_kernel(double y);

// Closed form of the absolute-moment Gaussian double integral,
// 4 (1-rho^2) + 4 rho asin(rho) sqrt(1-rho^2); exactly 0 at rho = +-1.
double bleher_di_kernel(double correlation);

// Two-point second-moment density and the machinery shared by the finite-N
// and limit kernels. For a covariance family with Taylor data c2..c8 the
// numerator lambda2'(1-r^2)-(r')^2 and the rho-numerator are Theta(x^4); the
// series path below `crossover` evaluates them from assembled Taylor
// coefficients, avoiding the cancellation that loses ~x^-4 digits in direct
// evaluation.
class SecondMomentKernel {
 public:
  explicit SecondMomentKernel(const CovarianceModel& model, double crossover = 1e-2);

  double lambda2p() const { return lambda2p_; }
  double crossover() const { return crossover_; }

  // M(x): two-point density factor such that E Z^2 - E Z over an interval I
  // equals (1/pi^2) iint_I2 m^2 M(m|t2-t1|) dt1 dt2 in the scaled variable.
  double density(double x) const;
  // M(x) - lambda2'; integrable against the variance formula.
  double centered(double x) const { return density(x) - lambda2p_; }
  // Conditional derivative correlation in the scaled variable.
  double rho(double x) const;

  // Series coefficients, exposed for tests: numerator (p), rho-numerator (q),
  // 1-r^2 (d), each as x^4 (x^2 for d) leading even series.
  std::array<double, 3> p_coeffs() const { return p_; }
  std::array<double, 3> q_coeffs() const { return q_; }
  std::array<double, 4> d_coeffs() const { return d_; }

 private:
  const CovarianceModel& model_;
  double crossover_;
  double lambda2p_;
  std::array<double, 3> p_{};  // p4, p6, p8
  std::array<double, 3> q_{};  // q4, q6, q8
  std::array<double, 4> d_{};  // d2, d4, d6, d8
};

// Second-moment integrand of the zero count of the degree-N polynomial:
// (2/pi) [lambda2 (1-r^2) - (r')^2] / (1-r^2)^{3/2} * crossing_kernel(rho).
double second_moment_integrand(int degree, double t);

struct VarianceResult {
  double variance = 0.0;
  double j_integral = 0.0;
  double expected = 0.0;
  double quad_error = 0.0;
  bool tol_achieved = true;
  bool degenerate = false;  // N = 1: exactly two zeros, variance 0
};

// Exact finite-N variance of the zero count on the full circle,
// Var = J + E Z, with J evaluated in the scaled variable.
VarianceResult variance_exact(int degree, double quad_tol = 1e-7);

// Variance of the zero count on a subinterval of length `len`.
VarianceResult variance_on_interval(int degree, double len, double quad_tol = 1e-7);

// Generic Var = J + E Z for any unit-variance stationary covariance given in
// the scaled variable on the circle [-pi m, pi m]; `scaled_length` below the
// full circumference 2 pi m gives the subinterval formula with the (L - u)
// weight.
VarianceResult variance_for_model(const CovarianceModel& scaled_model, double m,
                                  double scaled_length, double quad_tol = 1e-7);

// E Z^2 - E Z on the full circle by quadrature (second factorial moment).
double second_factorial_moment(int degree, double quad_tol = 1e-7);

struct ConditionalMatrixBundle {
  // Sigma is the 4x4 covariance of (X(t1), X(t2), X'(t1), X'(t2)) stored
  // row-major; omega the reduced 2x2 conditional covariance.
  std::array<double, 16> sigma;
  std::array<double, 4> omega;
  double mu;
  double rho;
  double det_sigma_direct;    // determinant of sigma
  double det_sigma_factored;  // (1-r^2) mu^2 (1-rho^2)
};

ConditionalMatrixBundle conditional_bundle(const CovarianceModel& model, double t);

}  // namespace trigzeros
