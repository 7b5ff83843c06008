#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "trigzeros/analytic.hpp"

namespace trigzeros {

// Normalized 8-fold self-convolution of an interval indicator: an even C^6
// bump equal to 1 at 0, supported on [-8M, 8M], piecewise polynomial of
// degree 7 in |x|/M with exact rational coefficients. Its Fourier transform
// on the circle of half-width pi*m is nonnegative.
class Mollifier {
 public:
  Mollifier(double width, double half_angular_unit);

  double width() const { return width_; }
  double half_angular_unit() const { return m_; }
  double support_halfwidth() const { return 8.0 * width_; }

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  // Central-piece coefficients: value(x) = 1 + b1 (x/M)^2 + b2 (x/M)^4
  // + b3 (x/M)^6 + b4 (|x|/M)^7 for |x| < 2M.
  std::array<double, 4> central_coefficients() const;

  // Normalizing constant C with S = chi^{*8} / (C M^7).
  double normalization_constant() const;
};

Mollifier build_mollifier(double width, double half_angular_unit);

// Closed-form Fourier coefficient of the mollifier on the circle [-pi m, pi m]:
// (2 pi m)^{7/2} / (C M^7) * chihat(n)^8 >= 0.
double s_m_hat(long n, const Mollifier& mollifier);

// Fourier data of the mollified covariance r^M = r_N * S_M on the circle.
struct MollifiedSpectrum {
  int degree = 0;
  double width = 0.0;              // M
  double m = 0.0;                  // N + 1/2
  std::vector<double> rhat_m;      // \hat r^M(n), n = 0..truncation_index
  int truncation_index = 0;        // dropped spectral mass beyond < tail_eps
  double dropped_mass = 0.0;
  int effective_index = 0;         // modes beyond carry < 1e-6 total mass
  double tail_eps = 0.0;

  // Variance carried by mode n in the spectral representation.
  double mode_mass(int n) const;
};

MollifiedSpectrum mollified_spectrum(int degree, double width, double tail_eps = 1e-10,
                                     int max_index = 0);

// Covariance of the mollified process: r^M(x) = f_N(x) S_M(x) by the product
// rule; Taylor data composed from both factors (the |x|^7 term of the
// mollifier is below the retained orders).
class MollifiedCovariance final : public CovarianceModel {
 public:
  MollifiedCovariance(int degree, double width);
  CovarianceKind kind() const override { return CovarianceKind::mollified_rnm; }
  CovarianceTriple triple(double x) const override;
  CovarianceTaylor taylor() const override { return taylor_; }
  double domain_halfwidth() const override { return kPi * (degree_ + 0.5); }
  double theta(double x) const override;
  const Mollifier& mollifier() const { return mollifier_; }
  int degree() const { return degree_; }

 private:
  int degree_;
  ScaledCovariance base_;
  Mollifier mollifier_;
  CovarianceTaylor taylor_;
};

// Cross-covariance of the coupled pair, r^{M,0}(x) = E[Y_N(y) Y_N^M(y+x)],
// a finite cosine sum with coefficients sqrt(rhat(n) rhat^M(n)). Unlike the
// other kinds this is a cross-covariance: r^{M,0}(0) < 1.
class JointProcessCovariance final : public CovarianceModel {
 public:
  JointProcessCovariance(int degree, double width);
  CovarianceKind kind() const override { return CovarianceKind::joint_rnm0; }
  CovarianceTriple triple(double x) const override;
  CovarianceTaylor taylor() const override { return taylor_; }
  double domain_halfwidth() const override { return kPi * m_; }
  double value_at_zero() const { return coeff_sum_; }
  const std::vector<double>& fourier_weights() const { return weights_; }
  double lambda2_n() const { return lambda2_n_; }   // -r_N''(0), scaled base
  double lambda2_nm() const { return lambda2_nm_; } // -(r^M)''(0)

 private:
  int degree_;
  double width_;
  double m_;
  std::vector<double> weights_;  // w_n, n = 1..N
  double coeff_sum_;
  double lambda2_n_, lambda2_nm_;
  CovarianceTaylor taylor_;
};

enum class MollifiedKind { product, joint };

// Dispatcher over the two mollified covariances: derivative orders 0, 1, 2.
double mollified_cov(int degree, double width, MollifiedKind which, double x, int order);

// L2(I_N) distances between the mollified covariances and the plain one,
// through second derivatives, by composite quadrature on a grid resolving
// both the oscillation scale 2 pi m / N and the mollifier width.
struct L2ClosenessReport {
  int degree = 0;
  double width = 0.0;
  double step = 0.0;
  // [order 0, 1, 2]
  std::array<double, 3> product_sq{};  // ||d^k(r^M - r)||^2
  std::array<double, 3> joint_sq{};    // ||d^k(r^{M,0} - r)||^2
};

L2ClosenessReport l2_closeness_report(int degree, double width);

// Conditional covariance matrices of the coupled pair at lag x != 0.
struct CoupledMatrixBundle {
  std::array<double, 16> sigma_m;    // Sigma_{N,M}
  std::array<double, 16> sigma_m0;   // Sigma_{N,M,0}
  std::array<double, 4> omega_m0;    // Omega_{N,M,0}
};

CoupledMatrixBundle conditional_matrices(int degree, double width, double x);

// Monte Carlo estimate of E (Y^M(x) - Y(x))^2 over coupled draws.
double path_l2_distance(int degree, double width, double x, long trials, std::uint64_t seed);

// For each correlation in the grid, the correlation of absolute values of a
// unit-variance Gaussian pair via the closed form, checked against
// 0 <= Cor(|V1|,|V2|) <= rho^2.
struct CuzickCheck {
  std::vector<double> correlations;      // Cor(|V1|, |V2|)
  double max_violation = 0.0;            // positive if a bound is broken
};

CuzickCheck cuzick_correlation_check(const std::vector<double>& rho_grid);

}  // namespace trigzeros
