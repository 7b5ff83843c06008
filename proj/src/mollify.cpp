#include "trigzeros/mollify.hpp"

#include <algorithm>
#include <cmath>

namespace trigzeros {

namespace {

// Piece table of the normalized 8-fold indicator convolution on w = |x|/(2M),
// w in [0,4): four degree-7 polynomials with integer coefficients over the
// common denominator 2416. Piece k covers w in [k, k+1):
//   P_k(w) = sum_{j=0}^{4+k} (-1)^j C(8,j) (w + 4 - j)^7.
struct PieceTable {
  double coeff[4][8];  // [piece][power of w]
  PieceTable() {
    constexpr double binom8[9] = {1, 8, 28, 56, 70, 56, 28, 8, 1};
    constexpr double binom7[8] = {1, 7, 21, 35, 35, 21, 7, 1};
    for (int k = 0; k < 4; ++k) {
      for (int p = 0; p < 8; ++p) coeff[k][p] = 0.0;
      for (int j = 0; j <= 4 + k; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double shift = 4.0 - j;  // (w + shift)^7
        double shift_pow = 1.0;        // shift^(7-p) accumulated from p=7 down
        for (int p = 7; p >= 0; --p) {
          coeff[k][p] += sign * binom8[j] * binom7[p] * shift_pow;
          shift_pow *= shift;
        }
      }
    }
  }
};

const PieceTable& pieces() {
  static const PieceTable table;
  return table;
}

constexpr double kNorm = 2416.0;  // P_0(0)

double piece_eval(int k, double w, int order) {
  const double* c = pieces().coeff[k];
  double acc = 0.0;
  switch (order) {
    case 0:
      for (int p = 7; p >= 0; --p) acc = acc * w + c[p];
      break;
    case 1:
      for (int p = 7; p >= 1; --p) acc = acc * w + p * c[p];
      break;
    case 2:
      for (int p = 7; p >= 2; --p) acc = acc * w + p * (p - 1) * c[p];
      break;
    default:
      throw ConfigError("derivative order must be 0, 1, or 2");
  }
  return acc / kNorm;
}

}  // namespace

Mollifier::Mollifier(double width, double half_angular_unit)
    : width_(width), m_(half_angular_unit) {
  if (!(width > 0.0) || !(width < kPi * m_)) {
    throw ConfigError("mollifier width must satisfy 0 < M < pi m");
  }
}

double Mollifier::value(double x) const {
  const double w = std::abs(x) / (2.0 * width_);
  if (w >= 4.0) return 0.0;
  return piece_eval(static_cast<int>(w), w, 0);
}

double Mollifier::derivative(double x) const {
  const double w = std::abs(x) / (2.0 * width_);
  if (w >= 4.0) return 0.0;
  const double inner = piece_eval(static_cast<int>(w), w, 1) / (2.0 * width_);
  return x < 0.0 ? -inner : inner;
}

double Mollifier::second_derivative(double x) const {
  const double w = std::abs(x) / (2.0 * width_);
  if (w >= 4.0) return 0.0;
  return piece_eval(static_cast<int>(w), w, 2) / (4.0 * width_ * width_);
}

std::array<double, 4> Mollifier::central_coefficients() const {
  const double* c = pieces().coeff[0];
  // Convert powers of w = |x|/(2M) to powers of |x|/M.
  return {c[2] / (4.0 * kNorm), c[4] / (16.0 * kNorm), c[6] / (64.0 * kNorm),
          c[7] / (128.0 * kNorm)};
}

double Mollifier::normalization_constant() const { return 128.0 * kNorm / 5040.0; }

Mollifier build_mollifier(double width, double half_angular_unit) {
  return Mollifier(width, half_angular_unit);
}

double s_m_hat(long n, const Mollifier& mollifier) {
  const double m = mollifier.half_angular_unit();
  const double big_m = mollifier.width();
  double chihat;
  if (n == 0) {
    chihat = std::sqrt(2.0 / kPi) * big_m / std::sqrt(m);
  } else {
    const double nn = static_cast<double>(n);
    chihat = std::sqrt(2.0 / kPi) * std::sqrt(m) / nn * std::sin(nn * big_m / m);
  }
  const double chi8 = std::pow(chihat, 8);
  return std::pow(kTwoPi * m, 3.5) / (mollifier.normalization_constant() * std::pow(big_m, 7)) *
         chi8;
}

// ---------------------------------------------------------------------------

double MollifiedSpectrum::mode_mass(int n) const {
  if (n < 0 || n > truncation_index) return 0.0;
  if (n == 0) return rhat_m[0] / std::sqrt(kTwoPi * m);
  return std::sqrt(2.0) * rhat_m[n] / std::sqrt(kPi * m);
}

MollifiedSpectrum mollified_spectrum(int degree, double width, double tail_eps, int max_index) {
  if (degree < 1) throw ConfigError("degree must be >= 1");
  const double m = degree + 0.5;
  Mollifier mol(width, m);
  if (!(tail_eps > 0.0)) throw ConfigError("tail_eps must be positive");
  if (max_index <= 0) max_index = 32 * degree + static_cast<int>(128.0 * m / width) + 4096;

  MollifiedSpectrum out;
  out.degree = degree;
  out.width = width;
  out.m = m;
  out.tail_eps = tail_eps;

  // \hat S_M table out to the largest shifted index we can touch.
  std::vector<double> shat(static_cast<std::size_t>(max_index + degree + 1));
  for (int j = 0; j < static_cast<int>(shat.size()); ++j) shat[j] = s_m_hat(j, mol);
  auto shat_at = [&](long j) { return shat[static_cast<std::size_t>(std::labs(j))]; };

  auto rhat = [&](int n) {
    double acc = 0.0;
    for (int k = 1; k <= degree; ++k) acc += shat_at(n - k) + shat_at(n + k);
    return acc / (2.0 * degree);
  };

  out.rhat_m.push_back(rhat(0));
  double total = out.rhat_m[0] / std::sqrt(kTwoPi * m);
  int effective = 0;
  const double effective_eps = std::max(tail_eps, 1e-6);
  int n = 0;
  while (1.0 - total >= tail_eps) {
    if (n >= max_index) {
      throw ToleranceError("spectral tail bound unachievable within max index", 1.0 - total);
    }
    ++n;
    out.rhat_m.push_back(rhat(n));
    total += std::sqrt(2.0) * out.rhat_m[n] / std::sqrt(kPi * m);
    if (effective == 0 && 1.0 - total < effective_eps) effective = n;
  }
  out.truncation_index = n;
  out.dropped_mass = std::max(0.0, 1.0 - total);
  out.effective_index = effective == 0 ? n : effective;
  return out;
}

// ---------------------------------------------------------------------------

MollifiedCovariance::MollifiedCovariance(int degree, double width)
    : degree_(degree), base_(degree), mollifier_(width, degree + 0.5) {
  const auto c = base_.taylor();
  const auto b = mollifier_.central_coefficients();
  const double m2 = width * width;
  const double s1 = b[0] / m2;
  const double s2 = b[1] / (m2 * m2);
  const double s3 = b[2] / (m2 * m2 * m2);
  taylor_ = {c[0] + s1, c[1] + s2 + c[0] * s1, c[2] + s3 + c[0] * s2 + c[1] * s1,
             c[3] + c[0] * s3 + c[1] * s2 + c[2] * s1};
}

CovarianceTriple MollifiedCovariance::triple(double x) const {
  const CovarianceTriple f = base_.triple(x);
  const double s0 = mollifier_.value(x);
  const double s1 = mollifier_.derivative(x);
  const double s2 = mollifier_.second_derivative(x);
  return {f.r * s0, f.dr * s0 + f.r * s1, f.ddr * s0 + 2.0 * f.dr * s1 + f.r * s2};
}

double MollifiedCovariance::theta(double x) const {
  const double ax = std::abs(x);
  const double th = base_.theta(x);
  double sigma;
  if (ax < 2.0 * mollifier_.width()) {
    const auto b = mollifier_.central_coefficients();
    const double u = ax / mollifier_.width();
    const double u2 = u * u;
    sigma = u2 * (b[0] + u2 * (b[1] + u2 * b[2])) + b[3] * u2 * u2 * u2 * u;
  } else {
    sigma = mollifier_.value(x) - 1.0;
  }
  return th + sigma + th * sigma;
}

// ---------------------------------------------------------------------------

JointProcessCovariance::JointProcessCovariance(int degree, double width)
    : degree_(degree), width_(width), m_(degree + 0.5) {
  Mollifier mol(width, m_);
  const double rhat_n = std::sqrt(kPi * m_) / (std::sqrt(2.0) * degree);
  weights_.resize(static_cast<std::size_t>(degree));
  double sum = 0.0, mom2 = 0.0, mom4 = 0.0, mom6 = 0.0, mom8 = 0.0;
  for (int n = 1; n <= degree; ++n) {
    double rhm = 0.0;
    for (int k = 1; k <= degree; ++k) {
      rhm += s_m_hat(n - k, mol) + s_m_hat(n + k, mol);
    }
    rhm /= 2.0 * degree;
    const double w = std::sqrt(rhat_n * rhm) * std::sqrt(2.0) / std::sqrt(kPi * m_);
    weights_[static_cast<std::size_t>(n - 1)] = w;
    const double freq2 = (n / m_) * (n / m_);
    sum += w;
    mom2 += w * freq2;
    mom4 += w * freq2 * freq2;
    mom6 += w * freq2 * freq2 * freq2;
    mom8 += w * freq2 * freq2 * freq2 * freq2;
  }
  coeff_sum_ = sum;
  taylor_ = {-mom2 / 2.0, mom4 / 24.0, -mom6 / 720.0, mom8 / 40320.0};
  lambda2_n_ = ScaledCovariance(degree).lambda2();
  lambda2_nm_ = MollifiedCovariance(degree, width).lambda2();
}

CovarianceTriple JointProcessCovariance::triple(double x) const {
  // Finite cosine sum with rotation recurrence.
  const double a = x / m_;
  const double step_c = std::cos(a), step_s = std::sin(a);
  double c = step_c, s = step_s;
  double r = 0.0, dr = 0.0, ddr = 0.0;
  for (int n = 1; n <= degree_; ++n) {
    const double w = weights_[static_cast<std::size_t>(n - 1)];
    const double freq = n / m_;
    r += w * c;
    dr -= w * freq * s;
    ddr -= w * freq * freq * c;
    const double cn = c * step_c - s * step_s;
    s = s * step_c + c * step_s;
    c = cn;
  }
  return {r, dr, ddr};
}

// ---------------------------------------------------------------------------

double mollified_cov(int degree, double width, MollifiedKind which, double x, int order) {
  if (order < 0 || order > 2) throw ConfigError("derivative order must be 0, 1, or 2");
  const double m = degree + 0.5;
  if (std::abs(x) > kPi * m + 1e-9) throw ConfigError("lag outside [-pi m, pi m]");
  CovarianceTriple t;
  if (which == MollifiedKind::product) {
    t = MollifiedCovariance(degree, width).triple(x);
  } else {
    t = JointProcessCovariance(degree, width).triple(x);
  }
  return order == 0 ? t.r : (order == 1 ? t.dr : t.ddr);
}

L2ClosenessReport l2_closeness_report(int degree, double width) {
  const double m = degree + 0.5;
  const ScaledCovariance base(degree);
  const MollifiedCovariance prod(degree, width);
  const JointProcessCovariance joint(degree, width);

  L2ClosenessReport out;
  out.degree = degree;
  out.width = width;
  // Step resolving 16 points per oscillation 2 pi m / N and 64 across M.
  double step = std::min(kTwoPi * m / (16.0 * degree), width / 64.0);
  const double upper = kPi * m;
  long cells = static_cast<long>(std::ceil(upper / step));
  if (cells % 2 == 1) ++cells;
  step = upper / static_cast<double>(cells);
  out.step = step;

  // Composite Simpson over [0, pi m], doubled for the even integrands.
  auto accumulate = [&](auto&& integrand, std::array<double, 3>& dest) {
    for (long i = 0; i <= cells; ++i) {
      const double x = static_cast<double>(i) * step;
      const double w = (i == 0 || i == cells) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const auto v = integrand(x);
      dest[0] += w * v[0];
      dest[1] += w * v[1];
      dest[2] += w * v[2];
    }
  };

  std::array<double, 3> prod_acc{}, joint_acc{};
  accumulate(
      [&](double x) {
        const auto b = base.triple(x);
        const auto p = prod.triple(x);
        return std::array<double, 3>{(p.r - b.r) * (p.r - b.r), (p.dr - b.dr) * (p.dr - b.dr),
                                     (p.ddr - b.ddr) * (p.ddr - b.ddr)};
      },
      prod_acc);
  accumulate(
      [&](double x) {
        const auto b = base.triple(x);
        const auto j = joint.triple(x);
        return std::array<double, 3>{(j.r - b.r) * (j.r - b.r), (j.dr - b.dr) * (j.dr - b.dr),
                                     (j.ddr - b.ddr) * (j.ddr - b.ddr)};
      },
      joint_acc);
  for (int k = 0; k < 3; ++k) {
    out.product_sq[k] = 2.0 * prod_acc[k] * step / 3.0;
    out.joint_sq[k] = 2.0 * joint_acc[k] * step / 3.0;
  }
  return out;
}

CoupledMatrixBundle conditional_matrices(int degree, double width, double x) {
  if (x == 0.0) throw ConfigError("conditional matrices require x != 0");
  const MollifiedCovariance prod(degree, width);
  const JointProcessCovariance joint(degree, width);

  CoupledMatrixBundle out{};
  const auto bundle = conditional_bundle(prod, x);
  out.sigma_m = bundle.sigma;

  const auto j = joint.triple(x);
  const double lam_n = joint.lambda2_n();
  const double lam_nm = joint.lambda2_nm();
  out.sigma_m0 = {1.0, j.r, 0.0,  j.dr,  //
                  j.r, 1.0, -j.dr, 0.0,  //
                  0.0, -j.dr, lam_n, -j.ddr,  //
                  j.dr, 0.0, -j.ddr, lam_nm};
  const double denom = 1.0 - j.r * j.r;
  const double cross = -j.ddr - j.r * j.dr * j.dr / denom;
  out.omega_m0 = {lam_n - j.dr * j.dr / denom, cross, cross, lam_nm - j.dr * j.dr / denom};
  return out;
}

CuzickCheck cuzick_correlation_check(const std::vector<double>& rho_grid) {
  CuzickCheck out;
  out.correlations.reserve(rho_grid.size());
  constexpr double kTwoOverPi = 2.0 / kPi;
  for (double rho : rho_grid) {
    if (std::abs(rho) > 1.0) throw ConfigError("correlation grid must lie in [-1, 1]");
    // E|V1 V2| = (2/pi) (sqrt(1-rho^2) + rho asin rho) for a unit pair;
    // E|V| = sqrt(2/pi), Var|V| = 1 - 2/pi.
    const double abs_moment = kTwoOverPi * crossing_kernel(rho);
    const double cor = (abs_moment - kTwoOverPi) / (1.0 - kTwoOverPi);
    out.correlations.push_back(cor);
    const double viol = std::max(-cor, cor - rho * rho);
    out.max_violation = std::max(out.max_violation, viol);
  }
  return out;
}

}  // namespace trigzeros
