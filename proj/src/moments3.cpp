#include "trigzeros/moments3.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "trigzeros/ensembles.hpp"
#include "trigzeros/rng.hpp"
#include "trigzeros/zeros.hpp"

namespace trigzeros {

namespace {

struct ThetaTriple {
  long double t, td;  // theta and theta' at one lag
};

ThetaTriple theta_at(const CovarianceModel& model, double x) {
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  const double ax = std::abs(x);
  const double th = model.theta(ax);
  const double dr = model.triple(ax).dr;
  return {static_cast<long double>(th), static_cast<long double>(sgn * dr)};
}

void check_lags(double x, double y) {
  if (!(0.0 < x && x < y)) throw ConfigError("triple kernel requires 0 < x < y");
}

}  // namespace

TripleKernel::TripleKernel(const CovarianceModel& model)
    : model_(model), lambda2p_(model.lambda2()) {}

double TripleKernel::det(double x, double y) const {
  check_lags(x, y);
  const ThetaTriple a = theta_at(model_, x);
  const ThetaTriple b = theta_at(model_, y);
  const ThetaTriple c = theta_at(model_, y - x);
  const long double f = -(a.t * a.t + b.t * b.t + c.t * c.t) +
                        2.0L * (a.t * b.t + b.t * c.t + a.t * c.t) + 2.0L * a.t * b.t * c.t;
  return static_cast<double>(f);
}

std::array<double, 3> TripleKernel::numerators(double x, double y) const {
  check_lags(x, y);
  const ThetaTriple a = theta_at(model_, x);      // lag x
  const ThetaTriple b = theta_at(model_, y);      // lag y
  const ThetaTriple c = theta_at(model_, y - x);  // lag y - x
  const long double lam = static_cast<long double>(lambda2p_);
  const long double f = -(a.t * a.t + b.t * b.t + c.t * c.t) +
                        2.0L * (a.t * b.t + b.t * c.t + a.t * c.t) + 2.0L * a.t * b.t * c.t;
  // R1 in theta form; R2, R3 by the lag relabelings (x,y)->(-x,y-x) and
  // (x,y)->(y-x,y), under which theta is even and theta' odd.
  const long double r1 = lam * f +
                         2.0L * (a.td * a.td * b.t + b.td * b.td * a.t -
                                 a.td * b.td * (a.t + b.t - c.t)) +
                         (a.t * b.td - b.t * a.td) * (a.t * b.td - b.t * a.td);
  const long double r2 = lam * f +
                         2.0L * (a.td * a.td * c.t + c.td * c.td * a.t +
                                 a.td * c.td * (a.t + c.t - b.t)) +
                         (a.t * c.td + c.t * a.td) * (a.t * c.td + c.t * a.td);
  const long double r3 = lam * f +
                         2.0L * (c.td * c.td * b.t + b.td * b.td * c.t -
                                 c.td * b.td * (c.t + b.t - a.t)) +
                         (c.t * b.td - b.t * c.td) * (c.t * b.td - b.t * c.td);
  return {static_cast<double>(r1), static_cast<double>(r2), static_cast<double>(r3)};
}

double TripleKernel::density_bound(double x, double y) const {
  const double f = det(x, y);
  if (!(f > 0.0)) throw ConfigError("triple density requires f(x,y) > 0");
  const auto r = numerators(x, y);
  const double s1 = std::sqrt(r[0] / f);
  const double s2 = std::sqrt(r[1] / f);
  const double s3 = std::sqrt(r[2] / f);
  // (E V2^4)^{1/4} = 3^{1/4} sqrt(sigma2), same for V3.
  const double bound = s1 * std::sqrt(3.0) * s2 * s3;
  return bound / (std::pow(kTwoPi, 1.5) * std::sqrt(f));
}

double TripleKernel::density_mc(double x, double y, long draws, std::uint64_t seed) const {
  const double f = det(x, y);
  if (!(f > 0.0)) throw ConfigError("triple density requires f(x,y) > 0");
  if (draws < 1) throw ConfigError("draws must be >= 1");

  // Joint 6x6 covariance of (Y(0), Y(x), Y(y), Y'(0), Y'(x), Y'(y)).
  const double lags[3] = {0.0, x, y};
  Eigen::Matrix<double, 6, 6> joint;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double lag = lags[j] - lags[i];
      const CovarianceTriple tr = model_.triple(std::abs(lag));
      const double sgn = lag < 0.0 ? -1.0 : 1.0;
      joint(i, j) = tr.r;
      joint(i, 3 + j) = sgn * tr.dr;
      joint(3 + i, j) = -sgn * tr.dr;
      joint(3 + i, 3 + j) = -tr.ddr;
    }
  }
  const Eigen::Matrix3d a = joint.topLeftCorner<3, 3>();
  const Eigen::Matrix3d b = joint.topRightCorner<3, 3>();
  const Eigen::Matrix3d d = joint.bottomRightCorner<3, 3>();
  const Eigen::Matrix3d cond = d - b.transpose() * a.llt().solve(b);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cond);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw InvariantError("conditional covariance not positive semidefinite");
  }
  Eigen::Matrix3d psd = cond;
  for (int i = 0; i < 3; ++i) psd(i, i) += 1e-14;
  const Eigen::LLT<Eigen::Matrix3d> llt(psd);
  const Eigen::Matrix3d chol = llt.matrixL();

  Rng rng(seed, stream::moments, 0);
  double acc = 0.0;
  for (long k = 0; k < draws; ++k) {
    Eigen::Vector3d z;
    double z3;
    rng.normal_pair(z(0), z(1));
    rng.normal_pair(z(2), z3);
    const Eigen::Vector3d v = chol * z;
    acc += std::abs(v(0) * v(1) * v(2));
  }
  return acc / static_cast<double>(draws) / (std::pow(kTwoPi, 1.5) * std::sqrt(f));
}

double triple_det(const CovarianceModel& model, double x, double y) {
  return TripleKernel(model).det(x, y);
}

std::array<double, 3> conditional_numerators(const CovarianceModel& model, double x, double y) {
  return TripleKernel(model).numerators(x, y);
}

double triple_density(const CovarianceModel& model, double x, double y, long mc_draws,
                      std::uint64_t seed) {
  TripleKernel kernel(model);
  return mc_draws > 0 ? kernel.density_mc(x, y, mc_draws, seed) : kernel.density_bound(x, y);
}

// ---------------------------------------------------------------------------

ThirdMomentResult third_moment_mc(int degree, double width, int intervals_per_degree,
                                  long trials, std::uint64_t seed, int threads) {
  (void)threads;
  if (intervals_per_degree < 1) throw ConfigError("intervals per degree must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  const double m = degree + 0.5;
  const int k_count = intervals_per_degree * degree;
  const double upper = kPi * m;
  const double interval_len = upper / static_cast<double>(k_count);

  const MollifiedSpectrum spectrum = mollified_spectrum(degree, width);

  std::vector<double> sum3(static_cast<std::size_t>(k_count), 0.0);
  double count_acc = 0.0;
  for (long trial = 0; trial < trials; ++trial) {
    const auto pair = coupled_from_spectrum(spectrum, derive_seed(seed, stream::moments, trial));
    const TrigSeries path = pair.second.series();
    ZeroCountOptions opt;
    opt.locate = true;
    opt.refine_tol_factor = 1e-9;
    opt.bound_freq = static_cast<double>(pair.second.truncation_index) / m;
    const ZeroReport report = count_zeros(
        path, 0.0, upper, static_cast<double>(pair.second.effective_index) / m, opt);
    std::vector<int> counts(static_cast<std::size_t>(k_count), 0);
    for (double z : report.locations) {
      int k = static_cast<int>(z / interval_len);
      k = std::min(std::max(k, 0), k_count - 1);
      ++counts[static_cast<std::size_t>(k)];
    }
    for (int k = 0; k < k_count; ++k) {
      const double c = counts[static_cast<std::size_t>(k)];
      sum3[static_cast<std::size_t>(k)] += c * c * c;
      count_acc += c;
    }
  }

  ThirdMomentResult out;
  out.degree = degree;
  out.width = width;
  out.intervals = k_count;
  out.trials = trials;
  out.third_moments.resize(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    out.third_moments[static_cast<std::size_t>(k)] =
        sum3[static_cast<std::size_t>(k)] / static_cast<double>(trials);
    out.max_third_moment = std::max(out.max_third_moment, out.third_moments[static_cast<std::size_t>(k)]);
  }
  out.mean_count = count_acc / static_cast<double>(trials * k_count);
  return out;
}

}  // namespace trigzeros
