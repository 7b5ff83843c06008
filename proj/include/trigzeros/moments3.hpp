#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "trigzeros/analytic.hpp"

namespace trigzeros {

// Three-point machinery for the zero-count third moment: the Gram
// determinant f(x,y) of values at lags {0, x, y}, the conditional-variance
// numerators R1, R2, R3 of the derivatives given triple zeros, and the
// triple-zero density P(x,y).
//
// Near the origin f is Theta(x^2 y^2 (y-x)^2) and R1 is
// Theta(x^4 y^4 (y-x)^2) while the raw formulas subtract O(1) quantities, so
// everything is assembled from theta = r - 1 in extended precision.
class TripleKernel {
 public:
  explicit TripleKernel(const CovarianceModel& model);

  double det(double x, double y) const;                        // f(x,y)
  std::array<double, 3> numerators(double x, double y) const;  // R1, R2, R3

  // Upper bound on P(x,y) via E|V1 V2 V3| <= (E V1^2)^{1/2} (E V2^4)^{1/4}
  // (E V3^4)^{1/4} with Gaussian fourth moments.
  double density_bound(double x, double y) const;

  // Monte Carlo estimate of P(x,y): draw the derivative triple from its
  // conditional Gaussian (Schur complement of the 6x6 joint matrix).
  double density_mc(double x, double y, long draws, std::uint64_t seed) const;

  const CovarianceModel& model() const { return model_; }

 private:
  const CovarianceModel& model_;
  double lambda2p_;
};

double triple_det(const CovarianceModel& model, double x, double y);
std::array<double, 3> conditional_numerators(const CovarianceModel& model, double x, double y);
// mc_draws = 0 gives the Cauchy-Schwarz bound mode.
double triple_density(const CovarianceModel& model, double x, double y, long mc_draws = 0,
                      std::uint64_t seed = 0);

struct ThirdMomentResult {
  int degree = 0;
  double width = 0.0;  // mollifier width M
  int intervals = 0;   // K = L N over [0, pi m]
  long trials = 0;
  std::vector<double> third_moments;  // E[Z^3] per interval
  double max_third_moment = 0.0;
  double mean_count = 0.0;  // across intervals and trials
};

// Monte Carlo third moments of zero counts of the mollified process on
// K = L N equal subintervals of [0, pi m].
ThirdMomentResult third_moment_mc(int degree, double width, int intervals_per_degree,
                                  long trials, std::uint64_t seed, int threads = 0);

}  // namespace trigzeros
