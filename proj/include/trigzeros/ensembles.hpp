#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trigzeros/mollify.hpp"
#include "trigzeros/rng.hpp"
#include "trigzeros/trig_series.hpp"

namespace trigzeros {

// Mixes auxiliary indices into a master seed; pure in all arguments.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t x = master;
  splitmix64_next(x);
  x ^= 0xC2B2AE3D27D4EB4Full * (a + 1);
  splitmix64_next(x);
  x ^= 0x165667B19E3779F9ull * (b + 1);
  return splitmix64_next(x);
}

// A sampled random trigonometric polynomial
//   X(t) = normalization * sum_n (sin_coeffs[n-1] sin nt + cos_coeffs[n-1] cos nt).
struct TrigPolynomial {
  int degree = 0;
  std::vector<double> sin_coeffs;
  std::vector<double> cos_coeffs;
  double normalization = 1.0;

  TrigSeries series() const;
  // Coefficients of t -> X(t + shift); counting on [a,b] for X equals
  // counting on [0, b-a] for the shifted polynomial.
  TrigPolynomial shifted(double shift) const;
};

// Degree-N polynomial with 2N iid standard Gaussian coefficients and the
// 1/sqrt(N) normalization giving unit variance at every point.
TrigPolynomial sample_qualls(int degree, std::uint64_t seed);

// Cosine-only ensemble, no normalization; exploratory comparisons only.
TrigPolynomial sample_dunnage(int degree, std::uint64_t seed);

std::pair<double, double> eval_poly(const TrigPolynomial& poly, double t);

// Spectral-form process on the circle [-pi m, pi m]: per-mode amplitudes
// (standard deviations) and the Gaussian draws behind them. Coupled
// processes share the same draw vectors for modes n <= N.
struct SpectralProcess {
  double half_angular_unit = 0.0;  // m
  std::vector<double> amplitudes;  // index 0..truncation_index
  std::vector<double> gauss_a;     // cosine draws (index 0 = constant mode)
  std::vector<double> gauss_b;     // sine draws
  int truncation_index = 0;
  double dropped_mass = 0.0;
  int effective_index = 0;  // modes beyond carry < 1e-6 of the variance

  TrigSeries series() const;
};

// Coupled pair (Y_N, Y_N^M) built from one draw sequence: Y_N uses modes
// 1..N with amplitude 1/sqrt(N); Y_N^M uses the mollified spectrum with the
// same draws for n <= N and fresh ones beyond.
std::pair<SpectralProcess, SpectralProcess> coupled_spectral_paths(int degree, double width,
                                                                   std::uint64_t seed,
                                                                   double tail_eps = 1e-10);

// Same, with the (degree, width)-dependent spectrum precomputed once.
std::pair<SpectralProcess, SpectralProcess> coupled_from_spectrum(
    const MollifiedSpectrum& spectrum, std::uint64_t seed);

// Truncated cardinal-series sampler of the unit-variance process with
// covariance sin(x)/x: nodes at pi k carry iid standard Gaussians and
// Y(x) = sum_{|k - x/pi| <= W} a_k sin(x - pi k)/(x - pi k).
struct SincProcessSampler {
  int truncation_halfwidth = 200;  // W
  std::uint64_t seed = 0;
};

std::vector<double> sample_sinc_path(const SincProcessSampler& sampler,
                                     const std::vector<double>& x_grid);

}  // namespace trigzeros
