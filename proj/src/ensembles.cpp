#include "trigzeros/ensembles.hpp"

#include <cmath>

namespace trigzeros {

TrigSeries TrigPolynomial::series() const {
  TrigSeries s;
  s.omega = 1.0;
  s.cos_coeffs.resize(cos_coeffs.size());
  s.sin_coeffs.resize(sin_coeffs.size());
  for (std::size_t i = 0; i < cos_coeffs.size(); ++i) {
    s.cos_coeffs[i] = normalization * cos_coeffs[i];
    s.sin_coeffs[i] = normalization * sin_coeffs[i];
  }
  s.finalize();
  return s;
}

TrigPolynomial TrigPolynomial::shifted(double shift) const {
  TrigPolynomial out = *this;
  for (int n = 1; n <= degree; ++n) {
    const double c = std::cos(n * shift);
    const double s = std::sin(n * shift);
    const double a = sin_coeffs[static_cast<std::size_t>(n - 1)];
    const double b = cos_coeffs[static_cast<std::size_t>(n - 1)];
    // sin(n(t+shift)) = sin nt cos + cos nt sin; cos(n(t+shift)) = cos nt cos - sin nt sin.
    out.sin_coeffs[static_cast<std::size_t>(n - 1)] = a * c - b * s;
    out.cos_coeffs[static_cast<std::size_t>(n - 1)] = a * s + b * c;
  }
  return out;
}

TrigPolynomial sample_qualls(int degree, std::uint64_t seed) {
  if (degree < 1) throw ConfigError("degree must be >= 1");
  TrigPolynomial p;
  p.degree = degree;
  p.normalization = 1.0 / std::sqrt(static_cast<double>(degree));
  p.sin_coeffs.resize(static_cast<std::size_t>(degree));
  p.cos_coeffs.resize(static_cast<std::size_t>(degree));
  Rng rng(seed, stream::paths, 0);
  for (int n = 0; n < degree; ++n) {
    rng.normal_pair(p.sin_coeffs[static_cast<std::size_t>(n)],
                    p.cos_coeffs[static_cast<std::size_t>(n)]);
  }
  return p;
}

TrigPolynomial sample_dunnage(int degree, std::uint64_t seed) {
  if (degree < 1) throw ConfigError("degree must be >= 1");
  TrigPolynomial p;
  p.degree = degree;
  p.normalization = 1.0;
  p.sin_coeffs.assign(static_cast<std::size_t>(degree), 0.0);
  p.cos_coeffs.resize(static_cast<std::size_t>(degree));
  Rng rng(seed, stream::paths, 0);
  for (int n = 0; n < degree; ++n) {
    p.cos_coeffs[static_cast<std::size_t>(n)] = rng.normal();
  }
  return p;
}

std::pair<double, double> eval_poly(const TrigPolynomial& poly, double t) {
  double v, d;
  poly.series().eval(t, v, d);
  return {v, d};
}

// ---------------------------------------------------------------------------

TrigSeries SpectralProcess::series() const {
  TrigSeries s;
  s.omega = 1.0 / half_angular_unit;
  s.const_term = amplitudes[0] * gauss_a[0];
  const std::size_t k = amplitudes.size() - 1;
  s.cos_coeffs.resize(k);
  s.sin_coeffs.resize(k);
  for (std::size_t n = 1; n <= k; ++n) {
    s.cos_coeffs[n - 1] = amplitudes[n] * gauss_a[n];
    s.sin_coeffs[n - 1] = amplitudes[n] * gauss_b[n];
  }
  s.finalize();
  return s;
}

std::pair<SpectralProcess, SpectralProcess> coupled_from_spectrum(
    const MollifiedSpectrum& spectrum, std::uint64_t seed) {
  const int degree = spectrum.degree;
  const double m = spectrum.m;
  const int n_max = spectrum.truncation_index;

  std::vector<double> ga(static_cast<std::size_t>(n_max + 1));
  std::vector<double> gb(static_cast<std::size_t>(n_max + 1));
  Rng rng(seed, stream::paths, 0);
  for (int n = 0; n <= n_max; ++n) {
    rng.normal_pair(ga[static_cast<std::size_t>(n)], gb[static_cast<std::size_t>(n)]);
  }

  SpectralProcess plain;
  plain.half_angular_unit = m;
  plain.truncation_index = degree;
  plain.dropped_mass = 0.0;
  plain.effective_index = degree;
  plain.amplitudes.assign(static_cast<std::size_t>(degree + 1), 0.0);
  const double amp = 1.0 / std::sqrt(static_cast<double>(degree));
  for (int n = 1; n <= degree; ++n) plain.amplitudes[static_cast<std::size_t>(n)] = amp;
  plain.gauss_a.assign(ga.begin(), ga.begin() + degree + 1);
  plain.gauss_b.assign(gb.begin(), gb.begin() + degree + 1);

  SpectralProcess mollified;
  mollified.half_angular_unit = m;
  mollified.truncation_index = n_max;
  mollified.dropped_mass = spectrum.dropped_mass;
  mollified.effective_index = spectrum.effective_index;
  mollified.amplitudes.resize(static_cast<std::size_t>(n_max + 1));
  mollified.amplitudes[0] = std::sqrt(spectrum.rhat_m[0]) / std::pow(kTwoPi * m, 0.25);
  const double scale = std::pow(2.0, 0.25) / std::pow(kPi * m, 0.25);
  for (int n = 1; n <= n_max; ++n) {
    mollified.amplitudes[static_cast<std::size_t>(n)] =
        scale * std::sqrt(spectrum.rhat_m[static_cast<std::size_t>(n)]);
  }
  mollified.gauss_a = std::move(ga);
  mollified.gauss_b = std::move(gb);

  return {std::move(plain), std::move(mollified)};
}

std::pair<SpectralProcess, SpectralProcess> coupled_spectral_paths(int degree, double width,
                                                                   std::uint64_t seed,
                                                                   double tail_eps) {
  const MollifiedSpectrum spectrum = mollified_spectrum(degree, width, tail_eps);
  return coupled_from_spectrum(spectrum, seed);
}

// Declared in mollify.hpp; lives here so the analytic layer stays free of
// sampling code.
double path_l2_distance(int degree, double width, double x, long trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  const MollifiedSpectrum spectrum = mollified_spectrum(degree, width);
  double acc = 0.0;
  for (long trial = 0; trial < trials; ++trial) {
    const auto pair = coupled_from_spectrum(spectrum, derive_seed(seed, stream::mc, trial));
    double v0, d0, v1, d1;
    pair.first.series().eval(x, v0, d0);
    pair.second.series().eval(x, v1, d1);
    acc += (v1 - v0) * (v1 - v0);
  }
  return acc / static_cast<double>(trials);
}

// ---------------------------------------------------------------------------

namespace {

// Node index -> nonnegative stream index (zigzag).
std::uint64_t zigzag(long k) {
  return k >= 0 ? 2ull * static_cast<std::uint64_t>(k)
                : 2ull * static_cast<std::uint64_t>(-k) - 1ull;
}

double node_draw(std::uint64_t seed, long k) {
  Rng rng(seed, stream::sinc, zigzag(k));
  return rng.normal();
}

double sinc(double u) {
  if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

}  // namespace

std::vector<double> sample_sinc_path(const SincProcessSampler& sampler,
                                     const std::vector<double>& x_grid) {
  if (sampler.truncation_halfwidth < 1) throw ConfigError("truncation halfwidth must be >= 1");
  std::vector<double> out;
  out.reserve(x_grid.size());
  const int w = sampler.truncation_halfwidth;
  for (double x : x_grid) {
    const long center = std::lround(x / kPi);
    double acc = 0.0;
    for (long k = center - w; k <= center + w; ++k) {
      acc += node_draw(sampler.seed, k) * sinc(x - kPi * static_cast<double>(k));
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace trigzeros
