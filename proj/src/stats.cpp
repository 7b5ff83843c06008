#include "trigzeros/stats.hpp"

#include <algorithm>
#include <cmath>

#include "trigzeros/common.hpp"

namespace trigzeros {

SummaryStats summarize(const std::vector<double>& samples) {
  SummaryStats s;
  s.n = static_cast<long>(samples.size());
  if (s.n == 0) return s;
  s.min = samples[0];
  s.max = samples[0];
  double acc = 0.0;
  for (double x : samples) {
    acc += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = acc / static_cast<double>(s.n);
  double m2 = 0.0, m3 = 0.0;
  for (double x : samples) {
    const double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  s.variance = s.n > 1 ? m2 / static_cast<double>(s.n - 1) : 0.0;
  s.third_central = m3 / static_cast<double>(s.n);
  return s;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_statistic(std::vector<double> samples) {
  if (samples.size() < 100) throw ConfigError("ks_statistic requires at least 100 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = standard_normal_cdf(samples[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  KsResult out;
  out.distance = d;
  const double sqrt_n = std::sqrt(n);
  out.p_value = kolmogorov_tail((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
  return out;
}

}  // namespace trigzeros
