#pragma once

#include <vector>

namespace trigzeros {

struct SummaryStats {
  long n = 0;
  double mean = 0.0;
  double variance = 0.0;       // unbiased (n-1)
  double third_central = 0.0;  // biased central third moment
  double min = 0.0;
  double max = 0.0;
};

SummaryStats summarize(const std::vector<double>& samples);

double standard_normal_cdf(double x);

struct KsResult {
  double distance = 0.0;
  double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov distance against the standard normal, with
// the asymptotic p-value (Stephens' small-sample correction).
KsResult ks_statistic(std::vector<double> samples);

}  // namespace trigzeros
