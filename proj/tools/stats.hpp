#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace tangentlab::diag {

// Cumulative distribution of the Wigner semicircle of the given radius.
inline double semicircle_cdf(double x, double radius) {
  if (x <= -radius) return 0.0;
  if (x >= radius) return 1.0;
  const double r2 = radius * radius;
  return 0.5 + x * std::sqrt(r2 - x * x) / (3.14159265358979323846 * r2) +
         std::asin(x / radius) / 3.14159265358979323846;
}

inline double semicircle_pdf(double x, double radius) {
  if (std::abs(x) >= radius) return 0.0;
  const double r2 = radius * radius;
  return 2.0 * std::sqrt(r2 - x * x) / (3.14159265358979323846 * r2);
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace tangentlab::diag
