#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace uniscale {

// Kolmogorov-Smirnov statistic of xs against U(0,1).
inline double ks_statistic_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, xs[i] - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - xs[i]);
  }
  return d;
}

// Two-sample KS statistic: sup |F_a - F_b| over the pooled sample.
inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

// Asymptotic critical coefficient: P(sup|B(t)| > c) = alpha, via the
// leading term of the Kolmogorov series; c(0.01) ~ 1.6276.
inline double ks_critical_coefficient(double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

inline double ks_critical_one_sample(double alpha, std::size_t n) {
  return ks_critical_coefficient(alpha) / std::sqrt(static_cast<double>(n));
}

inline double ks_critical_two_sample(double alpha, std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return ks_critical_coefficient(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace uniscale
