#include "uniscale/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uniscale {

Design::Design(double k_, int n_) : k(k_), n(n_) {
  if (!(k > 0.0) || !(k < 1.0))
    throw std::domain_error("Design: k must lie strictly in (0, 1), got " + std::to_string(k_));
  if (n < 1)
    throw std::domain_error("Design: n must be >= 1, got " + std::to_string(n_));
}

Sample sample_scaled_uniform(double theta, const Design& d, RandomStream& rng) {
  if (!(theta > 0.0))
    throw std::domain_error("sample_scaled_uniform: theta must be > 0");
  Sample out{d, {}};
  out.y.resize(static_cast<std::size_t>(d.n));
  for (double& y : out.y) y = theta * (1.0 - d.k + 2.0 * d.k * rng.uniform01());
  return out;
}

SuffStat suff_stat_from_extremes(double y_min, double y_max, const Design& d) {
  if (!(y_min > 0.0) || !(y_max > 0.0))
    throw std::domain_error("suff_stat: observations must be positive");
  if (y_min > y_max) throw std::domain_error("suff_stat: y_min > y_max");
  const double theta_ml = y_max / (1.0 + d.k);
  const double theta_mu = y_min / (1.0 - d.k);
  if (theta_ml > theta_mu) {
    std::ostringstream msg;
    msg << "infeasible sample: y_max/(1+k) = " << theta_ml << " > y_min/(1-k) = " << theta_mu
        << " (no theta can produce these data with k = " << d.k << ")";
    throw InfeasibleSampleError(msg.str());
  }
  return SuffStat{d, y_min, y_max, theta_ml, theta_mu, y_min / y_max, theta_mu / theta_ml};
}

SuffStat suff_stat(const Sample& sample) {
  if (sample.y.size() != static_cast<std::size_t>(sample.design.n))
    throw std::domain_error("suff_stat: sample length does not match design n");
  const auto [lo, hi] = std::minmax_element(sample.y.begin(), sample.y.end());
  return suff_stat_from_extremes(*lo, *hi, sample.design);
}

double likelihood(double theta, const SuffStat& s) {
  if (!(theta >= s.theta_ml) || !(theta <= s.theta_mu)) return 0.0;
  return std::pow(2.0 * s.design.k * theta, -s.design.n);
}

double order_stat_density(double u1, double un, const Design& d) {
  if (d.n < 2) throw std::domain_error("order_stat_density: requires n >= 2");
  const double lo = 1.0 - d.k, hi = 1.0 + d.k;
  if (u1 < lo || un > hi || u1 > un) return 0.0;
  const double n = d.n;
  return n * (n - 1.0) * std::pow(un - u1, d.n - 2) * std::pow(2.0 * d.k, -d.n);
}

}  // namespace uniscale
