#pragma once

#include <string>

#include "uniscale/model.hpp"
#include "uniscale/pareto.hpp"

namespace uniscale {

enum class LossKind {
  dirac,           // 0-1; point estimate is the density argmax
  squared,         // (est - theta)^2
  weighted,        // (est - theta)^2 / theta
  scaled_squared,  // (1 - est/theta)^2
  log_squared,     // (ln est - ln theta)^2
};

const char* loss_name(LossKind loss);
LossKind loss_from_name(const std::string& name);
// Pointwise loss; dirac has no usable pointwise value and throws.
double loss_value(LossKind loss, double theta, double est);

// Distribution of theta given the data: TruncPareto(n, [theta_ml, theta_mu]).
// Its cdf evaluated at the true theta is exactly uniform, so the quantiles
// give exact-coverage intervals.
struct FiducialDist {
  TruncPareto dist;
  SuffStat source;
};

FiducialDist fiducial_dist(const SuffStat& s);

// Draw from the same law by conditioning on the ancillary ratio: draw
// V ~ TruncPareto(-n, [(1-k)/s2, 1+k]) and return y_max / V.  Agrees in
// distribution with sampling fiducial_dist directly.
double fiducial_sample_via_conditioning(const SuffStat& s, RandomStream& rng);

struct Interval {
  double lo, hi;
};

enum class IntervalShape { equal_tailed, highest_density };

// Level 1-gamma interval from the fiducial quantiles.  equal_tailed uses
// [q(gamma/2), q(1-gamma/2)]; highest_density uses [theta_ml, q(1-gamma)]
// (the density is decreasing).  gamma = 0 returns the sure interval.
Interval confidence_interval(const SuffStat& s, double gamma,
                             IntervalShape shape = IntervalShape::equal_tailed);

// The fiducial-expected-loss minimizer for each loss kind.
double point_estimate(const SuffStat& s, LossKind loss);

}  // namespace uniscale
