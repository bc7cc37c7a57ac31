#pragma once

#include <stdexcept>
#include <vector>

#include "uniscale/random.hpp"

namespace uniscale {

// Observation model: y_i = theta * u_i with u_i iid uniform on [1-k, 1+k].
// The scale theta > 0 is unknown; the relative half-width k is known.
struct Design {
  double k;  // relative half-width, 0 < k < 1
  int n;     // sample size, n >= 1

  Design(double k, int n);
};

struct Sample {
  Design design;
  std::vector<double> y;
};

// Thrown when no theta > 0 can produce the data, i.e. the sure interval
// [y_max/(1+k), y_min/(1-k)] is empty.
class InfeasibleSampleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Minimal sufficient pair (y_min, y_max) plus the derived quantities every
// downstream rule consumes.  b_star = 1 (maximal spread) pins theta exactly;
// y_min = y_max (tied sample) is the other legal extreme with s2 = 1.
struct SuffStat {
  Design design;
  double y_min, y_max;
  double theta_ml;  // y_max / (1+k): MLE, lower end of the sure interval
  double theta_mu;  // y_min / (1-k): upper end of the sure interval
  double s2;        // y_min / y_max, ancillary, in [(1-k)/(1+k), 1]
  double b_star;    // theta_mu / theta_ml >= 1
};

Sample sample_scaled_uniform(double theta, const Design& d, RandomStream& rng);

SuffStat suff_stat(const Sample& sample);
// Same reduction from the extremes alone (used by the quadrature engines).
SuffStat suff_stat_from_extremes(double y_min, double y_max, const Design& d);

// (2 k theta)^-n on the sure interval, 0 outside.
double likelihood(double theta, const SuffStat& s);

// Joint density of (min, max) of n iid U[1-k, 1+k]; requires n >= 2.
double order_stat_density(double u1, double un, const Design& d);

}  // namespace uniscale
