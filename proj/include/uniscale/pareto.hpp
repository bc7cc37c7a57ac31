#pragma once

#include "uniscale/random.hpp"

namespace uniscale {

// Pareto distribution truncated to [a, b]: density proportional to
// theta^-(alpha+1) on the interval, zero outside.
//
// alpha is any nonzero real; negative alpha leans the mass toward b
// (useful as the law of a reciprocal: V ~ TruncPareto(alpha,[a,b]) implies
// y/V ~ TruncPareto(-alpha,[y/b,y/a])).  a = b is the point mass at a.
//
// All closed forms are evaluated through ln(b/a) and expm1/log1p so they
// stay accurate for b/a - 1 down to 1e-15 and |alpha| up to 1e3.
struct TruncPareto {
  double alpha;
  double a, b;

  TruncPareto(double alpha, double a, double b);

  bool point_mass() const { return a == b; }

  double pdf(double theta) const;
  double cdf(double theta) const;
  // Inverse cdf; p in [0,1], p=0 -> a, p=1 -> b.
  double quantile(double p) const;
  // Inverse-transform draw.
  double sample(RandomStream& rng) const;
  // E[Theta^m] for any real m, including the logarithmic case m = alpha.
  double moment(double m) const;
  // E[ln Theta] = ln a + 1/alpha - ln(b/a)/((b/a)^alpha - 1).
  // (The variant with 1 - (b/a)^alpha in the denominator is a sign error:
  // it fails the b -> a limit and disagrees with quadrature.)
  double log_moment() const;
};

}  // namespace uniscale
