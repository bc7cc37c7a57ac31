#include "uniscale/fiducial.hpp"

#include <cmath>
#include <stdexcept>

#include "uniscale/estimators.hpp"

namespace uniscale {

const char* loss_name(LossKind loss) {
  switch (loss) {
    case LossKind::dirac: return "dirac";
    case LossKind::squared: return "squared";
    case LossKind::weighted: return "weighted";
    case LossKind::scaled_squared: return "scaled_squared";
    case LossKind::log_squared: return "log_squared";
  }
  throw std::logic_error("loss_name: bad enum");
}

LossKind loss_from_name(const std::string& name) {
  if (name == "dirac") return LossKind::dirac;
  if (name == "squared") return LossKind::squared;
  if (name == "weighted") return LossKind::weighted;
  if (name == "scaled_squared") return LossKind::scaled_squared;
  if (name == "log_squared") return LossKind::log_squared;
  throw std::domain_error("unknown loss '" + name +
                          "'; valid: dirac, squared, weighted, scaled_squared, log_squared");
}

double loss_value(LossKind loss, double theta, double est) {
  switch (loss) {
    case LossKind::dirac:
      throw std::domain_error("loss_value: dirac loss has no pointwise value");
    case LossKind::squared: {
      const double d = est - theta;
      return d * d;
    }
    case LossKind::weighted: {
      const double d = est - theta;
      return d * d / theta;
    }
    case LossKind::scaled_squared: {
      const double d = 1.0 - est / theta;
      return d * d;
    }
    case LossKind::log_squared: {
      const double d = std::log(est) - std::log(theta);
      return d * d;
    }
  }
  throw std::logic_error("loss_value: bad enum");
}

FiducialDist fiducial_dist(const SuffStat& s) {
  return {TruncPareto(static_cast<double>(s.design.n), s.theta_ml, s.theta_mu), s};
}

double fiducial_sample_via_conditioning(const SuffStat& s, RandomStream& rng) {
  const double hi = 1.0 + s.design.k;
  double lo = (1.0 - s.design.k) / s.s2;
  if (lo > hi) lo = hi;  // b_star = 1 up to rounding: conditional law degenerates
  const double v = TruncPareto(-static_cast<double>(s.design.n), lo, hi).sample(rng);
  return s.y_max / v;
}

Interval confidence_interval(const SuffStat& s, double gamma, IntervalShape shape) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::domain_error("confidence_interval: gamma must lie in [0, 1)");
  const FiducialDist f = fiducial_dist(s);
  if (shape == IntervalShape::highest_density)
    return {s.theta_ml, f.dist.quantile(1.0 - gamma)};
  return {f.dist.quantile(gamma / 2.0), f.dist.quantile(1.0 - gamma / 2.0)};
}

double point_estimate(const SuffStat& s, LossKind loss) {
  switch (loss) {
    case LossKind::dirac: return mle(s);  // density argmax
    case LossKind::squared: return bayes_p(s, 1.0);
    case LossKind::weighted: return gm(s);
    case LossKind::scaled_squared: return opt(s);
    case LossKind::log_squared: return sc(s);
  }
  throw std::logic_error("point_estimate: bad enum");
}

}  // namespace uniscale
