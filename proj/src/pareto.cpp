#include "uniscale/pareto.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uniscale {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp(x) overflows ~709.78; branch well below that.
constexpr double kBigExp = 690.0;

// em1(t) = (1 - exp(-t)) / t, continuously 1 at t = 0.  Caller keeps
// |t| <= kBigExp.  The series blend covers the removable singularity:
// next omitted term is t^4/120 (~1e-34 at the 1e-8 cutoff).
double em1(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t / 2.0 + t * t / 6.0 - t * t * t / 24.0;
  return -std::expm1(-t) / t;
}

// ln|1 - exp(-t)| for t != 0.
double log_em(double t) {
  if (std::abs(t) < 1e-8) return std::log(std::abs(t) * em1(t));
  if (t > 0.0) return std::log(-std::expm1(-t));
  return -t + std::log(-std::expm1(t));
}

// ln em1(t); em1 is positive everywhere.
double log_em1(double t) {
  if (std::abs(t) < 1e-8) return std::log(em1(t));
  return log_em(t) - std::log(std::abs(t));
}

// em1(t1) / em1(t0), stable for any magnitudes.
double em1_ratio(double t1, double t0) {
  if (t1 > -kBigExp && t0 > -kBigExp) return em1(t1) / em1(t0);
  if (t1 < 0.0 && t0 < 0.0) {
    // (1-e^{-t})/t = e^{-t}(e^{t}-1)/t; the e^{-t} factors combine to
    // exp(t0 - t1), which is moderate whenever t1 - t0 is.
    return (t0 / t1) * std::exp(t0 - t1) * (-std::expm1(t1)) / (-std::expm1(t0));
  }
  return std::exp(log_em1(t1) - log_em1(t0));
}

}  // namespace

TruncPareto::TruncPareto(double alpha_, double a_, double b_) : alpha(alpha_), a(a_), b(b_) {
  if (!std::isfinite(alpha) || alpha == 0.0)
    throw std::domain_error("TruncPareto: alpha must be finite and nonzero");
  if (!std::isfinite(a) || !std::isfinite(b) || !(a > 0.0) || !(b >= a))
    throw std::domain_error("TruncPareto: need 0 < a <= b, got a=" + std::to_string(a_) +
                            " b=" + std::to_string(b_));
}

double TruncPareto::pdf(double theta) const {
  if (point_mass()) return theta == a ? kInf : 0.0;
  if (theta < a || theta > b) return 0.0;
  const double L = std::log1p((b - a) / a);
  const double lr = std::log1p((theta - a) / a);
  return std::exp(std::log(std::abs(alpha)) - log_em(alpha * L) - alpha * lr - std::log(theta));
}

double TruncPareto::cdf(double theta) const {
  if (theta < a) return 0.0;
  if (theta >= b) return 1.0;
  if (point_mass()) return 1.0;  // theta == a == b
  const double L = std::log1p((b - a) / a);
  const double lr = std::log1p((theta - a) / a);
  if (lr == 0.0) return 0.0;
  const double f = (lr / L) * em1_ratio(alpha * lr, alpha * L);
  return std::min(1.0, std::max(0.0, f));
}

double TruncPareto::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("TruncPareto::quantile: p must lie in [0, 1]");
  if (p == 0.0) return a;
  if (p == 1.0 || point_mass()) return b;
  const double L = std::log1p((b - a) / a);
  const double tb = alpha * L;
  double g;  // ln(1 - p(1 - e^{-tb}))
  if (std::abs(tb) <= kBigExp) {
    g = std::log1p(p * std::expm1(-tb));
  } else if (tb > kBigExp) {
    g = std::log1p(-p);  // upper truncation no longer matters
  } else {
    // tb large negative: 1 - p + p e^{-tb}; factor out the huge term.
    g = -tb + std::log(p + (1.0 - p) * std::exp(tb));
  }
  const double theta = a * std::exp(-g / alpha);
  return std::min(b, std::max(a, theta));
}

double TruncPareto::sample(RandomStream& rng) const { return quantile(rng.uniform01()); }

double TruncPareto::moment(double m) const {
  if (point_mass()) return std::pow(a, m);
  const double L = std::log1p((b - a) / a);
  const double t1 = (alpha - m) * L;
  const double t0 = alpha * L;
  return std::pow(a, m) * em1_ratio(t1, t0);
}

double TruncPareto::log_moment() const {
  if (point_mass()) return std::log(a);
  const double L = std::log1p((b - a) / a);
  const double tb = alpha * L;
  if (std::abs(tb) < 1e-4) {
    // 1/alpha - L/(e^tb - 1) = L(1/2 - tb/12 + tb^3/720 - ...)
    return std::log(a) + L * (0.5 - tb / 12.0 + tb * tb * tb / 720.0);
  }
  if (tb > kBigExp) return std::log(a) + 1.0 / alpha;
  if (tb < -kBigExp) return std::log(a) + 1.0 / alpha + L;
  return std::log(a) + 1.0 / alpha - L / std::expm1(tb);
}

}  // namespace uniscale
