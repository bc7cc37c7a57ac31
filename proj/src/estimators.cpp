#include "uniscale/estimators.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "uniscale/pareto.hpp"

namespace uniscale {
namespace {

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

double mle(const SuffStat& s) { return s.theta_ml; }

double rao_blackwell(const SuffStat& s) { return 0.5 * (s.y_min + s.y_max); }

double linear_unbiased(const SuffStat& s) {
  const double k = s.design.k;
  const double n = s.design.n;
  const double d = 1.0 + k * k * (n - 1.0) / (n + 1.0);
  return 0.5 * ((1.0 - k) * s.y_min + (1.0 + k) * s.y_max) / d;
}

double bayes_p(const SuffStat& s, double p) {
  const double alpha = s.design.n + p - 1.0;
  if (alpha == 0.0)
    throw std::domain_error("bayes_p: p = 1-n makes alpha = 0 and the posterior normalizer vanish");
  if (s.b_star == 1.0) return s.theta_ml;
  return TruncPareto(alpha, s.theta_ml, s.theta_mu).moment(1.0);
}

double gm(const SuffStat& s) { return bayes_p(s, 2.0); }

double opt(const SuffStat& s) {
  if (s.b_star == 1.0) return s.theta_ml;
  const TruncPareto fid(s.design.n, s.theta_ml, s.theta_mu);
  return fid.moment(-1.0) / fid.moment(-2.0);
}

double sc(const SuffStat& s) {
  if (s.b_star == 1.0) return s.theta_ml;
  return std::exp(TruncPareto(s.design.n, s.theta_ml, s.theta_mu).log_moment());
}

double unbias_factor(double s2, const Design& d) {
  if (!(s2 > 0.0) || s2 > 1.0)
    throw std::domain_error("unbias_factor: s2 must lie in [(1-k)/(1+k), 1]");
  double lo = (1.0 - d.k) / s2;
  const double hi = 1.0 + d.k;
  if (lo > hi) {
    if (lo <= hi * (1.0 + 1e-12)) {
      lo = hi;  // boundary case s2 = (1-k)/(1+k) up to rounding
    } else {
      throw std::domain_error("unbias_factor: s2 below (1-k)/(1+k) is outside the ancillary's range");
    }
  }
  return 1.0 / TruncPareto(-d.n, lo, hi).moment(1.0);
}

std::vector<Estimator> catalog() {
  return {
      {"mle", [](const SuffStat& s) { return mle(s); }, true},
      {"rao_blackwell", [](const SuffStat& s) { return rao_blackwell(s); }, true},
      {"linear_unbiased", [](const SuffStat& s) { return linear_unbiased(s); }, false},
      {"gm", [](const SuffStat& s) { return gm(s); }, true},
      {"opt", [](const SuffStat& s) { return opt(s); }, true},
      {"sc", [](const SuffStat& s) { return sc(s); }, true},
      {"map", [](const SuffStat& s) { return mle(s); }, true},
  };
}

std::vector<Estimator> catalog(const std::vector<double>& bayes_ps) {
  auto out = catalog();
  for (double p : bayes_ps) {
    std::string name = "bayes:" + shortest(p);
    out.push_back({std::move(name), [p](const SuffStat& s) { return bayes_p(s, p); }, true});
  }
  return out;
}

Estimator resolve_estimator(const std::string& name) {
  for (auto& e : catalog())
    if (e.name == name) return e;
  if (name.rfind("bayes:", 0) == 0) {
    const std::string arg = name.substr(6);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty())
      throw std::domain_error("estimator '" + name + "': expected bayes:<number>");
    return {name, [p](const SuffStat& s) { return bayes_p(s, p); }, true};
  }
  throw std::domain_error(
      "unknown estimator '" + name +
      "'; valid: mle, rao_blackwell, linear_unbiased, gm, opt, sc, map, bayes:<p>");
}

}  // namespace uniscale
