#pragma once

#include <functional>
#include <string>
#include <vector>

#include "uniscale/model.hpp"

namespace uniscale {

// Point estimators of theta.  All are scale equivariant: rule(c*y) = c*rule(y).

// y_max / (1+k); maximizes the likelihood but is biased low.
double mle(const SuffStat& s);

// Midrange (y_min + y_max)/2; unbiased and always inside the sure interval.
double rao_blackwell(const SuffStat& s);

// Best unbiased linear combination c-*y_min + c+*y_max with
// c+- = 0.5(1 +- k) / (1 + k^2 (n-1)/(n+1)); can leave the sure interval.
double linear_unbiased(const SuffStat& s);

// Mean of the TruncPareto(n+p-1, [theta_ml, theta_mu]) posterior; p = n-1
// degrees of a power prior.  alpha = n+p-1 = 0 is rejected.
double bayes_p(const SuffStat& s, double p);

// bayes_p with p = 2; unbiased.  Also 1/E[1/Theta] under the fiducial law.
double gm(const SuffStat& s);

// E[1/Theta] / E[1/Theta^2] under the fiducial law (= bayes_p with p = 3);
// minimizes E(1 - est/theta)^2 among equivariant rules.
double opt(const SuffStat& s);

// Geometric center exp(E[ln Theta]) under the fiducial law; minimizes
// E(ln est - ln theta)^2.
double sc(const SuffStat& s);

// phi(s2) with phi(s2) * y_max unbiased: the reciprocal of the conditional
// mean of y_max/theta given the ratio s2.  Equals gm(s)/y_max.
double unbias_factor(double s2, const Design& d);

struct Estimator {
  std::string name;  // CLI identifier
  std::function<double(const SuffStat&)> rule;
  bool feasible_by_construction;  // estimate always lands in the sure interval
};

// The seven named rules: mle, rao_blackwell, linear_unbiased, gm, opt, sc,
// map (= mle, the argmax of the fiducial density).
std::vector<Estimator> catalog();
// Same plus one "bayes:<p>" entry per requested p.
std::vector<Estimator> catalog(const std::vector<double>& bayes_ps);
// Look up a catalog name or parse "bayes:<p>"; throws with the list of valid
// names otherwise.
Estimator resolve_estimator(const std::string& name);

}  // namespace uniscale
