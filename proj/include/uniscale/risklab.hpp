#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "uniscale/estimators.hpp"
#include "uniscale/fiducial.hpp"
#include "uniscale/model.hpp"
#include "uniscale/quad.hpp"

namespace uniscale {

enum class RiskMethod { mc, quad };

const char* method_name(RiskMethod m);

struct RiskReport {
  std::string estimator;
  int n;
  double k;
  double theta;
  LossKind loss;
  RiskMethod method;
  double value;
  double dispersion;   // MC standard error, or quadrature error bound
  std::uint64_t reps;  // 0 for quadrature
  std::uint64_t seed;  // 0 for quadrature
};

struct CoverageReport {
  double gamma;  // nominal miss probability; target coverage is 1-gamma
  double theta;
  int n;
  double k;
  std::uint64_t reps;
  std::uint64_t hits;
  double coverage;
  double stderr_;  // binomial, sqrt(gamma(1-gamma)/reps)
  std::uint64_t seed;
};

struct ExperimentGrid {
  std::vector<Design> designs;
  std::vector<double> thetas = {1.0};
  std::vector<LossKind> losses = {LossKind::squared};
  std::vector<std::string> estimators;  // catalog names / bayes:<p>
  std::uint64_t reps = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
};

// n in {2,3,5,10,30} crossed with k in {0.1,0.3,0.5,0.7,0.9}.
std::vector<Design> default_design_grid();

// Expectation of f(suff_stat) at theta = 1, by adaptive quadrature over the
// joint law of (y_min, y_max).  Returns value and an error bound.
quad::Result quad_expect(const Design& d, const std::function<double(const SuffStat&)>& f,
                         double abs_tol);

// Monte Carlo risk at theta: mean of loss(theta, rule(S)) over reps samples.
// Deterministic in (seed, reps) for any worker count: work is split into
// fixed blocks with per-block substreams and the partial sums are combined
// pairwise in block order.  reps >= 1000; dirac loss is rejected.
RiskReport mc_risk(const Estimator& est, double theta, const Design& d, LossKind loss,
                   std::uint64_t reps, std::uint64_t seed, int workers = 1);

// Exact risk via quadrature, computed at theta = 1 and carried to other
// theta by the loss's exact scaling law.
RiskReport quad_risk(const Estimator& est, const Design& d, LossKind loss,
                     double theta = 1.0, double abs_tol = 1e-8);

// Multiplier taking a theta = 1 risk to theta: theta^2 for squared, theta
// for weighted, 1 for scaled_squared and log_squared.
double risk_theta_scale(LossKind loss, double theta);

double quad_mean(const Estimator& est, const Design& d, double abs_tol = 1e-10);
double quad_bias(const Estimator& est, const Design& d, double abs_tol = 1e-10);
double quad_variance(const Estimator& est, const Design& d, double abs_tol = 1e-10);

struct DominancePair {
  std::string a, b;
  double diff;        // risk(a) - risk(b)
  double scale;       // 3*se of the diff (mc) or summed error bounds (quad)
  bool significant;   // |diff| > scale
};

struct DominanceCell {
  Design design;
  double theta;
  LossKind loss;
  std::vector<RiskReport> risks;
  std::vector<DominancePair> pairs;  // all unordered pairs, catalog order
};

struct DominanceTable {
  std::vector<DominanceCell> cells;
};

// Risks and pairwise comparisons over the grid.  MC uses common random
// numbers (one sample stream per cell, every estimator sees the same draws)
// so paired differences are tight; quadrature pairs compare error bounds.
DominanceTable dominance_table(const ExperimentGrid& grid, RiskMethod method);

// Empirical coverage of the equal-tailed 1-gamma interval; same block
// determinism as mc_risk.
CoverageReport coverage(double gamma, double theta, const Design& d, std::uint64_t reps,
                        std::uint64_t seed, int workers = 1);

struct EquivarianceReport {
  int trials;
  double max_rel_dev;
  double tol;
  bool pass;
};

// Checks rule(c*y) = c*rule(y) over random designs, samples, and scale
// factors c in [1e-6, 1e6].
EquivarianceReport equivariance_audit(const Estimator& est, int trials, std::uint64_t seed,
                                      double tol = 1e-12);

}  // namespace uniscale
