#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "uniscale/estimators.hpp"
#include "uniscale/fiducial.hpp"
#include "uniscale/ks.hpp"
#include "uniscale/model.hpp"
#include "uniscale/quad.hpp"
#include "uniscale/random.hpp"

using namespace uniscale;

namespace {
SuffStat worked_sample() { return suff_stat({Design(0.5, 3), {0.9, 1.2, 1.0}}); }

// Expected loss under the fiducial density as a function of the estimate:
// every loss in the catalog is a two-term expansion in fixed moments of the
// density, so integrate those moments once (numerically, straight from the
// pdf) and the grid search below is then free of quadrature noise.
struct LossCurve {
  std::function<double(double)> value;
};

LossCurve loss_curve(const SuffStat& s, LossKind loss) {
  const auto fid = fiducial_dist(s);
  auto mom = [&](auto&& g) {
    return quad::integrate([&](double t) { return g(t) * fid.dist.pdf(t); }, fid.dist.a,
                           fid.dist.b, 1e-13)
        .value;
  };
  switch (loss) {
    case LossKind::squared: {
      const double m1 = mom([](double t) { return t; });
      return {[m1](double e) { return e * e - 2.0 * e * m1; }};
    }
    case LossKind::weighted: {
      const double r1 = mom([](double t) { return 1.0 / t; });
      return {[r1](double e) { return e * e * r1 - 2.0 * e; }};
    }
    case LossKind::scaled_squared: {
      const double r1 = mom([](double t) { return 1.0 / t; });
      const double r2 = mom([](double t) { return 1.0 / (t * t); });
      return {[r1, r2](double e) { return e * e * r2 - 2.0 * e * r1; }};
    }
    case LossKind::log_squared: {
      const double l1 = mom([](double t) { return std::log(t); });
      return {[l1](double e) { return std::log(e) * (std::log(e) - 2.0 * l1); }};
    }
    default:
      throw std::domain_error("no pointwise curve for this loss");
  }
}

// three rounds of grid refinement; final spacing well under 1e-6
double grid_argmin(const SuffStat& s, LossKind loss) {
  const auto fid = fiducial_dist(s);
  const auto curve = loss_curve(s, loss);
  double lo = fid.dist.a, hi = fid.dist.b;
  double best = lo;
  for (int round = 0; round < 3; ++round) {
    const int N = 2000;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= N; ++i) {
      const double t = lo + (hi - lo) * i / N;
      const double v = curve.value(t);
      if (v < best_val) {
        best_val = v;
        best = t;
      }
    }
    const double step = (hi - lo) / N;
    lo = std::max(fid.dist.a, best - 2.0 * step);
    hi = std::min(fid.dist.b, best + 2.0 * step);
  }
  return best;
}
}  // namespace

TEST_CASE("fiducial distribution is the inverse-power law on the sure interval") {
  const SuffStat s = worked_sample();
  const auto fid = fiducial_dist(s);
  CHECK(fid.dist.alpha == 3.0);
  CHECK(fid.dist.a == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(fid.dist.b == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(fid.dist.quantile(0.5) == doctest::Approx(oracle::median_p3).epsilon(1e-12));
  CHECK(fid.dist.moment(1.0) == doctest::Approx(oracle::fid_mean_example).epsilon(1e-12));
  CHECK(fid.dist.moment(1.0) == doctest::Approx(bayes_p(s, 1.0)).epsilon(1e-15));
  CHECK(fid.dist.moment(-1.0) == doctest::Approx(oracle::inv_moment_p3).epsilon(1e-12));
  CHECK(fid.dist.moment(-2.0) == doctest::Approx(oracle::inv2_moment_p3).epsilon(1e-12));
}

TEST_CASE("sampling through the conditional pilot matches direct inversion") {
  RandomStream rng(31);
  const SuffStat s = worked_sample();
  const auto fid = fiducial_dist(s);
  const std::size_t N = 30000;
  std::vector<double> direct(N), conditional(N);
  for (auto& v : direct) v = fid.dist.sample(rng);
  for (auto& v : conditional) {
    v = fiducial_sample_via_conditioning(s, rng);
    REQUIRE(v >= s.theta_ml - 1e-12);
    REQUIRE(v <= s.theta_mu + 1e-12);
  }
  CHECK(ks_statistic_two_sample(direct, conditional) < ks_critical_two_sample(0.01, N, N));
}

TEST_CASE("maximal spread gives a point-mass fiducial distribution") {
  const SuffStat s = suff_stat_from_extremes(0.5, 1.5, Design(0.5, 2));
  const auto fid = fiducial_dist(s);
  CHECK(fid.dist.point_mass());
  RandomStream rng(4);
  CHECK(fiducial_sample_via_conditioning(s, rng) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("interval shapes and the gamma = 0 limit") {
  const SuffStat s = worked_sample();
  const auto fid = fiducial_dist(s);

  const auto et = confidence_interval(s, 0.1, IntervalShape::equal_tailed);
  CHECK(et.lo == doctest::Approx(fid.dist.quantile(0.05)).epsilon(1e-15));
  CHECK(et.hi == doctest::Approx(fid.dist.quantile(0.95)).epsilon(1e-15));

  const auto hd = confidence_interval(s, 0.1, IntervalShape::highest_density);
  CHECK(hd.lo == s.theta_ml);
  CHECK(hd.hi == doctest::Approx(fid.dist.quantile(0.9)).epsilon(1e-15));
  // the density decreases, so anchoring at theta_ml gives the shorter interval
  CHECK(hd.hi - hd.lo < et.hi - et.lo);

  const auto sure = confidence_interval(s, 0.0);
  CHECK(sure.lo == doctest::Approx(s.theta_ml));
  CHECK(sure.hi == doctest::Approx(s.theta_mu));

  CHECK_THROWS_AS(confidence_interval(s, 1.0), std::domain_error);
  CHECK_THROWS_AS(confidence_interval(s, -0.1), std::domain_error);
}

TEST_CASE("pointwise summaries minimize their losses") {
  const SuffStat s = worked_sample();
  CHECK(point_estimate(s, LossKind::dirac) == doctest::Approx(mle(s)));
  CHECK(point_estimate(s, LossKind::squared) == doctest::Approx(bayes_p(s, 1.0)));
  CHECK(point_estimate(s, LossKind::weighted) == doctest::Approx(gm(s)));
  CHECK(point_estimate(s, LossKind::scaled_squared) == doctest::Approx(opt(s)));
  CHECK(point_estimate(s, LossKind::log_squared) == doctest::Approx(sc(s)));

  for (LossKind loss : {LossKind::squared, LossKind::weighted, LossKind::scaled_squared,
                        LossKind::log_squared}) {
    const double am = grid_argmin(s, loss);
    CHECK(std::abs(am - point_estimate(s, loss)) < 1e-6);
  }
  // the dirac summary tracks the density peak, which sits at the left edge
  const auto fid = fiducial_dist(s);
  CHECK(fid.dist.pdf(s.theta_ml) > fid.dist.pdf(1.0));
  CHECK(fid.dist.pdf(1.0) > fid.dist.pdf(s.theta_mu));
}

TEST_CASE("loss plumbing") {
  CHECK(loss_value(LossKind::squared, 2.0, 3.0) == doctest::Approx(1.0));
  CHECK(loss_value(LossKind::weighted, 2.0, 3.0) == doctest::Approx(0.5));
  CHECK(loss_value(LossKind::scaled_squared, 2.0, 3.0) == doctest::Approx(0.25));
  CHECK(loss_value(LossKind::log_squared, 2.0, 3.0) ==
        doctest::Approx(std::pow(std::log(1.5), 2)));
  CHECK_THROWS_AS(loss_value(LossKind::dirac, 2.0, 3.0), std::domain_error);
  CHECK(loss_from_name("scaled_squared") == LossKind::scaled_squared);
  CHECK(std::string(loss_name(LossKind::weighted)) == "weighted");
  CHECK_THROWS_AS(loss_from_name("nope"), std::domain_error);
}

TEST_CASE("plugging the true scale into the fiducial cdf gives a uniform p-value") {
  RandomStream rng(47);
  const Design d(0.5, 3);
  const double theta = 2.7;
  const int N = 10000;
  std::vector<double> u(N);
  for (int i = 0; i < N; ++i) {
    const SuffStat s = suff_stat(sample_scaled_uniform(theta, d, rng));
    u[i] = fiducial_dist(s).dist.cdf(theta);
  }
  CHECK(ks_statistic_uniform(u) < ks_critical_one_sample(0.01, N));
}

TEST_CASE("fiducial quantiles are scale equivariant") {
  const SuffStat s = worked_sample();
  const SuffStat s2 = suff_stat_from_extremes(100.0 * s.y_min, 100.0 * s.y_max, s.design);
  for (double p : {0.1, 0.5, 0.9}) {
    CHECK(fiducial_dist(s2).dist.quantile(p) ==
          doctest::Approx(100.0 * fiducial_dist(s).dist.quantile(p)).epsilon(1e-12));
  }
}
