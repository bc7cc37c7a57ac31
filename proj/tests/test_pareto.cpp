#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "uniscale/ks.hpp"
#include "uniscale/pareto.hpp"
#include "uniscale/quad.hpp"
#include "uniscale/random.hpp"

using uniscale::RandomStream;
using uniscale::TruncPareto;
using uniscale::quad::integrate;

TEST_CASE("constructor validation") {
  CHECK_NOTHROW(TruncPareto(-3.0, 0.5, 2.0));
  CHECK_THROWS_AS(TruncPareto(0.0, 1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(TruncPareto(1.0, 0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(TruncPareto(1.0, -1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(TruncPareto(1.0, 2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(TruncPareto(std::nan(""), 1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(TruncPareto(1.0, 1.0, std::numeric_limits<double>::infinity()),
                  std::domain_error);
}

TEST_CASE("density values and normalization") {
  const TruncPareto d(2.0, 1.0, 2.0);
  CHECK(d.pdf(1.0) == doctest::Approx(oracle::pdf_p2_at_1).epsilon(1e-13));
  CHECK(d.pdf(0.999) == 0.0);
  CHECK(d.pdf(2.001) == 0.0);
  for (double alpha : {-10.0, -3.0, -1.0, 1.0, 3.0, 10.0}) {
    const TruncPareto g(alpha, 0.8, 1.8);
    const auto r = integrate([&](double t) { return g.pdf(t); }, g.a, g.b, 1e-10);
    CHECK(std::abs(r.value - 1.0) < 1e-8);
  }
}

TEST_CASE("cdf closed form matches the integrated density") {
  const TruncPareto d(1.0, 1.0, 2.0);
  CHECK(d.cdf(oracle::median_p1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.cdf(1.0) == 0.0);
  CHECK(d.cdf(2.0) == 1.0);
  CHECK(d.cdf(0.5) == 0.0);
  CHECK(d.cdf(3.0) == 1.0);
  for (double alpha : {-5.0, -1.0, 2.0, 7.0}) {
    const TruncPareto g(alpha, 0.6, 2.4);
    double prev = -1.0;
    for (int i = 1; i < 20; ++i) {
      const double t = g.a + (g.b - g.a) * i / 20.0;
      const auto r = integrate([&](double x) { return g.pdf(x); }, g.a, t, 1e-11);
      CHECK(std::abs(g.cdf(t) - r.value) < 1e-9);
      CHECK(g.cdf(t) > prev);
      prev = g.cdf(t);
    }
  }
}

TEST_CASE("quantile inverts the cdf across extreme shapes") {
  const TruncPareto d(1.0, 1.0, 2.0);
  CHECK(d.quantile(0.5) == doctest::Approx(oracle::median_p1).epsilon(1e-13));
  CHECK(d.quantile(0.0) == 1.0);
  CHECK(d.quantile(1.0) == 2.0);
  CHECK_THROWS_AS(d.quantile(-0.01), std::domain_error);
  CHECK_THROWS_AS(d.quantile(1.01), std::domain_error);

  const std::vector<double> ps = {1e-9, 1e-4, 0.1, 0.5, 0.9, 1.0 - 1e-4, 1.0 - 1e-9};
  const std::vector<std::pair<double, double>> supports = {
      {0.8, 1.8}, {1.0, 1.0 + 1e-12}, {1e-6, 2e-6}, {0.1, 1.9}};
  for (double alpha : {-1000.0, -30.0, -3.0, -1.0, 1.0, 3.0, 30.0, 1000.0}) {
    for (const auto& ab : supports) {
      const TruncPareto g(alpha, ab.first, ab.second);
      // a double can pin a quantile no finer than one spacing step of the
      // support, so allow that much slack in p on near-degenerate intervals
      const double ulp_a = std::nextafter(g.a, 2.0 * g.a) - g.a;
      const double tol = 2e-9 + 4.0 * ulp_a / (g.b - g.a);
      for (double p : ps) {
        const double q = g.quantile(p);
        REQUIRE(q >= g.a);
        REQUIRE(q <= g.b);
        REQUIRE(std::abs(g.cdf(q) - p) <= tol);
      }
    }
  }
}

TEST_CASE("moments: frozen values, quadrature, continuity at m = alpha") {
  const TruncPareto d(2.0, 1.0, 2.0);
  CHECK(d.moment(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.moment(1.0) == doctest::Approx(oracle::moment_p2_m1).epsilon(1e-14));
  CHECK(d.moment(2.0) == doctest::Approx(oracle::moment_p2_m2).epsilon(1e-13));
  // the m = alpha case is a removable singularity, not a special formula:
  // values just off the diagonal agree
  CHECK(d.moment(2.0 + 1e-10) == doctest::Approx(d.moment(2.0)).epsilon(1e-9));
  CHECK(d.moment(2.0 - 1e-10) == doctest::Approx(d.moment(2.0)).epsilon(1e-9));

  for (double alpha : {-10.0, -3.0, 1.0, 3.0, 10.0}) {
    const TruncPareto g(alpha, 0.8, 1.8);
    for (double m : {-2.0, -1.0, 0.0, 1.0, 2.0, alpha}) {
      const auto r = integrate([&](double t) { return std::pow(t, m) * g.pdf(t); }, g.a, g.b,
                               1e-11);
      CHECK(std::abs(g.moment(m) - r.value) < 1e-8 * std::max(1.0, std::abs(r.value)));
    }
  }
}

TEST_CASE("log moment: frozen value, quadrature, closed-form case, b->a limit") {
  const TruncPareto d(3.0, 0.8, 1.8);
  CHECK(d.log_moment() == doctest::Approx(oracle::log_moment_p3).epsilon(1e-12));

  for (double alpha : {-10.0, -3.0, 1.0, 3.0, 10.0}) {
    const TruncPareto g(alpha, 0.8, 1.8);
    const auto r = integrate([&](double t) { return std::log(t) * g.pdf(t); }, g.a, g.b, 1e-12);
    CHECK(std::abs(g.log_moment() - r.value) < 1e-10);
  }

  // alpha = 1 on [2,6] collapses to ln 2 + 1 - (ln 3)/2
  const TruncPareto e(1.0, 2.0, 6.0);
  CHECK(e.log_moment() == doctest::Approx(oracle::log_moment_a1_2_6).epsilon(1e-14));
  CHECK(e.log_moment() ==
        doctest::Approx(std::log(2.0) + 1.0 - 0.5 * std::log(3.0)).epsilon(1e-14));

  // the sign-flipped denominator variant fails this same closed form
  const double L = std::log(3.0);
  const double flipped = std::log(2.0) + 1.0 - L / (1.0 - std::exp(L));
  CHECK(std::abs(flipped - e.log_moment()) > 0.5);

  const TruncPareto tight(5.0, 1.3, 1.3 * (1.0 + 1e-13));
  CHECK(std::abs(tight.log_moment() - std::log(1.3)) < 1e-12);
}

TEST_CASE("gentle and harsh shape parameters stay finite and consistent") {
  for (double alpha : {-1000.0, 1000.0}) {
    const TruncPareto g(alpha, 0.8, 1.8);
    CHECK(g.moment(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    const double m1 = g.moment(1.0);
    REQUIRE(std::isfinite(m1));
    REQUIRE(m1 >= g.a);
    REQUIRE(m1 <= g.b);
    REQUIRE(std::isfinite(g.log_moment()));
    CHECK(g.log_moment() == doctest::Approx(std::log(alpha > 0 ? 0.8 : 1.8)).epsilon(1e-2));
  }
  // nearly-degenerate support
  const TruncPareto t(3.0, 1.0, 1.0 + 1e-15);
  CHECK(t.moment(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.quantile(0.3) >= 1.0);
  CHECK(t.quantile(0.3) <= 1.0 + 1e-15);
}

TEST_CASE("scaling both bounds scales the distribution") {
  const TruncPareto g(3.0, 0.8, 1.8);
  const double c = 2.5e4;
  const TruncPareto gc(3.0, c * 0.8, c * 1.8);
  for (double p : {0.05, 0.3, 0.77}) {
    CHECK(gc.quantile(p) == doctest::Approx(c * g.quantile(p)).epsilon(1e-12));
  }
  CHECK(gc.moment(1.0) == doctest::Approx(c * g.moment(1.0)).epsilon(1e-12));
  CHECK(gc.log_moment() == doctest::Approx(std::log(c) + g.log_moment()).epsilon(1e-12));
}

TEST_CASE("reciprocal of a draw follows the negated shape") {
  // X ~ TP(alpha,[a,b]) implies y/X ~ TP(-alpha,[y/b,y/a])
  const double y = 1.4;
  const TruncPareto x(4.0, 0.7, 1.9);
  const TruncPareto rec(-4.0, y / 1.9, y / 0.7);
  for (double p : {0.1, 0.5, 0.9}) {
    CHECK(rec.quantile(p) == doctest::Approx(y / x.quantile(1.0 - p)).epsilon(1e-12));
  }
  CHECK(rec.moment(1.0) == doctest::Approx(y * x.moment(-1.0)).epsilon(1e-12));
}

TEST_CASE("sampling matches the analytic distribution") {
  RandomStream rng(19);
  const TruncPareto g(3.0, 0.8, 1.8);
  const int N = 100000;
  std::vector<double> u(N);
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = g.sample(rng);
    REQUIRE(x >= g.a);
    REQUIRE(x <= g.b);
    u[i] = g.cdf(x);
    sum += x;
  }
  CHECK(uniscale::ks_statistic_uniform(u) < uniscale::ks_critical_one_sample(0.01, N));
  const double se = std::sqrt((g.moment(2.0) - g.moment(1.0) * g.moment(1.0)) / N);
  CHECK(std::abs(sum / N - g.moment(1.0)) < 3.0 * se);
}

TEST_CASE("point mass support") {
  const TruncPareto p(3.0, 1.3, 1.3);
  CHECK(p.point_mass());
  CHECK(p.cdf(1.2) == 0.0);
  CHECK(p.cdf(1.3) == 1.0);
  CHECK(p.quantile(0.0) == 1.3);
  CHECK(p.quantile(0.6) == 1.3);
  CHECK(p.quantile(1.0) == 1.3);
  CHECK(p.moment(2.0) == doctest::Approx(1.69).epsilon(1e-15));
  CHECK(p.log_moment() == doctest::Approx(std::log(1.3)).epsilon(1e-15));
  RandomStream rng(3);
  CHECK(p.sample(rng) == 1.3);
}
