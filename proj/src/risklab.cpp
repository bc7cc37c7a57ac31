#include "uniscale/risklab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace uniscale {
namespace {

// Fixed MC block size: the unit of work handed to workers.  Results are a
// pure function of (seed, reps) because block b always uses substream
// (seed, b) and partial results merge pairwise in block order.
constexpr std::uint64_t kBlock = 8192;

template <class Acc, class AddFn>
std::vector<Acc> run_blocks(const Design& d, double theta, std::uint64_t reps,
                            std::uint64_t seed, int workers, const Acc& proto, AddFn add) {
  const std::uint64_t nblocks = (reps + kBlock - 1) / kBlock;
  std::vector<Acc> acc(nblocks, proto);
  auto do_block = [&](std::uint64_t bi) {
    RandomStream rs = RandomStream::substream(seed, bi);
    const std::uint64_t lo = bi * kBlock;
    const std::uint64_t hi = std::min(reps, lo + kBlock);
    Acc a = proto;
    for (std::uint64_t r = lo; r < hi; ++r) {
      double y_min = std::numeric_limits<double>::infinity();
      double y_max = -y_min;
      for (int i = 0; i < d.n; ++i) {
        const double y = theta * (1.0 - d.k + 2.0 * d.k * rs.uniform01());
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
      add(a, suff_stat_from_extremes(y_min, y_max, d));
    }
    acc[bi] = std::move(a);
  };
  const int nworkers = static_cast<int>(
      std::min<std::uint64_t>(nblocks, static_cast<std::uint64_t>(std::max(1, workers))));
  if (nworkers <= 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) do_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) do_block(b);
      });
    for (auto& t : pool) t.join();
  }
  return acc;
}

// Fixed-order pairwise tree over block results; associative merges only.
template <class Acc, class MergeFn>
Acc pairwise_merge(const std::vector<Acc>& v, std::size_t lo, std::size_t hi, MergeFn merge) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  Acc left = pairwise_merge(v, lo, mid, merge);
  const Acc right = pairwise_merge(v, mid, hi, merge);
  merge(left, right);
  return left;
}

void require_mc_preconditions(std::uint64_t reps, LossKind loss, double theta) {
  if (reps < 1000) throw std::domain_error("monte carlo: reps must be >= 1000");
  if (loss == LossKind::dirac)
    throw std::domain_error("monte carlo: dirac loss has no estimable risk");
  if (!(theta > 0.0)) throw std::domain_error("monte carlo: theta must be > 0");
}

struct MeanVarAcc {
  double sum = 0.0, sumsq = 0.0;
};

}  // namespace

const char* method_name(RiskMethod m) { return m == RiskMethod::mc ? "mc" : "quad"; }

std::vector<Design> default_design_grid() {
  std::vector<Design> out;
  for (int n : {2, 3, 5, 10, 30})
    for (double k : {0.1, 0.3, 0.5, 0.7, 0.9}) out.emplace_back(k, n);
  return out;
}

quad::Result quad_expect(const Design& d, const std::function<double(const SuffStat&)>& f,
                         double abs_tol) {
  const double k = d.k, lo = 1.0 - k, hi = 1.0 + k;
  if (d.n == 1) {
    return quad::integrate(
        [&](double x) { return f(suff_stat_from_extremes(lo + 2.0 * k * x, lo + 2.0 * k * x, d)); },
        0.0, 1.0, abs_tol);
  }
  // Map the triangle 1-k <= u1 <= un <= 1+k onto the unit square:
  // u1 = 1-k + 2k s q, un = 1+k - 2k s (1-q); the (min,max) density becomes
  // the weight w(s) = n(n-1) s (1-s)^(n-2), with integral exactly 1.
  const double n = d.n;
  const double w0 = n * (n - 1.0);
  double inner_err = 0.0;  // bound on the integral's error from inner panels
  std::size_t inner_evals = 0;
  const double half_tol = 0.5 * abs_tol;
  auto outer = [&](double s) {
    const double w = w0 * s * std::pow(1.0 - s, d.n - 2);
    if (w == 0.0) return 0.0;
    auto inner = [&](double q) {
      const double u1 = lo + 2.0 * k * s * q;
      const double un = hi - 2.0 * k * s * (1.0 - q);
      return f(suff_stat_from_extremes(u1, un, d));
    };
    // Inner tolerance half_tol/max(w,1) keeps the weighted inner error
    // integral below half_tol since w/max(w,1) integrates to <= 1.
    const auto r = quad::integrate(inner, 0.0, 1.0, half_tol / std::max(w, 1.0));
    inner_err = std::max(inner_err, r.error * std::max(w, 1.0));
    inner_evals += r.evals;
    return w * r.value;
  };
  auto ro = quad::integrate(outer, 0.0, 1.0, half_tol);
  return {ro.value, ro.error + inner_err, ro.evals + inner_evals};
}

double risk_theta_scale(LossKind loss, double theta) {
  switch (loss) {
    case LossKind::squared: return theta * theta;
    case LossKind::weighted: return theta;
    case LossKind::scaled_squared:
    case LossKind::log_squared: return 1.0;
    case LossKind::dirac: break;
  }
  throw std::domain_error("risk_theta_scale: dirac loss has no risk scaling");
}

RiskReport mc_risk(const Estimator& est, double theta, const Design& d, LossKind loss,
                   std::uint64_t reps, std::uint64_t seed, int workers) {
  require_mc_preconditions(reps, loss, theta);
  auto blocks = run_blocks(
      d, theta, reps, seed, workers, MeanVarAcc{},
      [&](MeanVarAcc& a, const SuffStat& s) {
        const double l = loss_value(loss, theta, est.rule(s));
        a.sum += l;
        a.sumsq += l * l;
      });
  const MeanVarAcc tot = pairwise_merge(blocks, 0, blocks.size(), [](MeanVarAcc& a, const MeanVarAcc& b) {
    a.sum += b.sum;
    a.sumsq += b.sumsq;
  });
  const double r = static_cast<double>(reps);
  const double mean = tot.sum / r;
  const double var = std::max(0.0, tot.sumsq / r - mean * mean);
  return {est.name, d.n, d.k,  theta, loss, RiskMethod::mc,
          mean,     std::sqrt(var / r), reps, seed};
}

RiskReport quad_risk(const Estimator& est, const Design& d, LossKind loss, double theta,
                     double abs_tol) {
  if (loss == LossKind::dirac)
    throw std::domain_error("quad_risk: dirac loss has no finite risk integral");
  if (!(theta > 0.0)) throw std::domain_error("quad_risk: theta must be > 0");
  const auto r = quad_expect(
      d, [&](const SuffStat& s) { return loss_value(loss, 1.0, est.rule(s)); }, abs_tol);
  const double sc = risk_theta_scale(loss, theta);
  return {est.name, d.n, d.k, theta, loss, RiskMethod::quad, r.value * sc, r.error * sc, 0, 0};
}

double quad_mean(const Estimator& est, const Design& d, double abs_tol) {
  return quad_expect(d, [&](const SuffStat& s) { return est.rule(s); }, abs_tol).value;
}

double quad_bias(const Estimator& est, const Design& d, double abs_tol) {
  return quad_mean(est, d, abs_tol) - 1.0;
}

double quad_variance(const Estimator& est, const Design& d, double abs_tol) {
  const double m = quad_mean(est, d, abs_tol);
  return quad_expect(
             d, [&](const SuffStat& s) { const double dv = est.rule(s) - m; return dv * dv; },
             abs_tol)
      .value;
}

namespace {

struct CrnAcc {
  std::vector<double> sum, sumsq;    // per estimator
  std::vector<double> dsum, dsumsq;  // per unordered pair (i<j), flattened
};

DominanceCell mc_cell(const std::vector<Estimator>& ests, const Design& d, double theta,
                      LossKind loss, std::uint64_t reps, std::uint64_t seed) {
  require_mc_preconditions(reps, loss, theta);
  const std::size_t m = ests.size();
  const std::size_t npairs = m * (m - 1) / 2;
  CrnAcc proto;
  proto.sum.assign(m, 0.0);
  proto.sumsq.assign(m, 0.0);
  proto.dsum.assign(npairs, 0.0);
  proto.dsumsq.assign(npairs, 0.0);
  // Blocks run serially here (workers=1): cells parallelize one level up,
  // and vals is a shared scratch buffer.
  std::vector<double> vals(m);
  auto blocks = run_blocks(d, theta, reps, seed, 1, proto, [&](CrnAcc& a, const SuffStat& s) {
    for (std::size_t i = 0; i < m; ++i) {
      const double l = loss_value(loss, theta, ests[i].rule(s));
      vals[i] = l;
      a.sum[i] += l;
      a.sumsq[i] += l * l;
    }
    std::size_t p = 0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j, ++p) {
        const double dl = vals[i] - vals[j];
        a.dsum[p] += dl;
        a.dsumsq[p] += dl * dl;
      }
  });
  CrnAcc tot = pairwise_merge(blocks, 0, blocks.size(), [](CrnAcc& a, const CrnAcc& b) {
    for (std::size_t i = 0; i < a.sum.size(); ++i) {
      a.sum[i] += b.sum[i];
      a.sumsq[i] += b.sumsq[i];
    }
    for (std::size_t i = 0; i < a.dsum.size(); ++i) {
      a.dsum[i] += b.dsum[i];
      a.dsumsq[i] += b.dsumsq[i];
    }
  });
  const double r = static_cast<double>(reps);
  DominanceCell cell{d, theta, loss, {}, {}};
  for (std::size_t i = 0; i < m; ++i) {
    const double mean = tot.sum[i] / r;
    const double var = std::max(0.0, tot.sumsq[i] / r - mean * mean);
    cell.risks.push_back({ests[i].name, d.n, d.k, theta, loss, RiskMethod::mc, mean,
                          std::sqrt(var / r), reps, seed});
  }
  std::size_t p = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j, ++p) {
      const double mean = tot.dsum[p] / r;
      const double var = std::max(0.0, tot.dsumsq[p] / r - mean * mean);
      const double scale = 3.0 * std::sqrt(var / r);
      cell.pairs.push_back({ests[i].name, ests[j].name, mean, scale, std::abs(mean) > scale});
    }
  return cell;
}

DominanceCell quad_cell(const std::vector<Estimator>& ests, const Design& d, double theta,
                        LossKind loss) {
  DominanceCell cell{d, theta, loss, {}, {}};
  for (const auto& e : ests) cell.risks.push_back(quad_risk(e, d, loss, theta, 1e-10));
  for (std::size_t i = 0; i < ests.size(); ++i)
    for (std::size_t j = i + 1; j < ests.size(); ++j) {
      const auto& a = cell.risks[i];
      const auto& b = cell.risks[j];
      const double diff = a.value - b.value;
      const double scale = a.dispersion + b.dispersion;
      cell.pairs.push_back({a.estimator, b.estimator, diff, scale, std::abs(diff) > scale});
    }
  return cell;
}

}  // namespace

DominanceTable dominance_table(const ExperimentGrid& grid, RiskMethod method) {
  std::vector<Estimator> ests;
  if (grid.estimators.empty()) {
    ests = catalog();
  } else {
    for (const auto& name : grid.estimators) ests.push_back(resolve_estimator(name));
  }
  struct CellSpec {
    Design d;
    double theta;
    LossKind loss;
  };
  std::vector<CellSpec> specs;
  for (const auto& d : grid.designs)
    for (double theta : grid.thetas)
      for (LossKind loss : grid.losses) specs.push_back({d, theta, loss});
  DominanceTable table;
  table.cells.resize(specs.size(), DominanceCell{Design(0.5, 1), 1.0, LossKind::squared, {}, {}});
  auto do_cell = [&](std::size_t i) {
    const auto& sp = specs[i];
    table.cells[i] = method == RiskMethod::mc
                         ? mc_cell(ests, sp.d, sp.theta, sp.loss, grid.reps, grid.seed)
                         : quad_cell(ests, sp.d, sp.theta, sp.loss);
  };
  const int nworkers = static_cast<int>(std::min<std::size_t>(
      specs.size(), static_cast<std::size_t>(std::max(1, grid.workers))));
  if (nworkers <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) do_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1)) do_cell(i);
      });
    for (auto& t : pool) t.join();
  }
  return table;
}

CoverageReport coverage(double gamma, double theta, const Design& d, std::uint64_t reps,
                        std::uint64_t seed, int workers) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::domain_error("coverage: gamma must lie in [0, 1)");
  if (reps < 1000) throw std::domain_error("coverage: reps must be >= 1000");
  if (!(theta > 0.0)) throw std::domain_error("coverage: theta must be > 0");
  struct HitAcc {
    std::uint64_t hits = 0;
  };
  auto blocks = run_blocks(d, theta, reps, seed, workers, HitAcc{},
                           [&](HitAcc& a, const SuffStat& s) {
                             const Interval ci = confidence_interval(s, gamma);
                             if (ci.lo <= theta && theta <= ci.hi) ++a.hits;
                           });
  const HitAcc tot = pairwise_merge(blocks, 0, blocks.size(),
                                    [](HitAcc& a, const HitAcc& b) { a.hits += b.hits; });
  return {gamma,
          theta,
          d.n,
          d.k,
          reps,
          tot.hits,
          static_cast<double>(tot.hits) / static_cast<double>(reps),
          std::sqrt(gamma * (1.0 - gamma) / static_cast<double>(reps)),
          seed};
}

EquivarianceReport equivariance_audit(const Estimator& est, int trials, std::uint64_t seed,
                                      double tol) {
  RandomStream rng(seed);
  double max_dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + static_cast<int>(rng.uniform01() * 40.0);
    const Design d(rng.uniform(0.05, 0.95), n);
    const double theta = std::exp(rng.uniform(-2.0, 2.0));
    const Sample y = sample_scaled_uniform(theta, d, rng);
    const SuffStat s = suff_stat(y);
    const double c = std::pow(10.0, rng.uniform(-6.0, 6.0));
    const SuffStat sc_ = suff_stat_from_extremes(c * s.y_min, c * s.y_max, d);
    const double v = est.rule(s);
    const double vc = est.rule(sc_);
    max_dev = std::max(max_dev, std::abs(vc / (c * v) - 1.0));
  }
  return {trials, max_dev, tol, max_dev <= tol};
}

}  // namespace uniscale
