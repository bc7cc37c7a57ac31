// uniscale: estimation and risk experiments for the scaled uniform model
// y_i = theta * u_i, u_i ~ U[1-k, 1+k] with known k.
//
// Exit codes: 0 success, 2 usage or malformed input, 3 infeasible data,
// 4 selftest failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uniscale/estimators.hpp"
#include "uniscale/fiducial.hpp"
#include "uniscale/ks.hpp"
#include "uniscale/model.hpp"
#include "uniscale/quad.hpp"
#include "uniscale/report_io.hpp"
#include "uniscale/risklab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSelftest = 4;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Whitespace-separated decimals; '#' starts a comment running to end of line.
std::vector<double> read_data_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open data file '" + path + "'");
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        out.push_back(v);
      } catch (const std::exception&) {
        throw UsageError("malformed number '" + tok + "' in '" + path + "'");
      }
    }
  }
  if (out.empty()) throw UsageError("data file '" + path + "' holds no observations");
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + out_path + "'");
  out << text;
}

std::vector<uniscale::LossKind> parse_losses(const std::vector<std::string>& names) {
  std::vector<uniscale::LossKind> out;
  for (const auto& s : names) out.push_back(uniscale::loss_from_name(s));
  return out;
}

std::vector<uniscale::Design> build_designs(const std::string& grid,
                                            const std::vector<int>& ns,
                                            const std::vector<double>& ks) {
  if (grid == "default") return uniscale::default_design_grid();
  if (!grid.empty() && grid != "none")
    throw UsageError("--grid accepts 'default' or 'none'");
  if (ns.empty() || ks.empty())
    throw UsageError("give --n and --k lists, or --grid default");
  std::vector<uniscale::Design> out;
  for (int n : ns)
    for (double k : ks) out.emplace_back(k, n);
  return out;
}

struct EstimateRow {
  std::string name;
  double value;
  bool feasible;
};

int cmd_estimate(const std::string& data_path, double k, std::vector<double> gammas,
                 const std::string& format, const std::string& out_path) {
  const std::vector<double> y = read_data_file(data_path);
  const uniscale::Design d(k, static_cast<int>(y.size()));
  const uniscale::SuffStat s = uniscale::suff_stat({d, y});
  if (gammas.empty()) gammas = {0.05};

  std::vector<EstimateRow> rows;
  for (const auto& e : uniscale::catalog()) {
    const double v = e.rule(s);
    rows.push_back({e.name, v, v >= s.theta_ml && v <= s.theta_mu});
  }
  const auto fid = uniscale::fiducial_dist(s);

  if (format == "json") {
    nlohmann::json j;
    j["schema"] = "uniscale estimate json v1";
    j["n"] = d.n;
    j["k"] = d.k;
    j["y_min"] = s.y_min;
    j["y_max"] = s.y_max;
    j["s2"] = s.s2;
    j["b_star"] = s.b_star;
    j["sure_interval"] = {s.theta_ml, s.theta_mu};
    j["estimates"] = nlohmann::json::object();
    for (const auto& r : rows) j["estimates"][r.name] = r.value;
    j["fiducial_median"] = fid.dist.quantile(0.5);
    j["intervals"] = nlohmann::json::array();
    for (double g : gammas) {
      const auto ci = uniscale::confidence_interval(s, g);
      j["intervals"].push_back({{"gamma", g}, {"lo", ci.lo}, {"hi", ci.hi}});
    }
    write_output(j.dump(2) + "\n", out_path);
    return kExitOk;
  }
  if (format == "csv") {
    std::string out = "# uniscale estimate csv v1\nname,value\n";
    for (const auto& r : rows)
      out += r.name + "," + uniscale::format_full(r.value) + "\n";
    out += "sure_lo," + uniscale::format_full(s.theta_ml) + "\n";
    out += "sure_hi," + uniscale::format_full(s.theta_mu) + "\n";
    for (double g : gammas) {
      const auto ci = uniscale::confidence_interval(s, g);
      out += "ci_lo:" + uniscale::format_full(g) + "," + uniscale::format_full(ci.lo) + "\n";
      out += "ci_hi:" + uniscale::format_full(g) + "," + uniscale::format_full(ci.hi) + "\n";
    }
    write_output(out, out_path);
    return kExitOk;
  }
  if (format != "human") throw UsageError("--format must be human, csv, or json");

  std::ostringstream out;
  out << "n = " << d.n << ", k = " << uniscale::format_sig6(d.k)
      << ", y_min = " << uniscale::format_sig6(s.y_min)
      << ", y_max = " << uniscale::format_sig6(s.y_max) << "\n";
  out << "sure interval for theta: [" << uniscale::format_sig6(s.theta_ml) << ", "
      << uniscale::format_sig6(s.theta_mu) << "]  (b* = " << uniscale::format_sig6(s.b_star)
      << ")\n\n";
  out << "estimator         estimate\n";
  for (const auto& r : rows) {
    char line[64];
    std::snprintf(line, sizeof line, "%-16s  %s%s\n", r.name.c_str(),
                  uniscale::format_sig6(r.value).c_str(), r.feasible ? "" : "  (outside sure interval)");
    out << line;
  }
  out << "\nfiducial median: " << uniscale::format_sig6(fid.dist.quantile(0.5)) << "\n";
  for (double g : gammas) {
    const auto ci = uniscale::confidence_interval(s, g);
    out << 100.0 * (1.0 - g) << "% interval: [" << uniscale::format_sig6(ci.lo) << ", "
        << uniscale::format_sig6(ci.hi) << "]\n";
  }
  write_output(out.str(), out_path);
  return kExitOk;
}

int cmd_risk(const std::string& grid, const std::vector<int>& ns, const std::vector<double>& ks,
             std::vector<double> thetas, const std::vector<std::string>& loss_names,
             std::vector<std::string> est_names, std::uint64_t reps, std::uint64_t seed,
             int workers, const std::string& format, const std::string& out_path) {
  const auto designs = build_designs(grid, ns, ks);
  if (thetas.empty()) thetas = {1.0};
  const auto losses = parse_losses(loss_names);
  if (est_names.empty())
    for (const auto& e : uniscale::catalog()) est_names.push_back(e.name);
  std::vector<uniscale::Estimator> ests;
  for (const auto& name : est_names) ests.push_back(uniscale::resolve_estimator(name));
  for (double theta : thetas)
    if (!(theta > 0.0)) throw UsageError("--theta values must be > 0");

  // One quad row and one mc row per cell; row order is fixed so output is
  // reproducible byte for byte for any worker count.
  struct Cell {
    const uniscale::Estimator* est;
    const uniscale::Design* d;
    double theta;
    uniscale::LossKind loss;
  };
  std::vector<Cell> cells;
  for (const auto& d : designs)
    for (double theta : thetas)
      for (const auto loss : losses)
        for (const auto& e : ests) cells.push_back({&e, &d, theta, loss});

  std::vector<uniscale::RiskReport> rows(cells.size() * 2,
                                         uniscale::RiskReport{"", 1, 0.5, 1.0, uniscale::LossKind::squared,
                                                              uniscale::RiskMethod::quad, 0, 0, 0, 0});
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      const Cell& c = cells[i];
      rows[2 * i] = uniscale::quad_risk(*c.est, *c.d, c.loss, c.theta, 1e-8);
      rows[2 * i + 1] = uniscale::mc_risk(*c.est, c.theta, *c.d, c.loss, reps, seed, 1);
    }
  };
  const int nworkers = std::max(1, workers);
  if (nworkers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  if (format == "json") {
    write_output(uniscale::risk_json(rows), out_path);
  } else if (format == "csv") {
    write_output(uniscale::risk_csv(rows), out_path);
  } else if (format == "human") {
    std::ostringstream out;
    out << "estimator         n      k      theta  loss            method  value         stderr\n";
    for (const auto& r : rows) {
      char line[160];
      std::snprintf(line, sizeof line, "%-16s  %-5d  %-5s  %-5s  %-14s  %-6s  %-12s  %s\n",
                    r.estimator.c_str(), r.n, uniscale::format_sig6(r.k).c_str(),
                    uniscale::format_sig6(r.theta).c_str(), uniscale::loss_name(r.loss),
                    uniscale::method_name(r.method), uniscale::format_sig6(r.value).c_str(),
                    uniscale::format_sig6(r.dispersion).c_str());
      out << line;
    }
    write_output(out.str(), out_path);
  } else {
    throw UsageError("--format must be human, csv, or json");
  }
  return kExitOk;
}

int cmd_coverage(const std::string& grid, const std::vector<int>& ns,
                 const std::vector<double>& ks, const std::vector<double>& gammas, double theta,
                 std::uint64_t reps, std::uint64_t seed, int workers, const std::string& format,
                 const std::string& out_path) {
  if (gammas.empty()) throw UsageError("coverage needs a nonempty --gamma list");
  const auto designs = build_designs(grid, ns, ks);
  std::vector<uniscale::CoverageReport> rows;
  for (double g : gammas)  // gamma echoes input order
    for (const auto& d : designs)
      rows.push_back(uniscale::coverage(g, theta, d, reps, seed, workers));
  if (format == "json") {
    write_output(uniscale::coverage_json(rows), out_path);
  } else if (format == "csv") {
    write_output(uniscale::coverage_csv(rows), out_path);
  } else if (format == "human") {
    std::ostringstream out;
    out << "gamma    n      k      theta  reps      coverage   stderr\n";
    for (const auto& r : rows) {
      char line[160];
      std::snprintf(line, sizeof line, "%-7s  %-5d  %-5s  %-5s  %-8llu  %-9s  %s\n",
                    uniscale::format_sig6(r.gamma).c_str(), r.n, uniscale::format_sig6(r.k).c_str(),
                    uniscale::format_sig6(r.theta).c_str(),
                    static_cast<unsigned long long>(r.reps),
                    uniscale::format_sig6(r.coverage).c_str(),
                    uniscale::format_sig6(r.stderr_).c_str());
      out << line;
    }
    write_output(out.str(), out_path);
  } else {
    throw UsageError("--format must be human, csv, or json");
  }
  return kExitOk;
}

// Fast end-to-end consistency checks; under a minute.
int cmd_selftest(std::uint64_t seed) {
  using namespace uniscale;
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s%s%s\n", ok ? "ok" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
                detail.c_str());
    if (!ok) ++failures;
  };

  {  // closed-form moments against direct quadrature of the density
    const TruncPareto d(3.0, 0.8, 1.8);
    double worst = 0.0;
    for (double m : {-2.0, -1.0, 1.0, 2.0, 3.0}) {
      const auto q = quad::integrate([&](double t) { return std::pow(t, m) * d.pdf(t); }, d.a,
                                     d.b, 1e-12);
      worst = std::max(worst, std::abs(q.value - d.moment(m)) / std::abs(d.moment(m)));
    }
    check("moment closed forms vs quadrature", worst < 1e-9,
          "worst rel dev " + format_sig6(worst));
  }
  {  // log-moment sign: adopted form matches quadrature; limit hits ln a
    const TruncPareto d(3.0, 0.8, 1.8);
    const auto q =
        quad::integrate([&](double t) { return std::log(t) * d.pdf(t); }, d.a, d.b, 1e-12);
    const double dev = std::abs(q.value - d.log_moment());
    const TruncPareto tight(3.0, 0.8, 0.8 * (1.0 + 1e-13));
    const double limit_dev = std::abs(tight.log_moment() - std::log(0.8));
    check("log-moment form vs quadrature and b->a limit", dev < 1e-10 && limit_dev < 1e-12,
          "dev " + format_sig6(dev) + ", limit dev " + format_sig6(limit_dev));
  }
  {  // maximal spread pinches the sure interval: every rule returns theta_ml
    const Design d(0.4, 3);
    const SuffStat s = suff_stat_from_extremes(0.6, 1.4, d);
    const double dev = std::max({std::abs(sc(s) - s.theta_ml), std::abs(gm(s) - s.theta_ml),
                                 std::abs(opt(s) - s.theta_ml),
                                 std::abs(bayes_p(s, 2.5) - s.theta_ml)});
    check("b*->1 limit collapses sc (and friends) to theta_ml", dev <= 1e-12,
          "max dev " + format_sig6(dev));
  }
  {  // identity chain on random statistics
    RandomStream rng(seed);
    double worst = 0.0;
    for (int t = 0; t < 2000; ++t) {
      const Design d(rng.uniform(0.05, 0.95), 1 + static_cast<int>(rng.uniform01() * 30));
      const SuffStat s = suff_stat(sample_scaled_uniform(std::exp(rng.uniform(-2, 2)), d, rng));
      worst = std::max(worst, std::abs(opt(s) / bayes_p(s, 3.0) - 1.0));
      worst = std::max(worst, std::abs(unbias_factor(s.s2, d) * s.y_max / gm(s) - 1.0));
    }
    check("opt=bayes(3) and phi*y_max=gm identities", worst < 1e-12,
          "worst rel dev " + format_sig6(worst));
  }
  {  // the two fiducial sampling routes agree in distribution
    RandomStream rng(seed + 1);
    const Design d(0.6, 4);
    const SuffStat s = suff_stat(sample_scaled_uniform(1.0, d, rng));
    const auto fid = fiducial_dist(s);
    const std::size_t N = 20000;
    std::vector<double> a(N), b(N);
    for (auto& v : a) v = fid.dist.sample(rng);
    for (auto& v : b) v = fiducial_sample_via_conditioning(s, rng);
    const double ks = ks_statistic_two_sample(a, b);
    const double crit = ks_critical_two_sample(0.01, N, N);
    check("fiducial sampling via conditioning", ks < crit,
          "KS " + format_sig6(ks) + " < " + format_sig6(crit));
  }
  {  // interval coverage near nominal
    const auto r = coverage(0.2, 1.0, Design(0.3, 5), 20000, seed + 2, 1);
    const double dev = std::abs(r.coverage - 0.8);
    check("coverage near nominal", dev <= 3.0 * r.stderr_,
          format_sig6(r.coverage) + " vs 0.8 +- 3*" + format_sig6(r.stderr_));
  }
  {  // Monte Carlo agrees with quadrature
    const auto est = resolve_estimator("opt");
    const Design d(0.5, 5);
    const auto q = quad_risk(est, d, LossKind::squared, 1.0, 1e-10);
    const auto m = mc_risk(est, 1.0, d, LossKind::squared, 50000, seed + 3, 2);
    const double dev = std::abs(m.value - q.value);
    check("mc risk vs quad risk", dev <= 3.0 * m.dispersion,
          format_sig6(m.value) + " vs " + format_sig6(q.value));
  }
  {  // equivariance audit
    bool ok = true;
    std::string detail;
    for (const char* name : {"mle", "gm", "opt", "sc"}) {
      const auto rep = equivariance_audit(resolve_estimator(name), 200, seed + 4);
      ok = ok && rep.pass;
      detail += std::string(name) + " " + format_sig6(rep.max_rel_dev) + " ";
    }
    check("scale equivariance", ok, detail);
  }
  {  // worker-count invariance
    const auto est = resolve_estimator("gm");
    const Design d(0.7, 3);
    const auto a = mc_risk(est, 1.0, d, LossKind::squared, 30000, seed + 5, 1);
    const auto b = mc_risk(est, 1.0, d, LossKind::squared, 30000, seed + 5, 4);
    check("mc determinism across worker counts",
          a.value == b.value && a.dispersion == b.dispersion, "");
  }
  std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
  return failures == 0 ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaled uniform model: estimators, fiducial intervals, risk experiments"};
  app.require_subcommand(1);

  std::string data_path, grid, format = "human", out_path;
  double k = 0.0, theta = 1.0;
  std::vector<int> ns;
  std::vector<double> ks, thetas, gammas;
  std::vector<std::string> loss_names{"squared"}, est_names;
  std::uint64_t reps = 100000, seed = 1;
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  auto* est = app.add_subcommand("estimate", "estimates and intervals for one data file");
  est->add_option("data", data_path, "observations: whitespace-separated, # comments")->required();
  est->add_option("--k", k, "relative half-width, in (0,1)")->required();
  est->add_option("--gamma", gammas, "interval miss probabilities")->delimiter(',');
  est->add_option("--format", format, "human, csv, or json");
  est->add_option("--out", out_path, "output file (default stdout)");

  auto* risk = app.add_subcommand("risk", "risk table over a design grid");
  risk->add_option("--grid", grid, "'default' for the built-in n x k grid");
  risk->add_option("--n", ns, "sample sizes")->delimiter(',');
  risk->add_option("--k", ks, "half-widths")->delimiter(',');
  risk->add_option("--theta", thetas, "evaluation scales (default 1)")->delimiter(',');
  risk->add_option("--loss", loss_names, "losses: squared, weighted, scaled_squared, log_squared")
      ->delimiter(',');
  risk->add_option("--estimators", est_names, "catalog names or bayes:<p>")->delimiter(',');
  risk->add_option("--reps", reps, "Monte Carlo replications (>= 1000)");
  risk->add_option("--seed", seed, "master seed");
  risk->add_option("--workers", workers, "worker threads");
  risk->add_option("--format", format, "human, csv, or json");
  risk->add_option("--out", out_path, "output file (default stdout)");

  auto* cov = app.add_subcommand("coverage", "empirical interval coverage");
  cov->add_option("--grid", grid, "'default' for the built-in n x k grid");
  cov->add_option("--n", ns, "sample sizes")->delimiter(',');
  cov->add_option("--k", ks, "half-widths")->delimiter(',');
  cov->add_option("--gamma", gammas, "miss probabilities (required)")->delimiter(',');
  cov->add_option("--theta", theta, "true scale (default 1)");
  cov->add_option("--reps", reps, "replications per cell (>= 1000)");
  cov->add_option("--seed", seed, "master seed");
  cov->add_option("--workers", workers, "worker threads");
  cov->add_option("--format", format, "human, csv, or json");
  cov->add_option("--out", out_path, "output file (default stdout)");

  auto* self = app.add_subcommand("selftest", "fast internal consistency checks");
  self->add_option("--seed", seed, "seed for the stochastic checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (est->parsed()) return cmd_estimate(data_path, k, gammas, format, out_path);
    if (risk->parsed())
      return cmd_risk(grid, ns, ks, thetas, loss_names, est_names, reps, seed, workers, format,
                      out_path);
    if (cov->parsed())
      return cmd_coverage(grid, ns, ks, gammas, theta, reps, seed, workers, format, out_path);
    if (self->parsed()) return cmd_selftest(seed);
  } catch (const uniscale::InfeasibleSampleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
