#include "uniscale/report_io.hpp"

#include <charconv>
#include <cstdio>

#include "json.hpp"

namespace uniscale {

std::string format_full(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string format_sig6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

static const char* kRiskCsvHeader =
    "# uniscale risk csv v1\n"
    "estimator,n,k,theta,loss,method,value,stderr,reps,seed\n";

std::string risk_csv(const std::vector<RiskReport>& rows) {
  std::string out = kRiskCsvHeader;
  for (const auto& r : rows) {
    out += r.estimator;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += format_full(r.k);
    out += ',';
    out += format_full(r.theta);
    out += ',';
    out += loss_name(r.loss);
    out += ',';
    out += method_name(r.method);
    out += ',';
    out += format_full(r.value);
    out += ',';
    out += format_full(r.dispersion);
    out += ',';
    out += std::to_string(r.reps);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

static nlohmann::json risk_row_json(const RiskReport& r) {
  return {{"estimator", r.estimator}, {"n", r.n},
          {"k", r.k},                 {"theta", r.theta},
          {"loss", loss_name(r.loss)}, {"method", method_name(r.method)},
          {"value", r.value},         {"stderr", r.dispersion},
          {"reps", r.reps},           {"seed", r.seed}};
}

std::string risk_json(const std::vector<RiskReport>& rows) {
  nlohmann::json j;
  j["schema"] = "uniscale risk json v1";
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) j["rows"].push_back(risk_row_json(r));
  return j.dump(2) + "\n";
}

static const char* kCoverageCsvHeader =
    "# uniscale coverage csv v1\n"
    "gamma,theta,n,k,reps,hits,coverage,stderr,seed\n";

std::string coverage_csv(const std::vector<CoverageReport>& rows) {
  std::string out = kCoverageCsvHeader;
  for (const auto& r : rows) {
    out += format_full(r.gamma);
    out += ',';
    out += format_full(r.theta);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += format_full(r.k);
    out += ',';
    out += std::to_string(r.reps);
    out += ',';
    out += std::to_string(r.hits);
    out += ',';
    out += format_full(r.coverage);
    out += ',';
    out += format_full(r.stderr_);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::string coverage_json(const std::vector<CoverageReport>& rows) {
  nlohmann::json j;
  j["schema"] = "uniscale coverage json v1";
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"gamma", r.gamma},
                         {"theta", r.theta},
                         {"n", r.n},
                         {"k", r.k},
                         {"reps", r.reps},
                         {"hits", r.hits},
                         {"coverage", r.coverage},
                         {"stderr", r.stderr_},
                         {"seed", r.seed}});
  return j.dump(2) + "\n";
}

}  // namespace uniscale
