#pragma once

#include <string>
#include <vector>

#include "uniscale/risklab.hpp"

namespace uniscale {

// Shortest decimal that parses back to the same double.
std::string format_full(double v);
// 6 significant digits, for human tables.
std::string format_sig6(double v);

// Machine formats carry full round-trip precision; schemas are versioned in
// a leading comment (CSV) or a "schema" field (JSON).
std::string risk_csv(const std::vector<RiskReport>& rows);
std::string risk_json(const std::vector<RiskReport>& rows);
std::string coverage_csv(const std::vector<CoverageReport>& rows);
std::string coverage_json(const std::vector<CoverageReport>& rows);

}  // namespace uniscale
