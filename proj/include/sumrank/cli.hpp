#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sumrank/certify.hpp"

namespace sumrank {

struct RunConfig {
  std::optional<FamilyParams> params;
  std::vector<std::string> claims;
  std::optional<Mode> mode;
  Budget budget;
  int cap = 4;
  std::optional<std::string> descriptor;  // path of a descriptor written by build
};

/// Parses a JSON config; unknown keys are rejected with ConfigError.
RunConfig config_from_json(const Json& j);
/// Applies key=value overrides (family, q, s, s1, s2, m, u, lambda, epsilon, claims,
/// mode, cap, descriptor, membership_tests, syndrome_cap, workers).
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& pairs);

/// Report row assembled from the certificates of one code.
struct ReportRow {
  std::string id;
  std::string family;
  Json params;
  Json code;
  std::vector<std::pair<std::string, Json>> claims;  // claim -> certificate
  std::optional<double> seconds;
  bool error = false;
  std::string error_text;
};

/// Reads every certificate under dir, grouped by code and sorted by (family, q, s, m, lambda).
std::vector<ReportRow> load_report(const std::string& dir);
std::string report_text(const std::vector<ReportRow>& rows);
std::string report_csv(const std::vector<ReportRow>& rows);

/// Entry point for the sumrank tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sumrank
