#pragma once

#include <string>
#include <vector>

#include "grw/cli/config.hpp"
#include "grw/identities/identities.hpp"
#include "json.hpp"

namespace grw::cli {

inline constexpr const char* kEngineName = "grwlab";
inline constexpr const char* kEngineVersion = "1.0.0";

enum ExitCode : int { exit_pass = 0, exit_check_failure = 1, exit_config_error = 2, exit_internal_fault = 3 };

/// Shortest text that parses back to the same double ("nan", "inf", "-inf"
/// for non-finite values).
std::string format_double(double v);

/// "label@(tau;x1;...;xm)".
std::string point_coords(const std::string& label, double tau, const std::vector<double>& x);

/// One sample point of one hypersurface: either the check reports or the
/// reason it was refused.
struct PointResult {
  std::size_t member = 0;
  std::size_t point = 0;
  double tau = 0;
  std::string rejection;  // empty when admitted
  std::vector<identities::IdentityReport> reports;
};

struct RunResult {
  nlohmann::json report;
  std::string csv;  // per-point records, header included
  int exit_code = exit_pass;
};

/// Evaluates the fleet: admission, a Christoffel cross-check and the selected
/// checks at every point (in parallel when config.jobs > 1), then theorem
/// reports and the slice classification per hypersurface. Records keep sample
/// order whatever the job count. ConsistencyFault and unexpected errors
/// propagate; they map to exit code 3.
RunResult run(const RunConfig& config, const Fleet& fleet);

/// run() plus writing report.json and points.csv under the output dir.
RunResult run_and_write(const RunConfig& config);

}  // namespace grw::cli
