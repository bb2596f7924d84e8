#pragma once

// Subcommands of the hermiflow tool, callable without a process boundary.
// Input problems (unknown scenario, parse or invariant failure) come back as
// exit code 2 with a diagnostic in the report; they are not thrown.

#include <cstdint>
#include <optional>
#include <string>

namespace hermiflow::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInputError = 2 };

struct CommandOutcome {
  int exit_code = kPass;
  std::string report;  // human-readable, or JSON when requested
  /// Data destined for stdout when the report goes to stderr (flow --out -).
  std::string payload;
};

inline constexpr std::uint64_t kDefaultSeed = 20240607;
inline constexpr double kDefaultVerifyTol = 1e-10;
inline constexpr double kReduceTol = 1e-10;
inline constexpr double kGaugeTol = 1e-9;

/// --tol if given, else HERMIFLOW_TOL if set and valid, else 1e-10.
/// Throws hermiflow::Error(InvalidArgument) on an unparseable HERMIFLOW_TOL.
double resolve_verify_tolerance(std::optional<double> flag);

CommandOutcome cmd_verify(const std::string& scenario_ref, int n_random, std::uint64_t seed, double tol,
                          bool json = false);
CommandOutcome cmd_reduce(const std::string& scenario_ref, bool json = false);
CommandOutcome cmd_gauge(const std::string& scenario_ref, bool json = false);

struct FlowOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  bool adaptive = false;
  std::string out;  // empty: no trajectory output; "-": stdout
  std::string format = "csv";
  int k_max = 2;
  int stride = 1;
  double blowup_threshold = 1e6;
  bool json = false;
};

CommandOutcome cmd_flow(const std::string& scenario_ref, const FlowOptions& opts);

}  // namespace hermiflow::cli
