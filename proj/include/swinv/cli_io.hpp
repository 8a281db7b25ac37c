#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swinv/config.hpp"
#include "swinv/reconstruction.hpp"

namespace swinv {

/// Process exit codes of the swinv tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitSingularity = 2,
  kExitVerifyFailed = 3,
  kExitIo = 4,
};

/// Raised when the traveling-case variant cannot be decided by the residual oracle.
class VariantUndecided : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveResult {
  RunConfig config;  // case2_variant filled in when it was resolved automatically
  std::optional<ReducedProblem> problem;
  std::optional<VariantResolution> resolution;
  Trajectory trajectory;
  std::optional<Denominator> start_singularity;  // set when the initial state is singular

  [[nodiscard]] bool completed() const { return !start_singularity && !trajectory.event(); }
  /// Singular abscissa, from the event or the initial state.
  [[nodiscard]] std::optional<double> singular_s() const;
  [[nodiscard]] std::optional<Denominator> singular_which() const;
};

/// Builds the problem and integrates it. Throws VariantUndecided, IntegrationError (other than
/// a singular start) and std::invalid_argument.
SolveResult solve(const RunConfig& cfg);

/// CSV with header s,H,U,V,dH,dU,dV,den_min (17 significant digits) and a trailing
/// "# singularity s=<value> which=<name>" comment when the run was cut short.
/// den_min is the signed monitored denominator of smallest magnitude.
std::string trajectory_csv(const SolveResult& result);

struct TrajectoryTable {
  std::vector<std::array<double, 8>> rows;
  std::optional<double> singular_s;
  std::string singular_which;
};

/// Reads a trajectory CSV back. Throws std::runtime_error on malformed input.
TrajectoryTable parse_trajectory_csv(const std::string& text);

struct VerifyOutcome {
  bool passed = false;
  std::string body;  // the part of the report that excludes the configuration echo
};

/// Solves, reconstructs and runs the residual study at delta and delta/2.
VerifyOutcome verify_residual(const RunConfig& cfg, double delta);

struct ScanRow {
  double value = 0.0;
  bool completed = false;
  std::optional<double> singular_s;
};

std::vector<ScanRow> singularity_scan(const ScanConfig& cfg);
/// Header value,completed,singular_s; singular_s blank for completed runs.
std::string scan_csv(const std::vector<ScanRow>& rows);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool quiet = false;
  std::optional<double> step;  // overrides integration.step
};

int run_solve(const RunConfig& cfg, const RunOptions& options, std::ostream& out);
int run_verify_residual(const RunConfig& cfg, double delta, const RunOptions& options,
                        std::ostream& out);
int run_singularity_scan(const ScanConfig& cfg, const RunOptions& options, std::ostream& out);

}  // namespace swinv
