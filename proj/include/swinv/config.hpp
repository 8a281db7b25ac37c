#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swinv/integrator.hpp"
#include "swinv/reduced_problem.hpp"
#include "swinv/reduced_systems.hpp"

namespace swinv {

/// Parse or validation failure. line() is 1-based when the problem is tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::optional<int> line = {}, std::string key = {})
      : std::runtime_error(what), line_(line), key_(std::move(key)) {}
  [[nodiscard]] std::optional<int> line() const { return line_; }
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::optional<int> line_;
  std::string key_;
};

struct OutputConfig {
  std::string prefix = "trajectory";
  std::vector<std::string> svg{"H", "U", "V"};  // subset of H, U, V; may be empty

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  InvariantCase kind = InvariantCase::stationary_x1x3;
  ModelParams params;
  ReducedState ics;  // ics.s is a (stationary) or z0
  double s_end = 0.0;
  double step = 1e-3;
  double denom_floor = 1e-6;
  std::size_t max_steps = 10'000'000;
  std::optional<Case2Variant> case2_variant;  // empty: choose by residual oracle
  RhsCorruption corruption = RhsCorruption::none;
  OutputConfig output;

  [[nodiscard]] IntegrationConfig integration() const;
  bool operator==(const RunConfig&) const = default;
};

struct ScanConfig {
  RunConfig base;
  std::string vary;  // config key or alias (U_a, H_a, V_a, a, z0, q, q3, omega)
  double lo = 0.0;
  double hi = 0.0;
  int count = 2;

  /// Value of the i-th run; the endpoints are hit exactly.
  [[nodiscard]] double value(int i) const;
  /// base with `vary` set to `value`. Throws ConfigError if the result is invalid.
  [[nodiscard]] RunConfig run_config(double value) const;
  bool operator==(const ScanConfig&) const = default;
};

/// key = value lines, '#' comments, dotted keys. Unknown keys, duplicates and malformed
/// lines raise ConfigError with the line number; missing required keys are listed together.
RunConfig parse_config(std::string_view text);
/// As parse_config, additionally requiring scan.vary, scan.lo, scan.hi and scan.count.
ScanConfig parse_scan_config(std::string_view text);

/// Canonical text; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& cfg);
std::string serialize(const ScanConfig& cfg);

/// Canonical config key for a scan variable name, or empty if unsupported.
std::optional<std::string> scan_key(std::string_view name);

}  // namespace swinv
