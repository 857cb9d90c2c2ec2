#pragma once

#include "chstab/potential.hpp"
#include "chstab/schedule.hpp"
#include "chstab/stepper.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chstab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DropCenter { origin, middle };

struct InitialConditionSpec {
  /// "I", "II", "III" or "file".
  std::string preset = "III";
  std::filesystem::path file;
  /// Centre of the preset II drop; the literal formula puts it at the origin.
  DropCenter center = DropCenter::origin;
  /// u0 <- m + scale (u0 - m)
  double scale = 1.0;
  /// When set, rescale the mean-free part so that |u0 - m|_{-1} equals this value.
  std::optional<double> hm1;
};

struct OutputConfig {
  std::filesystem::path csv = "diagnostics.csv";
  std::filesystem::path checkpoint_dir = "checkpoints";
  std::string prefix = "state";
  std::filesystem::path manifest = "manifest.json";
};

/// Inputs of the a priori bounds that the equation itself does not fix.
struct AnalysisConfig {
  double c0 = 0.25;
  std::optional<double> eta;
  /// Bound on |u0 - m|_{-1}; defaults to the value of the initial condition.
  std::optional<double> R;
};

/// Everything a run needs. Defaults reproduce the reference experiment:
/// f = u^3 - u, eps = 0.1, k = 0.1, 80 x 80 grid on (0, 2 pi)^2, T = 100.
struct RunConfig {
  double L = 6.283185307179586;
  std::size_t n = 80;
  double epsilon = 0.1;
  std::vector<double> coeffs{-1.0, 0.0, 1.0};
  StepSchedule schedule;
  SolverConfig solver;
  InitialConditionSpec ic;
  OutputConfig output;
  /// Checkpoint every this many accepted steps; 0 writes only the initial and final states.
  long snapshot_every = 100;
  std::uint64_t seed = 0;
  AnalysisConfig analysis;

  /// Throws ConfigError.
  void validate() const;
  PolynomialPotential potential() const;

  /// Assigns one key from its textual value (a TOML scalar, a quoted string or
  /// a bracketed array). Throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
};

/// Flat TOML subset: `key = value` lines, optional `[section]` headers that
/// prefix the following keys, `#` comments. Duplicate keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// `key=value` as given on the command line; unquoted strings are accepted.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Every key with its current value, in schema order, rendered as TOML.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);
std::string to_toml(const RunConfig& cfg);

}  // namespace chstab
