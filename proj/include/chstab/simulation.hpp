#pragma once

#include "chstab/config.hpp"
#include "chstab/diagnostics.hpp"
#include "chstab/spectral.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace chstab {

/// Raised when a step still fails after halving k four times.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(double t, double k, const std::string& cause);
  double t() const { return t_; }
  double k() const { return k_; }

 private:
  double t_;
  double k_;
};

struct SnapshotEntry {
  long step = 0;
  double t = 0.0;
  std::filesystem::path path;
};

struct RunResult {
  /// State before the first step; not part of the CSV.
  DiagnosticsRecord initial;
  /// One record per accepted step (substeps of a retried step count individually).
  std::vector<DiagnosticsRecord> records;
  Field final_state;
  std::vector<SnapshotEntry> snapshots;
  /// Scheduled steps that needed the halving fallback.
  int retried_steps = 0;
};

/// Runs the configured schedule. A step that throws NonConvergence or
/// LinearSolveFailure, or produces non-finite values, is redone from the same
/// state as 2, 4, 8 and finally 16 substeps of size k/2^j; SolverAbort follows
/// if all of them fail. With `write_outputs` the CSV, checkpoints (initial, every
/// snapshot_every steps, final) and the JSON manifest are written.
RunResult run_simulation(const RunConfig& cfg, bool write_outputs = true);

/// TheoryBounds for the configured problem, with alpha = |m(u0)| and R taken
/// from analysis.R or from |u0 - m|_{-1}.
TheoryBounds configured_bounds(const RunConfig& cfg);

/// Inequality monitors replayed over a finished run. The first record acts as
/// the reference state.
struct MonitorReport {
  double max_mass_drift = 0.0;
  bool mass_conserved = true;
  bool t_increasing = true;
  std::vector<long> energy_violations;
  double c_k = 0.0;
  /// Empty when the step-size condition c_k <= 1 does not hold.
  std::optional<DissipationCheck> dissipation;
  std::vector<long> recursion_violations;
  TheoryBounds bounds;
  std::vector<std::string> notes;

  bool ok() const;
};

MonitorReport replay_monitors(const std::vector<DiagnosticsRecord>& records, const RunConfig& cfg);

}  // namespace chstab
