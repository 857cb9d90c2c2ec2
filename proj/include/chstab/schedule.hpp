#pragma once

#include "chstab/potential.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chstab {

/// One entry of a time partition: the step size and the time reached after it.
struct TimeStep {
  double k;
  double t;
};

/// Variable step-size partition 0 = t^0 < t^1 < ... of [0, T_end].
struct StepSchedule {
  enum class Kind { constant, list, random_uniform };

  Kind kind = Kind::constant;
  double k = 0.1;
  /// Explicit step sizes for Kind::list, repeated cyclically until T_end.
  std::vector<double> values;
  double k_lo = 0.05;
  double k_hi = 0.15;
  std::uint64_t seed = 0;
  double T_end = 100.0;

  void validate() const;

  /// The partition. The last step is shortened to land exactly on T_end; for
  /// constant steps t^n is computed as n k rather than accumulated.
  std::vector<TimeStep> steps() const;

  /// sup k_n over the schedule (k_hi for random schedules).
  double k_sup() const;
};

std::string to_string(StepSchedule::Kind kind);
StepSchedule::Kind schedule_kind_from_string(const std::string& name);

struct ScheduleReport {
  double k_sup = 0.0;
  StepBounds bounds;
  /// k <= 8 eps / c^2
  bool energy_condition = false;
  /// k < 2 eps / c^2
  bool potential_condition = false;
  /// Results whose step-size hypotheses the schedule meets.
  std::vector<std::string> satisfied;
};

ScheduleReport validate_schedule(const StepSchedule& schedule, const PolynomialPotential& P, double epsilon);

}  // namespace chstab
