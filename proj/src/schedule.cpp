#include "chstab/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace chstab {

std::string to_string(StepSchedule::Kind kind) {
  switch (kind) {
    case StepSchedule::Kind::constant: return "constant";
    case StepSchedule::Kind::list: return "list";
    case StepSchedule::Kind::random_uniform: return "random_uniform";
  }
  return "constant";
}

StepSchedule::Kind schedule_kind_from_string(const std::string& name) {
  if (name == "constant") return StepSchedule::Kind::constant;
  if (name == "list") return StepSchedule::Kind::list;
  if (name == "random_uniform") return StepSchedule::Kind::random_uniform;
  throw std::invalid_argument("unknown schedule kind '" + name + "'");
}

void StepSchedule::validate() const {
  if (!(T_end >= 0.0) || !std::isfinite(T_end)) throw std::invalid_argument("T_end must be finite and nonnegative");
  switch (kind) {
    case Kind::constant:
      if (!(k > 0.0)) throw std::invalid_argument("schedule step k must be positive");
      break;
    case Kind::list:
      if (values.empty()) throw std::invalid_argument("list schedule needs at least one step size");
      for (double v : values)
        if (!(v > 0.0)) throw std::invalid_argument("list schedule step sizes must be positive");
      break;
    case Kind::random_uniform:
      if (!(k_lo > 0.0)) throw std::invalid_argument("random schedule needs k_lo > 0");
      if (!(k_lo <= k_hi)) throw std::invalid_argument("random schedule needs k_lo <= k_hi");
      break;
  }
}

std::vector<TimeStep> StepSchedule::steps() const {
  validate();
  std::vector<TimeStep> out;
  if (T_end == 0.0) return out;
  const double snap = 1e-9;

  if (kind == Kind::constant) {
    const double ratio = T_end / k;
    auto full = static_cast<long long>(std::llround(ratio));
    if (std::abs(static_cast<double>(full) - ratio) > snap * std::max(1.0, ratio)) full = static_cast<long long>(std::floor(ratio));
    for (long long n = 1; n <= full; ++n) out.push_back({k, static_cast<double>(n) * k});
    if (out.empty() || out.back().t < T_end * (1.0 - snap)) {
      const double t0 = out.empty() ? 0.0 : out.back().t;
      out.push_back({T_end - t0, T_end});
    } else {
      out.back().t = T_end;
    }
    return out;
  }

  // Draws from the top 53 bits so the sequence does not depend on the
  // standard library's distribution implementation.
  std::mt19937_64 rng(seed);
  std::size_t index = 0;
  auto next_size = [&]() {
    if (kind == Kind::list) return values[index++ % values.size()];
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return k_lo + (k_hi - k_lo) * unit;
  };

  double t = 0.0;
  while (t < T_end) {
    double kn = next_size();
    const double remaining = T_end - t;
    if (kn >= remaining * (1.0 - snap)) {
      out.push_back({remaining, T_end});
      break;
    }
    t += kn;
    out.push_back({kn, t});
  }
  return out;
}

double StepSchedule::k_sup() const {
  switch (kind) {
    case Kind::constant: return k;
    case Kind::random_uniform: return k_hi;
    case Kind::list: {
      double s = 0.0;
      for (double v : values) s = std::max(s, v);
      return s;
    }
  }
  return k;
}

ScheduleReport validate_schedule(const StepSchedule& schedule, const PolynomialPotential& P, double epsilon) {
  schedule.validate();
  ScheduleReport r;
  r.k_sup = schedule.k_sup();
  r.bounds = step_bounds(P, epsilon);
  r.energy_condition = !r.bounds.k_energy || r.k_sup <= *r.bounds.k_energy;
  r.potential_condition = !r.bounds.k_potential || r.k_sup < *r.bounds.k_potential;

  r.satisfied.push_back("hminus1_stability");
  if (r.energy_condition) {
    r.satisfied.insert(r.satisfied.end(),
                       {"energy_decay", "hminus1_uniform_bound", "h1_absorbing_ball", "h2_absorbing_ball"});
  }
  if (r.energy_condition && r.potential_condition) {
    r.satisfied.insert(r.satisfied.end(), {"omega_h1_absorbing_ball", "h3_absorbing_ball"});
  }
  return r;
}

}  // namespace chstab
