#pragma once

#include "chstab/config.hpp"
#include "chstab/spectral.hpp"

namespace chstab {

/// Preset I: +1 inside the unit disk centred at (pi, pi), -1 elsewhere.
Field preset_disk(const GridPtr& grid);
/// Preset II: tanh((r - 0.17) / (sqrt(2) eps)), r measured from `center`.
Field preset_drop(const GridPtr& grid, double epsilon, DropCenter center = DropCenter::origin);
/// Preset III: sin(4x) cos(3y).
Field preset_modes(const GridPtr& grid);

/// Builds u0 on `grid` from a preset or checkpoint, then applies ic.scale and
/// ic.hm1. A checkpoint must match the grid size. Throws ConfigError.
Field initial_condition(const InitialConditionSpec& spec, const GridPtr& grid, double epsilon);

}  // namespace chstab
