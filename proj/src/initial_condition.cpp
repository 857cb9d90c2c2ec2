#include "chstab/initial_condition.hpp"

#include "chstab/checkpoint.hpp"

#include <cmath>
#include <numbers>

namespace chstab {

Field preset_disk(const GridPtr& grid) {
  constexpr double pi = std::numbers::pi;
  return Field::from_function(grid, [](double x, double y) {
    return (x - pi) * (x - pi) + (y - pi) * (y - pi) < 1.0 ? 1.0 : -1.0;
  });
}

Field preset_drop(const GridPtr& grid, double epsilon, DropCenter center) {
  const double c = center == DropCenter::origin ? 0.0 : 0.5 * grid->length();
  const double width = std::numbers::sqrt2 * epsilon;
  return Field::from_function(grid, [c, width](double x, double y) {
    return std::tanh((std::hypot(x - c, y - c) - 0.17) / width);
  });
}

Field preset_modes(const GridPtr& grid) {
  return Field::from_function(grid, [](double x, double y) { return std::sin(4.0 * x) * std::cos(3.0 * y); });
}

Field initial_condition(const InitialConditionSpec& spec, const GridPtr& grid, double epsilon) {
  Field u(grid);
  if (spec.preset == "I") {
    u = preset_disk(grid);
  } else if (spec.preset == "II") {
    u = preset_drop(grid, epsilon, spec.center);
  } else if (spec.preset == "III") {
    u = preset_modes(grid);
  } else if (spec.preset == "file") {
    Checkpoint c;
    try {
      c = read_checkpoint(spec.file);
    } catch (const CheckpointError& e) {
      throw ConfigError(std::string("ic.file: ") + e.what());
    }
    if (c.nx != grid->n() || c.ny != grid->n())
      throw ConfigError("ic.file: checkpoint is " + std::to_string(c.nx) + " x " + std::to_string(c.ny) +
                        ", grid is " + std::to_string(grid->n()) + " x " + std::to_string(grid->n()));
    u = Field(grid, c.values);
    if (!u.all_finite()) throw ConfigError("ic.file: checkpoint contains non-finite values");
  } else {
    throw ConfigError("unknown initial condition preset '" + spec.preset + "'");
  }

  if (spec.scale != 1.0 || spec.hm1) {
    const double m = mean(u);
    Field fluct = remove_mean(u);
    double s = spec.scale;
    if (spec.hm1) {
      const double current = seminorm(fluct, -1);
      if (!(current > 0.0)) throw ConfigError("ic.hm1: initial condition has no mean-free part to rescale");
      s = *spec.hm1 / current;
    }
    fluct *= s;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = m + fluct[i];
  }
  return u;
}

}  // namespace chstab
