#include "chstab/checkpoint.hpp"
#include "chstab/config.hpp"
#include "chstab/diagnostics.hpp"
#include "chstab/diagnostics_csv.hpp"
#include "chstab/gronwall.hpp"
#include "chstab/initial_condition.hpp"
#include "chstab/potential.hpp"
#include "chstab/simulation.hpp"
#include "chstab/stepper.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace chstab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field to_field(const Array& a, double length) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square 2-D array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  std::vector<double> values(a.data(), a.data() + n * n);
  return Field(Grid2D::make(n, length), std::move(values));
}

Array to_array(const Field& u) {
  const auto n = static_cast<py::ssize_t>(u.grid().n());
  Array out({n, n});
  std::memcpy(out.mutable_data(), u.values().data(), u.size() * sizeof(double));
  return out;
}

py::dict record_dict(const DiagnosticsRecord& r) {
  return py::dict("step"_a = r.step, "t"_a = r.t, "k_n"_a = r.k_n, "mass"_a = r.mass, "energy"_a = r.energy,
                  "h1"_a = r.h1, "h2"_a = r.h2, "h3"_a = r.h3, "omega_h1"_a = r.omega_h1, "hm1"_a = r.hm1,
                  "du_l2"_a = r.du_l2, "du_hm1"_a = r.du_hm1, "solver_iters"_a = r.solver_iters,
                  "residual"_a = r.residual);
}

SolverConfig solver_config(const std::string& mode, double tol, int max_iter) {
  SolverConfig cfg;
  cfg.mode = solver_mode_from_string(mode);
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  return cfg;
}

RunConfig config_from(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides) {
  RunConfig cfg = path ? load_config(*path) : RunConfig{};
  for (const auto& o : overrides) apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_chstab, m) {
  m.doc() = "Implicit Euler Fourier spectral solver for the Cahn-Hilliard equation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CheckpointError>(m, "CheckpointError", PyExc_ValueError);
  py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception<SolverAbort>(m, "SolverAbort", PyExc_RuntimeError);

  py::class_<PolynomialPotential>(m, "Potential")
      .def(py::init<std::vector<double>>(), "coeffs"_a, "f(u) = sum_j coeffs[j-1] u^j, j = 1 .. 2p-1")
      .def_static("double_well", &PolynomialPotential::double_well)
      .def("f", &PolynomialPotential::f, "u"_a)
      .def("F", &PolynomialPotential::F, "u"_a)
      .def_property_readonly("p", &PolynomialPotential::p);

  py::class_<AssumptionConstants>(m, "AssumptionConstants")
      .def_readonly("c0", &AssumptionConstants::c0)
      .def_readonly("c1", &AssumptionConstants::c1)
      .def_readonly("c2", &AssumptionConstants::c2)
      .def_readonly("c3", &AssumptionConstants::c3)
      .def_readonly("c", &AssumptionConstants::c)
      .def_readonly("eta", &AssumptionConstants::eta);

  m.def("concavity_bound", &concavity_bound, "P"_a);
  m.def("assumption_constants", &assumption_constants, "P"_a, "c0"_a, "eta"_a);
  m.def(
      "step_bounds",
      [](const PolynomialPotential& P, double eps) {
        const auto b = step_bounds(P, eps);
        return py::make_tuple(b.k_energy, b.k_potential);
      },
      "P"_a, "epsilon"_a, "(8 eps / c^2, 2 eps / c^2); None when c = 0");

  m.def(
      "step",
      [](const Array& u, double L, double k, double eps, const PolynomialPotential& P, const std::string& mode,
         double tol, int max_iter) {
        const auto out = step(to_field(u, L), k, eps, P, solver_config(mode, tol, max_iter));
        return py::dict("u"_a = to_array(out.u_next), "omega"_a = to_array(out.omega_next), "iters"_a = out.iters,
                        "residual"_a = out.final_residual);
      },
      "u"_a, "L"_a, "k"_a, "epsilon"_a, "P"_a, "mode"_a = "fixed_point", "tol"_a = 1e-10, "max_iter"_a = 200);

  m.def(
      "energy", [](const Array& u, double L, double eps, const PolynomialPotential& P) {
        return energy(to_field(u, L), eps, P);
      },
      "u"_a, "L"_a, "epsilon"_a, "P"_a);
  m.def(
      "seminorm", [](const Array& u, double L, int s) { return seminorm(to_field(u, L), s); }, "u"_a, "L"_a, "s"_a);
  m.def(
      "initial_condition",
      [](const std::string& preset, std::size_t n, double L, double eps) {
        InitialConditionSpec spec;
        spec.preset = preset;
        return to_array(initial_condition(spec, Grid2D::make(n, L), eps));
      },
      "preset"_a, "n"_a = 80, "L"_a = 6.283185307179586, "epsilon"_a = 0.1);

  m.def(
      "read_checkpoint",
      [](const std::filesystem::path& path) {
        const auto c = read_checkpoint(path);
        Array values({static_cast<py::ssize_t>(c.ny), static_cast<py::ssize_t>(c.nx)});
        std::memcpy(values.mutable_data(), c.values.data(), c.values.size() * sizeof(double));
        return py::make_tuple(c.t, values);
      },
      "path"_a, "Returns (t, values) with values of shape (ny, nx)");
  m.def(
      "write_checkpoint",
      [](const std::filesystem::path& path, const Array& values, double t) {
        if (values.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
        Checkpoint c;
        c.ny = static_cast<std::uint64_t>(values.shape(0));
        c.nx = static_cast<std::uint64_t>(values.shape(1));
        c.t = t;
        c.values.assign(values.data(), values.data() + values.size());
        write_checkpoint(path, c);
      },
      "path"_a, "values"_a, "t"_a);

  m.attr("CSV_HEADER") = csv_header;
  m.def(
      "read_csv",
      [](const std::filesystem::path& path) {
        py::list rows;
        for (const auto& r : read_csv(path)) rows.append(record_dict(r));
        return rows;
      },
      "path"_a);

  m.def(
      "run",
      [](std::optional<std::filesystem::path> config, std::vector<std::string> overrides) {
        const RunConfig cfg = config_from(config, overrides);
        const RunResult res = [&] {
          py::gil_scoped_release release;
          return run_simulation(cfg, true);
        }();
        py::list records;
        for (const auto& r : res.records) records.append(record_dict(r));
        return py::dict("records"_a = records, "retried_steps"_a = res.retried_steps,
                        "final_state"_a = to_array(res.final_state), "manifest"_a = cfg.output.manifest);
      },
      "config"_a = py::none(), "overrides"_a = std::vector<std::string>{},
      "Runs a simulation and writes its CSV, checkpoints and manifest");
  m.def(
      "check",
      [](const std::filesystem::path& csv, std::optional<std::filesystem::path> config,
         std::vector<std::string> overrides) {
        const auto rep = replay_monitors(read_csv(csv), config_from(config, overrides));
        return py::dict("ok"_a = rep.ok(), "max_mass_drift"_a = rep.max_mass_drift,
                        "energy_violations"_a = rep.energy_violations,
                        "recursion_violations"_a = rep.recursion_violations, "c_k"_a = rep.c_k,
                        "dissipation_holds"_a = rep.dissipation ? py::object(py::bool_(rep.dissipation->holds))
                                                                : py::object(py::none()));
      },
      "csv"_a, "config"_a = py::none(), "overrides"_a = std::vector<std::string>{});

  m.def(
      "uniform_gronwall_check",
      [](std::vector<double> k, std::vector<double> xi, std::vector<double> zeta, std::vector<double> eta,
         std::size_t n_star, std::size_t N, double vartheta) {
        const auto r = uniform_gronwall_check(k, xi, zeta, eta, n_star, N, vartheta);
        return py::dict("passed"_a = r.passed, "premises_hold"_a = r.premises_hold,
                        "conclusion_holds"_a = r.conclusion_holds, "bound"_a = r.bound,
                        "max_observed"_a = r.max_observed, "premise_violations"_a = r.premise_violations);
      },
      "k"_a, "xi"_a, "zeta"_a, "eta"_a, "n_star"_a, "N"_a, "vartheta"_a);
}
