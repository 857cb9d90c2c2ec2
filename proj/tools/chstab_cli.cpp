// chstab: run the implicit Euler / spectral Cahn-Hilliard solver and inspect
// its stability diagnostics.
//
// Exit codes: 0 success, 1 unexpected error, 2 solver abort, 3 config error,
// 4 monitor violation in `check`.

#include "chstab/checkpoint.hpp"
#include "chstab/config.hpp"
#include "chstab/diagnostics_csv.hpp"
#include "chstab/potential.hpp"
#include "chstab/schedule.hpp"
#include "chstab/simulation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_abort = 2;
constexpr int exit_config = 3;
constexpr int exit_monitor = 4;

using chstab::format_double;

chstab::RunConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  chstab::RunConfig cfg = path.empty() ? chstab::RunConfig{} : chstab::load_config(path);
  for (const auto& o : overrides) chstab::apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

void print_optional(const char* name, const std::optional<double>& v) {
  std::cout << name << " = " << (v ? format_double(*v) : std::string("unbounded")) << '\n';
}

int cmd_run(const std::string& config, const std::vector<std::string>& overrides) {
  const auto cfg = load(config, overrides);
  const auto result = chstab::run_simulation(cfg);
  std::cout << "accepted_steps = " << result.records.size() << '\n'
            << "retried_steps = " << result.retried_steps << '\n'
            << "csv = " << cfg.output.csv.string() << '\n'
            << "manifest = " << cfg.output.manifest.string() << '\n';
  if (!result.records.empty()) {
    const auto& last = result.records.back();
    std::cout << "t_final = " << format_double(last.t) << '\n' << "energy_final = " << format_double(last.energy) << '\n';
  }
  return exit_ok;
}

int cmd_bounds(const std::string& config, const std::vector<std::string>& overrides) {
  const auto cfg = load(config, overrides);
  const auto b = chstab::configured_bounds(cfg);
  const auto report = chstab::validate_schedule(cfg.schedule, cfg.potential(), cfg.epsilon);
  std::cout << "gamma1 = " << format_double(b.gamma1) << '\n'
            << "c1 = " << format_double(b.c1) << '\n'
            << "c2 = " << format_double(b.c2) << '\n'
            << "c3 = " << format_double(b.c3) << '\n'
            << "c = " << format_double(b.c) << '\n'
            << "C1_alpha = " << format_double(b.C1_alpha) << '\n'
            << "rho_0k = " << format_double(b.rho_0k) << '\n'
            << "rho_0 = " << format_double(b.rho_0) << '\n';
  print_optional("rho_hat_0", b.rho_hat_0);
  print_optional("E_hat_0", b.E_hat_0);
  print_optional("n0_time", b.n0_time);
  std::cout << "k_sup = " << format_double(report.k_sup) << '\n';
  print_optional("k_energy", report.bounds.k_energy);
  print_optional("k_potential", report.bounds.k_potential);
  std::cout << "guarantees =";
  for (const auto& s : report.satisfied) std::cout << ' ' << s;
  std::cout << '\n';
  return exit_ok;
}

int cmd_check(const std::string& csv, const std::string& config, const std::vector<std::string>& overrides) {
  const auto cfg = load(config, overrides);
  const auto records = chstab::read_csv(csv);
  const auto rep = chstab::replay_monitors(records, cfg);
  std::cout << "records = " << records.size() << '\n'
            << "mass_drift = " << format_double(rep.max_mass_drift) << (rep.mass_conserved ? " ok" : " VIOLATED")
            << '\n'
            << "t_increasing = " << (rep.t_increasing ? "ok" : "VIOLATED") << '\n'
            << "energy_decay = " << (rep.energy_violations.empty() ? "ok" : "VIOLATED");
  for (long s : rep.energy_violations) std::cout << ' ' << s;
  std::cout << '\n' << "c_k = " << format_double(rep.c_k) << '\n';
  if (rep.dissipation)
    std::cout << "summed_dissipation = " << format_double(rep.dissipation->lhs)
              << " <= " << format_double(rep.dissipation->rhs) << " + " << format_double(rep.dissipation->slack)
              << (rep.dissipation->holds ? " ok" : " VIOLATED") << '\n';
  std::cout << "hminus1_recursion = " << (rep.recursion_violations.empty() ? "ok" : "VIOLATED");
  for (long s : rep.recursion_violations) std::cout << ' ' << s;
  std::cout << '\n';
  for (const auto& note : rep.notes) std::cout << "note: " << note << '\n';
  return rep.ok() ? exit_ok : exit_monitor;
}

int cmd_constants(const std::vector<double>& coeffs, double c0, double eta, std::optional<double> epsilon) {
  const chstab::PolynomialPotential P(coeffs);
  const auto k = chstab::assumption_constants(P, c0, eta);
  std::cout << "p = " << P.p() << '\n'
            << "c0 = " << format_double(k.c0) << '\n'
            << "c1 = " << format_double(k.c1) << '\n'
            << "c2 = " << format_double(k.c2) << '\n'
            << "c3 = " << format_double(k.c3) << '\n'
            << "c = " << format_double(k.c) << '\n'
            << "eta = " << format_double(k.eta) << '\n';
  if (epsilon) {
    const auto b = chstab::step_bounds(P, *epsilon);
    print_optional("k_energy", b.k_energy);
    print_optional("k_potential", b.k_potential);
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit Euler / Fourier spectral Cahn-Hilliard solver with stability diagnostics"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  std::string csv;

  auto* run = app.add_subcommand("run", "Run a simulation and write CSV, checkpoints and manifest");
  run->add_option("--config", config, "Configuration file (flat TOML)");
  run->add_option("--override", overrides, "key=value, applied after the file")->take_all();

  auto* bounds = app.add_subcommand("bounds", "Print the a priori radii and step-size thresholds");
  bounds->add_option("--config", config, "Configuration file (flat TOML)");
  bounds->add_option("--override", overrides, "key=value, applied after the file")->take_all();

  auto* check = app.add_subcommand("check", "Replay the inequality monitors over a finished run");
  check->add_option("--csv", csv, "Diagnostics CSV written by run")->required();
  check->add_option("--config", config, "Configuration the run used");
  check->add_option("--override", overrides, "key=value, applied after the file")->take_all();

  std::vector<double> coeffs{-1.0, 0.0, 1.0};
  double c0 = 0.25;
  double eta = 1.0;
  std::optional<double> epsilon;
  auto* constants = app.add_subcommand("constants", "Print the growth constants of a polynomial nonlinearity");
  constants->add_option("--coeffs", coeffs, "a1 a2 ... a_{2p-1} of f(u) = sum a_j u^j")->expected(3, 99);
  constants->add_option("--c0", c0, "Coercivity constant c0");
  constants->add_option("--eta", eta, "Growth constant eta");
  constants->add_option("--epsilon", epsilon, "Also print step-size thresholds for this epsilon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run) return cmd_run(config, overrides);
    if (*bounds) return cmd_bounds(config, overrides);
    if (*check) return cmd_check(csv, config, overrides);
    if (*constants) return cmd_constants(coeffs, c0, eta, epsilon);
  } catch (const chstab::SolverAbort& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_abort;
  } catch (const chstab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const chstab::CsvError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_ok;
}
