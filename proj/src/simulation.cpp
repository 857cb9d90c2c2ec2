#include "chstab/simulation.hpp"

#include "chstab/checkpoint.hpp"
#include "chstab/diagnostics_csv.hpp"
#include "chstab/initial_condition.hpp"
#include "chstab/schedule.hpp"
#include "chstab/stepper.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

namespace chstab {

SolverAbort::SolverAbort(double t, double k, const std::string& cause)
    : std::runtime_error("solver aborted at t = " + format_double(t) + " with k = " + format_double(k) + ": " +
                         cause),
      t_(t),
      k_(k) {}

namespace {

// |m(u0)|, with roundoff-level means (e.g. 1e-18 for sin 4x cos 3y) read as the mean-free case.
double mass_alpha(double m) { return std::abs(m) <= 1e-12 ? 0.0 : std::abs(m); }

std::filesystem::path snapshot_path(const RunConfig& cfg, const std::string& tag) {
  return cfg.output.checkpoint_dir / (cfg.output.prefix + "_" + tag + ".bin");
}

std::string step_tag(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06ld", step);
  return buf;
}

struct Attempt {
  std::optional<StepOutcome> outcome;
  std::string error;
};

Attempt try_step(const Field& u, double k, double epsilon, const PolynomialPotential& P, const SolverConfig& solver,
                 const Field* guess) {
  Attempt a;
  try {
    StepOutcome out = step(u, k, epsilon, P, solver, guess);
    if (!out.u_next.all_finite())
      a.error = "non-finite state";
    else
      a.outcome = std::move(out);
  } catch (const NonConvergence& e) {
    a.error = e.what();
  } catch (const LinearSolveFailure& e) {
    a.error = e.what();
  }
  return a;
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg, bool write_outputs) {
  cfg.validate();
  const auto P = cfg.potential();
  const auto grid = Grid2D::make(cfg.n, cfg.L);
  Field u = initial_condition(cfg.ic, grid, cfg.epsilon);

  RunResult result{.initial = {}, .records = {}, .final_state = u, .snapshots = {}, .retried_steps = 0};
  result.initial = make_record(0, 0.0, 0.0, u, chemical_potential(u, cfg.epsilon, P), nullptr, cfg.epsilon, P);

  auto snapshot = [&](long step_no, double t, const std::string& tag, const Field& state) {
    if (!write_outputs) return;
    const auto path = snapshot_path(cfg, tag);
    write_checkpoint(path, state, t);
    result.snapshots.push_back({step_no, t, path});
  };
  snapshot(0, 0.0, step_tag(0), u);

  std::optional<Field> u_prev;
  double k_prev = 0.0;
  double t = 0.0;
  long step_no = 0;

  auto accept = [&](StepOutcome& out, double k, double t_next) {
    ++step_no;
    result.records.push_back(make_record(step_no, t_next, k, out.u_next, out.omega_next, &u, cfg.epsilon, P,
                                         out.iters, out.final_residual));
    u_prev = std::move(u);
    u = std::move(out.u_next);
    k_prev = k;
    t = t_next;
    if (cfg.snapshot_every > 0 && step_no % cfg.snapshot_every == 0) snapshot(step_no, t, step_tag(step_no), u);
  };

  auto guess_for = [&](double k) -> std::optional<Field> {
    if (!cfg.solver.predictor || !u_prev) return std::nullopt;
    Field g = u - *u_prev;
    g *= k / k_prev;
    g += u;
    return g;
  };

  for (const auto& ts : cfg.schedule.steps()) {
    const auto guess = guess_for(ts.k);
    Attempt a = try_step(u, ts.k, cfg.epsilon, P, cfg.solver, guess ? &*guess : nullptr);
    if (a.outcome) {
      accept(*a.outcome, ts.k, ts.t);
      continue;
    }

    ++result.retried_steps;
    const double t_start = t;
    std::string last_error = a.error;
    bool done = false;
    for (int j = 1; j <= 4 && !done; ++j) {
      const int m = 1 << j;
      const double k_sub = ts.k / m;
      std::vector<StepOutcome> subs;
      Field w = u;
      for (int i = 0; i < m; ++i) {
        Attempt s = try_step(w, k_sub, cfg.epsilon, P, cfg.solver, nullptr);
        if (!s.outcome) {
          last_error = s.error;
          break;
        }
        w = s.outcome->u_next;
        subs.push_back(std::move(*s.outcome));
      }
      if (subs.size() != static_cast<std::size_t>(m)) continue;
      for (int i = 0; i < m; ++i) {
        const double t_next = i + 1 == m ? ts.t : t_start + (i + 1) * k_sub;
        accept(subs[static_cast<std::size_t>(i)], k_sub, t_next);
      }
      done = true;
    }
    if (!done) throw SolverAbort(t_start, ts.k, last_error);
  }

  result.final_state = u;
  if (write_outputs) {
    write_csv(cfg.output.csv, result.records);
    snapshot(step_no, t, "final", u);

    nlohmann::json manifest;
    manifest["csv"] = cfg.output.csv.string();
    manifest["ic"] = cfg.ic.preset;
    manifest["n"] = cfg.n;
    manifest["L"] = cfg.L;
    manifest["accepted_steps"] = result.records.size();
    manifest["retried_steps"] = result.retried_steps;
    manifest["config"] = to_toml(cfg);
    auto& list = manifest["checkpoints"] = nlohmann::json::array();
    for (const auto& s : result.snapshots)
      list.push_back({{"step", s.step}, {"t", s.t}, {"path", s.path.string()}});
    manifest["final_checkpoint"] = result.snapshots.back().path.string();
    if (cfg.output.manifest.has_parent_path()) std::filesystem::create_directories(cfg.output.manifest.parent_path());
    std::ofstream out(cfg.output.manifest, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + cfg.output.manifest.string() + " for writing");
    out << manifest.dump(2) << '\n';
  }
  return result;
}

TheoryBounds configured_bounds(const RunConfig& cfg) {
  cfg.validate();
  const auto P = cfg.potential();
  const auto grid = Grid2D::make(cfg.n, cfg.L);
  const Field u0 = initial_condition(cfg.ic, grid, cfg.epsilon);
  const double alpha = mass_alpha(mean(u0));
  const double R = cfg.analysis.R ? *cfg.analysis.R : seminorm(remove_mean(u0), -1);
  return theory_bounds(P, cfg.epsilon, alpha, cfg.schedule.k_sup(), *grid, cfg.analysis.c0, cfg.analysis.eta, R);
}

bool MonitorReport::ok() const {
  return mass_conserved && t_increasing && energy_violations.empty() && (!dissipation || dissipation->holds) &&
         recursion_violations.empty();
}

MonitorReport replay_monitors(const std::vector<DiagnosticsRecord>& records, const RunConfig& cfg) {
  cfg.validate();
  MonitorReport rep;
  if (records.empty()) {
    rep.notes.push_back("no records");
    return rep;
  }
  const auto P = cfg.potential();
  const auto grid = Grid2D::make(cfg.n, cfg.L);

  const double m0 = records.front().mass;
  double k_sup = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    rep.max_mass_drift = std::max(rep.max_mass_drift, std::abs(records[i].mass - m0));
    if (i > 0 && !(records[i].t > records[i - 1].t)) rep.t_increasing = false;
    k_sup = std::max(k_sup, records[i].k_n);
  }
  rep.mass_conserved = rep.max_mass_drift <= 1e-11;

  rep.energy_violations = check_energy_decay(records, cfg.solver.tol);

  const double alpha = mass_alpha(m0);
  const double R = cfg.analysis.R ? *cfg.analysis.R : records.front().hm1;
  rep.bounds = theory_bounds(P, cfg.epsilon, alpha, k_sup, *grid, cfg.analysis.c0, cfg.analysis.eta, R);

  const double c = rep.bounds.c;
  rep.c_k = c * c * k_sup / (8.0 * cfg.epsilon);
  const std::span<const DiagnosticsRecord> after_first(records.data() + 1, records.size() - 1);
  if (rep.c_k <= 1.0)
    rep.dissipation = check_summed_dissipation(after_first, rep.c_k, records.front().energy, cfg.solver.tol);
  else
    rep.notes.push_back("k exceeds 8 eps / c^2; summed dissipation not applicable");

  for (std::size_t i = 1; i < records.size(); ++i)
    if (!check_hminus1_recursion(records[i - 1].hm1, records[i].hm1, records[i].k_n, cfg.epsilon, rep.bounds.gamma1,
                                 rep.bounds.C1_alpha))
      rep.recursion_violations.push_back(records[i].step);
  return rep;
}

}  // namespace chstab
