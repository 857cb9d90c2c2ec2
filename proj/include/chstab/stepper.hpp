#pragma once

#include "chstab/potential.hpp"
#include "chstab/spectral.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace chstab {

enum class SolverMode { fixed_point, newton };

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& name);

struct SolverConfig {
  SolverMode mode = SolverMode::fixed_point;
  /// Tolerance on the scaled residual of the step equation (see StepOutcome).
  double tol = 1e-10;
  int max_iter = 200;
  /// Relative tolerance and iteration cap of the inner GMRES solve (newton mode).
  double linear_tol = 1e-8;
  int linear_max_iter = 400;
  int gmres_restart = 50;
  /// Linear stabilisation S of the fixed-point map; nullopt picks S from the
  /// range of f' over the current state, 0 gives the plain iteration.
  std::optional<double> stabilization;
  /// Start the nonlinear solve from a linear extrapolation of the last two
  /// states (used by the run loop).
  bool predictor = false;
  /// Apply the 2/3 rule to the nonlinear term.
  bool dealias = false;

  void validate() const;
};

struct StepOutcome {
  Field u_next;
  Field omega_next;
  int iters = 0;
  /// ||u + k eps A^2 u + k A f(u) - u_n||_h / max(1, ||u_n||_h). The solvers
/// stop once this is at most tol min(1, ||u_n||_h) (tol when u_n = 0).
  double final_residual = 0.0;
  double k_used = 0.0;
};

struct SolveResult {
  Field u;
  int iters = 0;
  double residual = 0.0;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(int iters, double residual);
  int iters() const { return iters_; }
  double residual() const { return residual_; }

 private:
  int iters_;
  double residual_;
};

class LinearSolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One implicit Euler step: solves u + k eps A^2 u + k A f(u) = u_n and
/// evaluates omega = eps A u + f(u) at the new state.
StepOutcome step(const Field& u_n, double k, double epsilon, const PolynomialPotential& P,
                 const SolverConfig& cfg, const Field* initial_guess = nullptr);

/// u^{m+1} = (I + k eps A^2 + k S A)^{-1} (u_n - k A (f(u^m) - S u^m)).
SolveResult fixed_point_solve(const Field& u_n, double k, double epsilon, const PolynomialPotential& P,
                              const SolverConfig& cfg, const Field* initial_guess = nullptr);

/// Damped Newton with GMRES inner solves right-preconditioned by (I + k eps A^2)^{-1}.
SolveResult newton_solve(const Field& u_n, double k, double epsilon, const PolynomialPotential& P,
                         const SolverConfig& cfg, const Field* initial_guess = nullptr);

/// Relative residual of the step equation at u.
double step_residual(const Field& u, const Field& u_n, double k, double epsilon, const PolynomialPotential& P,
                     bool dealias = false);

}  // namespace chstab
