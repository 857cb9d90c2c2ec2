#pragma once

#include "chstab/potential.hpp"
#include "chstab/spectral.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace chstab {

/// E(u) = eps/2 |u|_1^2 + h^2 sum F(u_ij).
double energy(const Field& u, double epsilon, const PolynomialPotential& P);

/// omega = eps A u + f(u).
Field chemical_potential(const Field& u, double epsilon, const PolynomialPotential& P);

/// Per-step scalars of a trajectory. `du_*` measure u^{n+1} - u^n.
struct DiagnosticsRecord {
  long step = 0;
  double t = 0.0;
  double k_n = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double omega_h1 = 0.0;
  double hm1 = 0.0;
  double du_l2 = 0.0;
  double du_hm1 = 0.0;
  int solver_iters = 0;
  double residual = 0.0;
};

/// Record for state u reached at time t by a step of size k from u_prev.
/// Pass u_prev == nullptr for the initial state (increments are then zero).
DiagnosticsRecord make_record(long step, double t, double k, const Field& u, const Field& omega, const Field* u_prev,
                              double epsilon, const PolynomialPotential& P, int solver_iters = 0,
                              double residual = 0.0);

/// Step numbers where E(u^{n+1}) > E(u^n) + 10 tol (1 + |E(u^n)|). The first
/// record is compared against `initial_energy` when one is given.
std::vector<long> check_energy_decay(std::span<const DiagnosticsRecord> records, double tol,
                                     std::optional<double> initial_energy = std::nullopt);

/// (1 - c_k) sum_j k_j |(u^{j+1} - u^j)/k_j|_{-1}^2 + E(u^{n+1}) <= E(u^0) at the
/// last record. The slack is the sum of the per-step energy slacks.
struct DissipationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};

DissipationCheck check_summed_dissipation(std::span<const DiagnosticsRecord> records, double c_k,
                                          double initial_energy, double tol);

/// One-step H^{-1} recursion
///   1/2 (|u^{n+1}|_{-1}^2 - |u^n|_{-1}^2) + k eps / (2 gamma_1^2) |u^{n+1}|_{-1}^2 <= C_1 k
/// on the mean-free parts, with slack 1e-9 (1 + |lhs|).
bool check_hminus1_recursion(double hm1_prev, double hm1_next, double k, double epsilon, double gamma1,
                             double C1_alpha);
bool check_hminus1_recursion(const Field& u_n, const Field& u_next, double k, double epsilon, double gamma1,
                             double C1_alpha);

/// Computable radii and times of the H^{-1} analysis. Fields that involve
/// 8 eps / c^2 are empty when c = 0 (no finite bound).
struct TheoryBounds {
  double gamma1 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c = 0.0;
  double C1_alpha = 0.0;
  /// sqrt(2 C_1 (gamma_1^2 + eps k) / eps)
  double rho_0k = 0.0;
  /// k -> 0 limit gamma_1 sqrt(2 C_1 / eps)
  double rho_0 = 0.0;
  /// sqrt(2 C_1) (gamma_1^2/eps + 8 eps/c^2)^{1/2}
  std::optional<double> rho_hat_0;
  /// max(R, rho_hat_0)
  std::optional<double> E_hat_0;
  /// (gamma_1^2/eps + 8 eps/c^2) ln(R^2 / rho_hat_0^2), clamped at 0
  std::optional<double> n0_time;
};

/// alpha bounds |m(u_0)|, R bounds |u_0 - m(u_0)|_{-1}. For alpha = 0 the
/// c_2 alpha term is dropped; otherwise eta defaults to (p - 3/2) / alpha.
TheoryBounds theory_bounds(const PolynomialPotential& P, double epsilon, double alpha, double k_sup,
                           const Grid2D& grid, double c0, std::optional<double> eta, double R);

/// Time after which |u^n - m|_{-1} <= rho is guaranteed when |u_0 - m|_{-1} <= R:
/// (gamma_1^2 + eps k)/eps [ln R^2 - ln(rho^2 - rho_0k^2)], clamped at 0.
/// Requires rho > rho_0k.
double absorbing_time(double gamma1, double epsilon, double k_sup, double rho_0k, double R, double rho);

}  // namespace chstab
