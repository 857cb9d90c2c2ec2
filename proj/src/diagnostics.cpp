#include "chstab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chstab {

double energy(const Field& u, double epsilon, const PolynomialPotential& P) {
  const double h = u.grid().spacing();
  double bulk = 0.0;
  for (double v : u.values()) bulk += P.F(v);
  const double h1 = seminorm(u, 1);
  return 0.5 * epsilon * h1 * h1 + h * h * bulk;
}

Field chemical_potential(const Field& u, double epsilon, const PolynomialPotential& P) {
  Field omega = apply_A_power(u, 1.0);
  for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = epsilon * omega[i] + P.f(u[i]);
  return omega;
}

DiagnosticsRecord make_record(long step, double t, double k, const Field& u, const Field& omega, const Field* u_prev,
                              double epsilon, const PolynomialPotential& P, int solver_iters, double residual) {
  DiagnosticsRecord r;
  r.step = step;
  r.t = t;
  r.k_n = k;
  r.mass = mean(u);
  const auto u_hat = forward(u);
  r.h1 = seminorm(u_hat, 1);
  r.h2 = seminorm(u_hat, 2);
  r.h3 = seminorm(u_hat, 3);
  r.hm1 = seminorm(u_hat, -1);
  double bulk = 0.0;
  for (double v : u.values()) bulk += P.F(v);
  const double h = u.grid().spacing();
  r.energy = 0.5 * epsilon * r.h1 * r.h1 + h * h * bulk;
  r.omega_h1 = seminorm(omega, 1);
  if (u_prev) {
    const Field du = u - *u_prev;
    r.du_l2 = norm_l2(du);
    r.du_hm1 = seminorm(du, -1);
  }
  r.solver_iters = solver_iters;
  r.residual = residual;
  return r;
}

std::vector<long> check_energy_decay(std::span<const DiagnosticsRecord> records, double tol,
                                     std::optional<double> initial_energy) {
  std::vector<long> violations;
  auto violated = [tol](double before, double after) {
    return after > before + 10.0 * tol * (1.0 + std::abs(before));
  };
  if (initial_energy && !records.empty() && violated(*initial_energy, records.front().energy))
    violations.push_back(records.front().step);
  for (std::size_t i = 1; i < records.size(); ++i)
    if (violated(records[i - 1].energy, records[i].energy)) violations.push_back(records[i].step);
  return violations;
}

DissipationCheck check_summed_dissipation(std::span<const DiagnosticsRecord> records, double c_k,
                                          double initial_energy, double tol) {
  if (!(c_k >= 0.0 && c_k <= 1.0)) throw std::invalid_argument("c_k must lie in [0, 1]");
  DissipationCheck out;
  out.rhs = initial_energy;
  if (records.empty()) {
    out.holds = true;
    return out;
  }
  double sum = 0.0;
  double previous_energy = initial_energy;
  for (const auto& r : records) {
    // k_j |du / k_j|_{-1}^2 = |du|_{-1}^2 / k_j
    sum += r.du_hm1 * r.du_hm1 / r.k_n;
    out.slack += 10.0 * tol * (1.0 + std::abs(previous_energy));
    previous_energy = r.energy;
  }
  out.lhs = (1.0 - c_k) * sum + records.back().energy;
  out.holds = out.lhs <= out.rhs + out.slack;
  return out;
}

bool check_hminus1_recursion(double hm1_prev, double hm1_next, double k, double epsilon, double gamma1,
                             double C1_alpha) {
  const double lhs = 0.5 * (hm1_next * hm1_next - hm1_prev * hm1_prev) +
                     k * epsilon / (2.0 * gamma1 * gamma1) * hm1_next * hm1_next;
  const double rhs = C1_alpha * k;
  return lhs <= rhs + 1e-9 * (1.0 + std::abs(lhs));
}

bool check_hminus1_recursion(const Field& u_n, const Field& u_next, double k, double epsilon, double gamma1,
                             double C1_alpha) {
  return check_hminus1_recursion(seminorm(u_n, -1), seminorm(u_next, -1), k, epsilon, gamma1, C1_alpha);
}

TheoryBounds theory_bounds(const PolynomialPotential& P, double epsilon, double alpha, double k_sup,
                           const Grid2D& grid, double c0, std::optional<double> eta, double R) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
  if (!(k_sup >= 0.0)) throw std::invalid_argument("k_sup must be nonnegative");
  if (!(R >= 0.0)) throw std::invalid_argument("R must be nonnegative");

  double eta_used = 1.0;
  if (alpha > 0.0) {
    eta_used = eta ? *eta : (P.p() - 1.5) / alpha;
    if (!(eta_used > 0.0)) throw std::invalid_argument("eta must be positive");
  } else if (eta) {
    eta_used = *eta;
  }
  const auto constants = assumption_constants(P, c0, eta_used);

  TheoryBounds b;
  b.gamma1 = poincare_gamma1(grid);
  b.c1 = constants.c1;
  b.c2 = constants.c2;
  b.c3 = constants.c3;
  b.c = constants.c;
  const double c2_term = alpha > 0.0 ? constants.c2 * alpha : 0.0;
  b.C1_alpha = (constants.c1 + c2_term + 2.0 * constants.c3) * grid.area();

  const double g2 = b.gamma1 * b.gamma1;
  b.rho_0k = std::sqrt(2.0 * b.C1_alpha * (g2 + epsilon * k_sup) / epsilon);
  b.rho_0 = b.gamma1 * std::sqrt(2.0 * b.C1_alpha / epsilon);

  if (constants.c > 0.0) {
    const double horizon = g2 / epsilon + 8.0 * epsilon / (constants.c * constants.c);
    b.rho_hat_0 = std::sqrt(2.0 * b.C1_alpha) * std::sqrt(horizon);
    b.E_hat_0 = std::max(R, *b.rho_hat_0);
    if (*b.rho_hat_0 > 0.0 && R > 0.0)
      b.n0_time = std::max(0.0, horizon * std::log(R * R / (*b.rho_hat_0 * *b.rho_hat_0)));
    else
      b.n0_time = 0.0;
  }
  return b;
}

double absorbing_time(double gamma1, double epsilon, double k_sup, double rho_0k, double R, double rho) {
  if (!(rho > rho_0k)) throw std::invalid_argument("target radius must exceed rho_0k");
  if (R <= 0.0) return 0.0;
  const double rate = (gamma1 * gamma1 + epsilon * k_sup) / epsilon;
  return std::max(0.0, rate * (std::log(R * R) - std::log(rho * rho - rho_0k * rho_0k)));
}

}  // namespace chstab
