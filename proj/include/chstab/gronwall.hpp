#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chstab {

/// Result of checking the discrete uniform Gronwall estimate on concrete
/// sequences. Premise failures are reported separately from a failure of the
/// conclusion; `passed` requires both.
struct GronwallReport {
  double k_sup = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double r_hat = 0.0;
  double c_vartheta = 0.0;
  double bound = 0.0;
  double max_observed = 0.0;
  std::vector<std::string> premise_violations;
  std::vector<std::size_t> conclusion_violations;
  bool premises_hold = false;
  bool conclusion_holds = false;
  bool passed = false;
};

/// -ln(1 - vartheta) / vartheta, the least c with 1/(1-x) <= exp(c x) on (0, vartheta].
double default_c_vartheta(double vartheta);

/// Sequences are indexed n = 0 .. M-1 and k_seq[n] is the step entering the
/// recursion at index n:
///   (1 - k_n eta^n) xi^n <= xi^{n-1} + k_n zeta^n,   k_sup eta^n <= vartheta,   n >= n_star.
/// Window sums over every N-step window starting at n' >= n_star give
///   a1 = max sum_{n'+1}^{n'+N} k eta,  a2 = max sum_{n'+1}^{n'+N} k zeta,
///   a3 = max sum_{n'}^{n'+N-1} k xi,   r_hat = min sum_{n'}^{n'+N-1} k,
/// and the conclusion xi^n <= (a2 + a3 / r_hat) exp(c_vartheta a1) is checked
/// for every n >= n_star + N.
GronwallReport uniform_gronwall_check(std::span<const double> k_seq, std::span<const double> xi_seq,
                                      std::span<const double> zeta_seq, std::span<const double> eta_seq,
                                      std::size_t n_star, std::size_t N, double vartheta,
                                      std::optional<double> c_vartheta = std::nullopt);

}  // namespace chstab
