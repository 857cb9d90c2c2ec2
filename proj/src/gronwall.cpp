#include "chstab/gronwall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chstab {

double default_c_vartheta(double vartheta) {
  if (!(vartheta > 0.0 && vartheta < 1.0)) throw std::invalid_argument("vartheta must lie in (0, 1)");
  return -std::log1p(-vartheta) / vartheta;
}

GronwallReport uniform_gronwall_check(std::span<const double> k_seq, std::span<const double> xi_seq,
                                      std::span<const double> zeta_seq, std::span<const double> eta_seq,
                                      std::size_t n_star, std::size_t N, double vartheta,
                                      std::optional<double> c_vartheta) {
  const std::size_t M = k_seq.size();
  if (xi_seq.size() != M || zeta_seq.size() != M || eta_seq.size() != M)
    throw std::invalid_argument("Gronwall sequences must have equal length");
  if (N == 0) throw std::invalid_argument("window length N must be positive");
  if (n_star == 0) throw std::invalid_argument("n_star must be at least 1 (the recursion uses xi^{n-1})");
  if (n_star + N >= M) throw std::invalid_argument("sequences too short for a window of length N after n_star");

  GronwallReport rep;
  rep.c_vartheta = c_vartheta ? *c_vartheta : default_c_vartheta(vartheta);

  auto premise = [&rep](const std::string& what, std::size_t n) {
    std::ostringstream os;
    os << what << " at n = " << n;
    rep.premise_violations.push_back(os.str());
  };

  for (std::size_t n = 0; n < M; ++n)
    if (k_seq[n] < 0.0 || xi_seq[n] < 0.0 || zeta_seq[n] < 0.0 || eta_seq[n] < 0.0) premise("negative entry", n);

  for (std::size_t n = n_star; n < M; ++n) rep.k_sup = std::max(rep.k_sup, k_seq[n]);
  if (!(vartheta > 0.0 && vartheta < 1.0)) rep.premise_violations.push_back("vartheta outside (0, 1)");

  constexpr double rel = 1e-12;
  for (std::size_t n = n_star; n < M; ++n) {
    if (rep.k_sup * eta_seq[n] > vartheta * (1.0 + rel)) premise("k eta exceeds vartheta", n);
    const double lhs = (1.0 - k_seq[n] * eta_seq[n]) * xi_seq[n];
    const double rhs = xi_seq[n - 1] + k_seq[n] * zeta_seq[n];
    if (lhs > rhs + rel * (std::abs(lhs) + std::abs(rhs))) premise("recursion inequality fails", n);
  }

  rep.r_hat = std::numeric_limits<double>::infinity();
  for (std::size_t start = n_star; start + N < M; ++start) {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, len = 0.0;
    for (std::size_t n = start + 1; n <= start + N; ++n) {
      s1 += k_seq[n] * eta_seq[n];
      s2 += k_seq[n] * zeta_seq[n];
    }
    for (std::size_t n = start; n < start + N; ++n) {
      s3 += k_seq[n] * xi_seq[n];
      len += k_seq[n];
    }
    rep.a1 = std::max(rep.a1, s1);
    rep.a2 = std::max(rep.a2, s2);
    rep.a3 = std::max(rep.a3, s3);
    rep.r_hat = std::min(rep.r_hat, len);
  }
  if (!(rep.r_hat > 0.0)) rep.premise_violations.push_back("window length r_hat is not positive");
  rep.premises_hold = rep.premise_violations.empty();

  rep.bound = rep.r_hat > 0.0 ? (rep.a2 + rep.a3 / rep.r_hat) * std::exp(rep.c_vartheta * rep.a1)
                              : std::numeric_limits<double>::infinity();
  for (std::size_t n = n_star + N; n < M; ++n) {
    rep.max_observed = std::max(rep.max_observed, xi_seq[n]);
    if (xi_seq[n] > rep.bound * (1.0 + rel)) rep.conclusion_violations.push_back(n);
  }
  rep.conclusion_holds = rep.conclusion_violations.empty();
  rep.passed = rep.premises_hold && rep.conclusion_holds;
  return rep;
}

}  // namespace chstab
