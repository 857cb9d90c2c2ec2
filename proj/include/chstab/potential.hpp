#pragma once

#include <optional>
#include <vector>

namespace chstab {

/// Polynomial nonlinearity f(v) = sum_{j=1}^{2p-1} a_j v^j with primitive
/// F(v) = sum_{j=2}^{2p} b_j v^j, j b_j = a_{j-1}, so that F(0) = 0.
///
/// The leading coefficient a_{2p-1} must be positive. The identically zero
/// coefficient list is also accepted; it models the linear (f = 0) problem.
class PolynomialPotential {
 public:
  /// `coeffs` holds a_1 ... a_{2p-1}; its length must be odd and at least 3.
  explicit PolynomialPotential(std::vector<double> coeffs);

  /// f = 0 with the coefficient layout of degree parameter p.
  static PolynomialPotential zero(int p = 2);
  /// The double-well nonlinearity f = u^3 - u.
  static PolynomialPotential double_well();

  int p() const { return p_; }
  bool is_zero() const { return zero_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  /// b_2 ... b_{2p}.
  std::vector<double> primitive_coeffs() const;

  double f(double v) const;
  double F(double v) const;
  double df(double v) const;   // f' = F''
  double d2f(double v) const;  // f'' = F'''

  /// Ascending coefficient vectors including the constant term.
  const std::vector<double>& f_poly() const { return f_poly_; }
  const std::vector<double>& F_poly() const { return F_poly_; }

  /// 1 + 2 sum|a_j| / a_{2p-1}; every extremum the constants need lies inside.
  double root_radius() const;

 private:
  std::vector<double> coeffs_;
  std::vector<double> f_poly_;
  std::vector<double> df_poly_;
  std::vector<double> d2f_poly_;
  std::vector<double> F_poly_;
  int p_ = 2;
  bool zero_ = false;
};

/// Growth and coercivity constants of f and F:
///   f(v) v >= p c0 v^{2p} - c1
///   |f(v)| <= eta c0 v^{2p} + c2
///   c0/2 v^{2p} - c3 <= F(v) <= 3c0/2 v^{2p} + c3
///   F''(v) >= -c
struct AssumptionConstants {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c = 0.0;
  double eta = 0.0;
};

/// Smallest c >= 0 with F'' >= -c on the real line.
/// Throws std::invalid_argument if F'' is unbounded below.
double concavity_bound(const PolynomialPotential& P);

/// Throws std::invalid_argument for c0 <= 0 or eta <= 0, and
/// std::domain_error("unbounded") when a defining supremum is infinite.
AssumptionConstants assumption_constants(const PolynomialPotential& P, double c0, double eta);

/// Step-size thresholds k <= 8 eps / c^2 (energy decay) and k < 2 eps / c^2
/// (chemical potential bound). std::nullopt means the condition holds for
/// every step size (c = 0).
struct StepBounds {
  std::optional<double> k_energy;
  std::optional<double> k_potential;
};

StepBounds step_bounds(const PolynomialPotential& P, double epsilon);

}  // namespace chstab
