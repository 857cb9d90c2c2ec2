#include "chstab/potential.hpp"

#include "chstab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace chstab {

PolynomialPotential::PolynomialPotential(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 3 || coeffs_.size() % 2 == 0)
    throw std::invalid_argument("potential needs 2p-1 coefficients with p >= 2, got " +
                                std::to_string(coeffs_.size()));
  for (double a : coeffs_)
    if (!std::isfinite(a)) throw std::invalid_argument("potential coefficients must be finite");

  p_ = static_cast<int>((coeffs_.size() + 1) / 2);
  zero_ = std::all_of(coeffs_.begin(), coeffs_.end(), [](double a) { return a == 0.0; });
  if (!zero_ && !(coeffs_.back() > 0.0))
    throw std::invalid_argument("leading coefficient a_{2p-1} must be positive");

  f_poly_.assign(coeffs_.size() + 1, 0.0);
  std::copy(coeffs_.begin(), coeffs_.end(), f_poly_.begin() + 1);
  df_poly_ = poly::derivative(f_poly_);
  d2f_poly_ = poly::derivative(df_poly_);

  F_poly_.assign(f_poly_.size() + 1, 0.0);
  for (std::size_t j = 1; j < F_poly_.size(); ++j) F_poly_[j] = f_poly_[j - 1] / static_cast<double>(j);
}

PolynomialPotential PolynomialPotential::zero(int p) {
  if (p < 2) throw std::invalid_argument("p must be at least 2");
  return PolynomialPotential(std::vector<double>(static_cast<std::size_t>(2 * p - 1), 0.0));
}

PolynomialPotential PolynomialPotential::double_well() { return PolynomialPotential({-1.0, 0.0, 1.0}); }

std::vector<double> PolynomialPotential::primitive_coeffs() const {
  return {F_poly_.begin() + 2, F_poly_.end()};
}

double PolynomialPotential::f(double v) const { return poly::evaluate(f_poly_, v); }
double PolynomialPotential::F(double v) const { return poly::evaluate(F_poly_, v); }
double PolynomialPotential::df(double v) const { return poly::evaluate(df_poly_, v); }
double PolynomialPotential::d2f(double v) const { return poly::evaluate(d2f_poly_, v); }

double PolynomialPotential::root_radius() const {
  if (zero_) return 1.0;
  double sum = 0.0;
  for (double a : coeffs_) sum += std::abs(a);
  return 1.0 + 2.0 * sum / coeffs_.back();
}

double concavity_bound(const PolynomialPotential& P) {
  if (P.is_zero()) return 0.0;
  if (!(P.coeffs().back() > 0.0))
    throw std::invalid_argument("F'' is unbounded below: leading coefficient must be positive");

  // F'' = f' has even degree 2p-2 and positive leading coefficient, so its
  // minimum sits at a real root of f''.
  double lowest = std::numeric_limits<double>::infinity();
  for (double x : poly::real_roots(poly::derivative(poly::derivative(P.f_poly()))))
    lowest = std::min(lowest, P.df(x));
  if (!std::isfinite(lowest)) lowest = P.df(0.0);
  return lowest < 0.0 ? -lowest : 0.0;
}

namespace {

// Coefficients of scale * v^{2p} added to `base` (ascending).
std::vector<double> plus_monomial(std::vector<double> base, std::size_t power, double scale) {
  if (base.size() <= power) base.resize(power + 1, 0.0);
  base[power] += scale;
  return base;
}

std::vector<double> scaled(std::vector<double> c, double s) {
  for (double& x : c) x *= s;
  return c;
}

double required_sup(std::span<const double> c, double radius, const char* name) {
  const auto s = poly::supremum(c, radius);
  if (!s) throw std::domain_error(std::string("unbounded: supremum defining ") + name + " is infinite");
  return std::max(0.0, *s);
}

}  // namespace

AssumptionConstants assumption_constants(const PolynomialPotential& P, double c0, double eta) {
  if (!(c0 > 0.0)) throw std::invalid_argument("c0 must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");

  const auto two_p = static_cast<std::size_t>(2 * P.p());
  const double radius = P.root_radius();

  // f(v) v as an ascending polynomial.
  std::vector<double> fv(P.f_poly().size() + 1, 0.0);
  for (std::size_t j = 0; j < P.f_poly().size(); ++j) fv[j + 1] = P.f_poly()[j];

  AssumptionConstants out;
  out.c0 = c0;
  out.eta = eta;
  out.c = concavity_bound(P);

  // c1 = sup [p c0 v^{2p} - f(v) v]
  out.c1 = required_sup(plus_monomial(scaled(fv, -1.0), two_p, P.p() * c0), radius, "c1");

  // c2 = sup [|f(v)| - eta c0 v^{2p}] = max of the sups of +f and -f.
  const double c2_plus = required_sup(plus_monomial(P.f_poly(), two_p, -eta * c0), radius, "c2");
  const double c2_minus = required_sup(plus_monomial(scaled(P.f_poly(), -1.0), two_p, -eta * c0), radius, "c2");
  out.c2 = std::max(c2_plus, c2_minus);

  // c3 must cover both F >= c0/2 v^{2p} - c3 and F <= 3c0/2 v^{2p} + c3.
  const double c3_lower = required_sup(plus_monomial(scaled(P.F_poly(), -1.0), two_p, 0.5 * c0), radius, "c3");
  const double c3_upper = required_sup(plus_monomial(P.F_poly(), two_p, -1.5 * c0), radius, "c3");
  out.c3 = std::max(c3_lower, c3_upper);
  return out;
}

StepBounds step_bounds(const PolynomialPotential& P, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double c = concavity_bound(P);
  if (c == 0.0) return {};
  return {8.0 * epsilon / (c * c), 2.0 * epsilon / (c * c)};
}

}  // namespace chstab
