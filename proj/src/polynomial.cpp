#include "chstab/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chstab::poly {

double evaluate(std::span<const double> c, double v) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * v + *it;
  return acc;
}

std::vector<double> derivative(std::span<const double> c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = static_cast<double>(j) * c[j];
  return d;
}

std::vector<double> trimmed(std::span<const double> c) {
  std::vector<double> out(c.begin(), c.end());
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  if (out.empty()) out.push_back(0.0);
  return out;
}

std::vector<double> real_roots(std::span<const double> coeffs) {
  const auto c = trimmed(coeffs);
  const auto degree = static_cast<Eigen::Index>(c.size()) - 1;
  if (degree <= 0) return {};
  if (degree == 1) return {-c[0] / c[1]};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigensolve failed");

  const auto dc = derivative(c);
  std::vector<double> roots;
  for (const auto& z : solver.eigenvalues()) {
    if (std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z))) continue;
    double x = z.real();
    for (int it = 0; it < 4; ++it) {
      const double d = evaluate(dc, x);
      if (d == 0.0) break;
      const double next = x - evaluate(c, x) / d;
      if (!std::isfinite(next) || std::abs(next - x) > 1e-6 * std::max(1.0, std::abs(x))) break;
      x = next;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); }),
              roots.end());
  return roots;
}

std::optional<double> supremum(std::span<const double> coeffs, double radius) {
  const auto c = trimmed(coeffs);
  const std::size_t degree = c.size() - 1;
  if (degree == 0) return c[0];
  if (degree % 2 == 1 || c.back() > 0.0) return std::nullopt;

  double best = -std::numeric_limits<double>::infinity();
  for (double x : real_roots(derivative(c))) best = std::max(best, evaluate(c, x));

  constexpr int samples = 200001;
  for (int i = 0; i < samples; ++i) {
    const double x = -radius + 2.0 * radius * i / (samples - 1);
    best = std::max(best, evaluate(c, x));
  }
  return best;
}

}  // namespace chstab::poly
