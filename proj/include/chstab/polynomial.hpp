#pragma once

#include <optional>
#include <span>
#include <vector>

namespace chstab::poly {

// Polynomials are stored as ascending coefficient vectors: c[j] multiplies v^j.

double evaluate(std::span<const double> c, double v);

std::vector<double> derivative(std::span<const double> c);

// Drops exactly-zero leading coefficients; the zero polynomial becomes {0}.
std::vector<double> trimmed(std::span<const double> c);

// Real roots from the eigenvalues of the companion matrix, each polished with
// a few Newton steps. Returned sorted and deduplicated.
std::vector<double> real_roots(std::span<const double> c);

// sup over the real line. std::nullopt when the polynomial is unbounded above.
// Critical points give the exact answer; a dense scan of [-radius, radius]
// guards against a missed root.
std::optional<double> supremum(std::span<const double> c, double radius);

}  // namespace chstab::poly
