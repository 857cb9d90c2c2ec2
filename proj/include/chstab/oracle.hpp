#pragma once

// Dense brute-force reference for tiny grids. Test-only: it assembles the
// periodic Laplacian as an explicit matrix from the trigonometric interpolant,
// without going through the FFT path it is meant to check.

#include "chstab/potential.hpp"
#include "chstab/spectral.hpp"

#include <Eigen/Dense>

namespace chstab::oracle {

constexpr std::size_t max_grid = 16;

struct DenseOperator {
  Eigen::MatrixXd matrix;
};

/// A = -Laplacian on the n x n grid, acting on row-major vectors (index i n + j).
/// Throws std::invalid_argument for n > max_grid.
DenseOperator dense_A(const Grid2D& grid);
/// Same operator for any n <= max_grid, including grids too small for Grid2D.
DenseOperator dense_A(std::size_t n, double length);

/// A^2 and the pseudo-inverse G (inverse of A on mean-free vectors).
DenseOperator dense_A_squared(const Grid2D& grid);
DenseOperator dense_G(const Grid2D& grid);

/// Dense Newton solve of (I + k eps A^2) u + k A f(u) = u_n with the explicit
/// Jacobian I + k eps A^2 + k A diag(f'(u)). Throws std::runtime_error after
/// 50 iterations without reaching the 1e-13 increment tolerance.
Eigen::VectorXd dense_implicit_step(const Grid2D& grid, const Eigen::VectorXd& u_n, double k, double epsilon,
                                    const PolynomialPotential& P);

/// |u|_s computed from the eigendecomposition of the dense A, s in {-1, 1, 2, 3}.
double dense_seminorm(const Grid2D& grid, const Eigen::VectorXd& u, int s);

Eigen::VectorXd to_vector(const Field& u);
Field to_field(const GridPtr& grid, const Eigen::VectorXd& v);

}  // namespace chstab::oracle
