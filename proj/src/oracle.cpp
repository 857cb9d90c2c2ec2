#include "chstab/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace chstab::oracle {

namespace {

void guard(std::size_t n) {
  if (n > max_grid)
    throw std::invalid_argument("dense oracle limited to n <= " + std::to_string(max_grid) + ", got " +
                                std::to_string(n));
}

// 1-D second-derivative matrix of the trigonometric interpolant:
// D2[p][q] = (1/n) sum_m -(w m)^2 cos(w m (x_p - x_q)), m over the wavenumber set
// {-floor(n/2), ..., ceil(n/2) - 1}.
Eigen::MatrixXd second_derivative_1d(std::size_t n, double length) {
  const double w = 2.0 * std::numbers::pi / length;
  const double h = length / static_cast<double>(n);
  const long lo = -static_cast<long>(n / 2);
  const long hi = static_cast<long>((n + 1) / 2) - 1;
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd D(N, N);
  for (Eigen::Index p = 0; p < N; ++p)
    for (Eigen::Index q = 0; q < N; ++q) {
      const double dx = static_cast<double>(p - q) * h;
      double s = 0.0;
      for (long m = lo; m <= hi; ++m) s -= (w * m) * (w * m) * std::cos(w * static_cast<double>(m) * dx);
      D(p, q) = s / static_cast<double>(n);
    }
  return D;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_of_A(const Grid2D& grid) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense_A(grid).matrix);
}

}  // namespace

DenseOperator dense_A(const Grid2D& grid) { return dense_A(grid.n(), grid.length()); }

DenseOperator dense_A(std::size_t points, double length) {
  guard(points);
  if (points == 0 || !(length > 0.0)) throw std::invalid_argument("dense_A needs n >= 1 and L > 0");
  const auto n = static_cast<Eigen::Index>(points);
  const Eigen::MatrixXd D2 = second_derivative_1d(points, length);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd A(n * n, n * n);
  // Kronecker sums for the row-major ordering index = i n + j (i along x).
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q) A(i * n + j, p * n + q) = -(D2(i, p) * I(j, q) + I(i, p) * D2(j, q));
  return {A};
}

DenseOperator dense_A_squared(const Grid2D& grid) {
  const auto A = dense_A(grid).matrix;
  return {A * A};
}

DenseOperator dense_G(const Grid2D& grid) {
  const auto es = eigen_of_A(grid);
  const auto& lambda = es.eigenvalues();
  Eigen::VectorXd inv(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) inv(i) = lambda(i) > 1e-8 ? 1.0 / lambda(i) : 0.0;
  return {es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose()};
}

Eigen::VectorXd dense_implicit_step(const Grid2D& grid, const Eigen::VectorXd& u_n, double k, double epsilon,
                                    const PolynomialPotential& P) {
  const Eigen::MatrixXd A = dense_A(grid).matrix;
  const Eigen::Index m = A.rows();
  if (u_n.size() != m) throw std::invalid_argument("state size does not match grid");
  const Eigen::MatrixXd linear = Eigen::MatrixXd::Identity(m, m) + k * epsilon * A * A;

  Eigen::VectorXd u = u_n;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd fu(m), dfu(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      fu(i) = P.f(u(i));
      dfu(i) = P.df(u(i));
    }
    const Eigen::VectorXd residual = linear * u + k * A * fu - u_n;
    const Eigen::MatrixXd jacobian = linear + k * A * dfu.asDiagonal();
    const Eigen::VectorXd delta = jacobian.partialPivLu().solve(-residual);
    u += delta;
    if (delta.lpNorm<Eigen::Infinity>() <= 1e-13 * std::max(1.0, u.lpNorm<Eigen::Infinity>())) return u;
  }
  throw std::runtime_error("dense Newton did not converge in 50 iterations");
}

double dense_seminorm(const Grid2D& grid, const Eigen::VectorXd& u, int s) {
  if (s != -1 && s != 1 && s != 2 && s != 3) throw std::invalid_argument("unsupported seminorm order");
  const auto es = eigen_of_A(grid);
  const Eigen::VectorXd coords = es.eigenvectors().transpose() * u;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda <= 1e-8) continue;
    sum += std::pow(lambda, s) * coords(i) * coords(i);
  }
  const double h = grid.spacing();
  return std::sqrt(h * h * sum);
}

Eigen::VectorXd to_vector(const Field& u) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) v(static_cast<Eigen::Index>(i)) = u[i];
  return v;
}

Field to_field(const GridPtr& grid, const Eigen::VectorXd& v) {
  return Field(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace chstab::oracle
