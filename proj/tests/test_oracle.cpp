#include "chstab/oracle.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace chstab;
using testutil::two_pi;

TEST_CASE("dense A annihilates constants on 4x4") {
  const auto A = oracle::dense_A(4, two_pi).matrix;
  CHECK(A.rows() == 16);
  CHECK((A * Eigen::VectorXd::Ones(16)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("dense A spectrum equals the wavenumber table") {
  for (double L : {two_pi, 3.0}) {
    const auto g = Grid2D::make(8, L);
    const auto A = oracle::dense_A(*g).matrix;
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::vector<double> table;
    for (std::size_t i = 0; i < g->size(); ++i) table.push_back(g->k_squared(i));
    std::sort(dense.begin(), dense.end());
    std::sort(table.begin(), table.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) worst = std::max(worst, std::abs(dense[i] - table[i]));
    CHECK(worst <= 1e-10 * table.back());
  }
}

TEST_CASE("dense A applied to a vector matches the spectral operator") {
  std::mt19937_64 rng(3);
  const auto g = Grid2D::make(12, 5.0);
  const Field u = testutil::random_field(g, rng);
  const Eigen::VectorXd Au = oracle::dense_A(*g).matrix * oracle::to_vector(u);
  CHECK(testutil::max_abs_diff(oracle::to_field(g, Au), apply_A_power(u, 1.0)) <= 1e-10);
}

TEST_CASE("G inverts A on mean-free vectors") {
  const auto g = Grid2D::make(8, two_pi);
  const auto A = oracle::dense_A(*g).matrix;
  const auto G = oracle::dense_G(*g).matrix;
  const Eigen::Index m = A.rows();
  const Eigen::MatrixXd projector =
      Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  CHECK((G * A - projector).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((G - G.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  const auto A2 = oracle::dense_A_squared(*g).matrix;
  CHECK((A2 - A * A).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense step with f = 0 is the diagonal formula") {
  std::mt19937_64 rng(19);
  const auto g = Grid2D::make(8, two_pi);
  const Field u_n = testutil::random_field(g, rng);
  const double k = 0.2, eps = 0.1;
  const Field dense = oracle::to_field(g, oracle::dense_implicit_step(*g, oracle::to_vector(u_n), k, eps,
                                                                      PolynomialPotential::zero()));
  auto hat = forward(u_n);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double k2 = g->k_squared(i);
    hat[i] /= 1.0 + k * eps * k2 * k2;
  }
  CHECK(testutil::max_abs_diff(dense, backward(hat)) <= 1e-12);
}

TEST_CASE("dense step keeps constants") {
  const auto g = Grid2D::make(8, two_pi);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(64, 0.7);
  const auto out = oracle::dense_implicit_step(*g, c, 0.1, 0.1, PolynomialPotential::double_well());
  CHECK((out - c).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK_THROWS_AS(oracle::dense_implicit_step(*g, Eigen::VectorXd::Zero(10), 0.1, 0.1, PolynomialPotential::zero()),
                  std::invalid_argument);
}

TEST_CASE("dense seminorms match the spectral ones") {
  std::mt19937_64 rng(23);
  for (std::size_t n : {8, 9, 16}) {
    const auto g = Grid2D::make(n, two_pi);
    const Field u = testutil::random_field(g, rng);
    const auto v = oracle::to_vector(u);
    for (int s : {-1, 1, 2, 3}) {
      const double spectral = seminorm(u, s);
      CHECK(std::abs(oracle::dense_seminorm(*g, v, s) - spectral) <= 1e-10 * std::max(1.0, spectral));
    }
  }
}

TEST_CASE("size guard") {
  CHECK_THROWS_AS(oracle::dense_A(*Grid2D::make(17, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(oracle::dense_A(32, 1.0), std::invalid_argument);
  CHECK_NOTHROW(oracle::dense_A(oracle::max_grid, 1.0));
}
