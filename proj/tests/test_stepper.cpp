#include "chstab/diagnostics.hpp"
#include "chstab/oracle.hpp"
#include "chstab/stepper.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace chstab;
using testutil::two_pi;

namespace {

SolverConfig newton_config() {
  SolverConfig cfg;
  cfg.mode = SolverMode::newton;
  return cfg;
}

}  // namespace

TEST_CASE("solver config validation and mode names") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.stabilization = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(solver_mode_from_string(to_string(SolverMode::newton)) == SolverMode::newton);
  CHECK(solver_mode_from_string("fixed_point") == SolverMode::fixed_point);
  CHECK_THROWS_AS(solver_mode_from_string("picard"), std::invalid_argument);
}

TEST_CASE("linear problem is solved mode by mode") {
  std::mt19937_64 rng(41);
  const auto g = Grid2D::make(16, two_pi);
  const auto P = PolynomialPotential::zero();
  const double k = 0.3, eps = 0.05;
  for (const auto& cfg : {SolverConfig{}, newton_config()}) {
    const Field u_n = testutil::random_field(g, rng);
    const auto out = step(u_n, k, eps, P, cfg);
    CHECK(out.iters == 1);
    const auto in_hat = forward(u_n);
    const auto out_hat = forward(out.u_next);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double k2 = g->k_squared(i);
      const auto expected = in_hat[i] / (1.0 + k * eps * k2 * k2);
      CHECK(std::abs(out_hat[i] - expected) <= 1e-12 * std::max(1e-3, std::abs(expected)));
    }
  }
}

TEST_CASE("constant states are fixed points") {
  const auto g = Grid2D::make(16, two_pi);
  const Field u_n = Field::constant(g, 0.3);
  for (const auto& cfg : {SolverConfig{}, newton_config()}) {
    const auto out = step(u_n, 0.1, 0.1, PolynomialPotential::double_well(), cfg);
    CHECK(out.iters <= 2);
    CHECK(testutil::max_abs_diff(out.u_next, u_n) == 0.0);
    // omega = f(beta)
    CHECK(std::abs(out.omega_next[7] - (0.027 - 0.3)) <= 1e-15);
  }
}

TEST_CASE("fixed-point step matches the dense oracle on 8x8") {
  std::mt19937_64 rng(43);
  const auto g = Grid2D::make(8, two_pi);
  const auto P = PolynomialPotential::double_well();
  SolverConfig tight;
  tight.tol = 1e-12;
  for (int trial = 0; trial < 10; ++trial) {
    const Field u_n = testutil::random_field(g, rng, -0.5, 0.5);
    const auto out = step(u_n, 0.01, 0.1, P, tight);
    const Field ref = oracle::to_field(g, oracle::dense_implicit_step(*g, oracle::to_vector(u_n), 0.01, 0.1, P));
    CHECK(norm_l2(out.u_next - ref) <= 1e-10);
  }
}

TEST_CASE("Newton step matches the dense oracle on 8x8") {
  std::mt19937_64 rng(47);
  const auto g = Grid2D::make(8, two_pi);
  const auto P = PolynomialPotential::double_well();
  SolverConfig tight = newton_config();
  tight.tol = 1e-12;
  for (int trial = 0; trial < 10; ++trial) {
    const Field u_n = testutil::random_field(g, rng, -1.0, 1.0);
    const auto out = step(u_n, 0.1, 0.1, P, tight);
    const Field ref = oracle::to_field(g, oracle::dense_implicit_step(*g, oracle::to_vector(u_n), 0.1, 0.1, P));
    CHECK(norm_l2(out.u_next - ref) <= 1e-10);
  }
}

TEST_CASE("Newton and fixed point agree on random small instances") {
  std::mt19937_64 rng(53);
  const auto g = Grid2D::make(16, two_pi);
  const auto P = PolynomialPotential::double_well();
  const SolverConfig fp;
  for (int trial = 0; trial < 100; ++trial) {
    const Field u_n = testutil::random_field(g, rng, -0.5, 0.5);
    const double k = testutil::uniform(rng, 0.005, 0.1);
    const auto a = step(u_n, k, 0.1, P, fp);
    const auto b = step(u_n, k, 0.1, P, newton_config());
    CHECK(norm_l2(a.u_next - b.u_next) <= 2.0 * fp.tol * std::max(1.0, norm_l2(u_n)));
  }
}

TEST_CASE("step contract: mass, residual, chemical potential") {
  std::mt19937_64 rng(59);
  const auto g = Grid2D::make(32, two_pi);
  const auto P = PolynomialPotential::double_well();
  for (const auto& cfg : {SolverConfig{}, newton_config()}) {
    const Field u_n = 0.2 * testutil::band_limited_field(g, rng, 6, 10);
    const auto out = step(u_n, 0.1, 0.1, P, cfg);
    CHECK(std::abs(mean(out.u_next) - mean(u_n)) <= 1e-12);
    CHECK(out.final_residual <= cfg.tol * std::min(1.0, norm_l2(u_n)));
    CHECK(out.k_used == 0.1);
    CHECK(step_residual(out.u_next, u_n, 0.1, 0.1, P) == doctest::Approx(out.final_residual).epsilon(1e-6));
    CHECK(testutil::max_abs_diff(out.omega_next, chemical_potential(out.u_next, 0.1, P)) == 0.0);
    Field omega = 0.1 * apply_A_power(out.u_next, 1.0);
    for (std::size_t i = 0; i < omega.size(); ++i) omega[i] += P.f(out.u_next[i]);
    CHECK(testutil::max_abs_diff(out.omega_next, omega) <= 1e-12);
  }
}

TEST_CASE("steps are deterministic") {
  std::mt19937_64 rng(61);
  const auto g = Grid2D::make(24, two_pi);
  const Field u_n = testutil::random_field(g, rng);
  const auto a = step(u_n, 0.05, 0.1, PolynomialPotential::double_well(), SolverConfig{});
  const auto b = step(u_n, 0.05, 0.1, PolynomialPotential::double_well(), SolverConfig{});
  CHECK(a.iters == b.iters);
  for (std::size_t i = 0; i < u_n.size(); ++i) CHECK(a.u_next[i] == b.u_next[i]);
}

TEST_CASE("initial guess at the solution needs no iterations") {
  std::mt19937_64 rng(67);
  const auto g = Grid2D::make(16, two_pi);
  const auto P = PolynomialPotential::double_well();
  const Field u_n = testutil::random_field(g, rng, -0.5, 0.5);
  const auto first = step(u_n, 0.05, 0.1, P, SolverConfig{});
  const auto again = step(u_n, 0.05, 0.1, P, SolverConfig{}, &first.u_next);
  CHECK(again.iters == 0);
  CHECK_THROWS_AS(step(u_n, 0.05, 0.1, P, SolverConfig{}, &static_cast<const Field&>(Field(Grid2D::make(8, 1.0)))),
                  std::invalid_argument);
}

TEST_CASE("failures are surfaced") {
  std::mt19937_64 rng(71);
  const auto g = Grid2D::make(16, two_pi);
  const auto P = PolynomialPotential::double_well();
  const Field u_n = testutil::random_field(g, rng);

  SolverConfig few;
  few.max_iter = 1;
  try {
    (void)step(u_n, 0.1, 0.1, P, few);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.iters() == 1);
    CHECK(e.residual() > few.tol);
  }

  SolverConfig starved = newton_config();
  starved.linear_max_iter = 1;
  starved.gmres_restart = 1;
  starved.linear_tol = 1e-14;
  CHECK_THROWS_AS(step(u_n, 0.1, 0.1, P, starved), LinearSolveFailure);

  CHECK_THROWS_AS(step(u_n, 0.0, 0.1, P, SolverConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(step(u_n, 0.1, -1.0, P, SolverConfig{}), std::invalid_argument);
  Field bad = u_n;
  bad[0] = INFINITY;
  CHECK_THROWS_AS(step(bad, 0.1, 0.1, P, SolverConfig{}), std::invalid_argument);
}

TEST_CASE("plain and stabilised fixed point reach the same solution") {
  std::mt19937_64 rng(73);
  const auto g = Grid2D::make(16, two_pi);
  const auto P = PolynomialPotential::double_well();
  const Field u_n = testutil::random_field(g, rng, -0.3, 0.3);
  SolverConfig plain;
  plain.stabilization = 0.0;
  const auto a = fixed_point_solve(u_n, 0.01, 0.1, P, plain);
  const auto b = fixed_point_solve(u_n, 0.01, 0.1, P, SolverConfig{});
  CHECK(norm_l2(a.u - b.u) <= 2e-10 * std::max(1.0, norm_l2(u_n)));
}

TEST_CASE("dealiased nonlinear term keeps the mean") {
  std::mt19937_64 rng(79);
  const auto g = Grid2D::make(24, two_pi);
  SolverConfig cfg;
  cfg.dealias = true;
  const Field u_n = testutil::random_field(g, rng, -0.5, 0.5);
  const auto out = step(u_n, 0.05, 0.1, PolynomialPotential::double_well(), cfg);
  CHECK(std::abs(mean(out.u_next) - mean(u_n)) <= 1e-12);
  CHECK(out.final_residual <= cfg.tol);
}
