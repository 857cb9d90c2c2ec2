#include "chstab/diagnostics.hpp"
#include "chstab/stepper.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace chstab;
using std::numbers::pi;
using testutil::two_pi;

namespace {

// Trajectory of `count` steps from u0 with constant k; the first record is the initial state.
std::vector<DiagnosticsRecord> trajectory(const Field& u0, int count, double k, double eps,
                                          const PolynomialPotential& P) {
  std::vector<DiagnosticsRecord> out;
  out.push_back(make_record(0, 0.0, 0.0, u0, chemical_potential(u0, eps, P), nullptr, eps, P));
  Field u = u0;
  for (int n = 1; n <= count; ++n) {
    const auto s = step(u, k, eps, P, SolverConfig{});
    out.push_back(make_record(n, n * k, k, s.u_next, s.omega_next, &u, eps, P, s.iters, s.final_residual));
    u = s.u_next;
  }
  return out;
}

}  // namespace

TEST_CASE("energy examples") {
  const auto g = Grid2D::make(32, two_pi);
  const auto P = PolynomialPotential::double_well();
  CHECK(energy(Field(g), 0.1, P) == 0.0);
  CHECK(energy(Field::constant(g, 1.0), 0.1, P) == doctest::Approx(-pi * pi).epsilon(1e-14));

  // midpoint quadrature of eps/2 |u_x|^2 + F(u) for u = sin x; the y integral contributes 2 pi
  const int m = 200000;
  double integral = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = two_pi * (i + 0.5) / m;
    const double s = std::sin(x), c = std::cos(x);
    integral += 0.05 * c * c + P.F(s);
  }
  integral *= two_pi / m * two_pi;
  const Field u = Field::from_function(g, [](double x, double) { return std::sin(x); });
  CHECK(std::abs(energy(u, 0.1, P) - integral) <= 1e-8);
}

TEST_CASE("chemical potential examples") {
  const auto g = Grid2D::make(16, two_pi);
  const Field beta = Field::constant(g, -0.4);
  const Field w = chemical_potential(beta, 0.1, PolynomialPotential::double_well());
  for (double v : w.values()) CHECK(std::abs(v - (-0.064 + 0.4)) <= 1e-15);

  const Field s = Field::from_function(g, [](double x, double) { return std::sin(x); });
  CHECK(testutil::max_abs_diff(chemical_potential(s, 1.0, PolynomialPotential::zero()), s) <= 1e-14);
}

TEST_CASE("make_record fields") {
  std::mt19937_64 rng(5);
  const auto g = Grid2D::make(16, two_pi);
  const auto P = PolynomialPotential::double_well();
  const Field a = testutil::random_field(g, rng);
  const Field b = testutil::random_field(g, rng);
  const auto r = make_record(3, 0.3, 0.1, b, chemical_potential(b, 0.1, P), &a, 0.1, P, 7, 1e-12);
  CHECK(r.step == 3);
  CHECK(r.t == 0.3);
  CHECK(r.k_n == 0.1);
  CHECK(r.mass == doctest::Approx(mean(b)).epsilon(1e-15));
  CHECK(r.energy == doctest::Approx(energy(b, 0.1, P)).epsilon(1e-13));
  CHECK(r.h2 == doctest::Approx(seminorm(b, 2)).epsilon(1e-14));
  CHECK(r.du_l2 == doctest::Approx(norm_l2(b - a)).epsilon(1e-14));
  CHECK(r.du_hm1 == doctest::Approx(seminorm(b - a, -1)).epsilon(1e-14));
  CHECK(r.solver_iters == 7);
  const auto first = make_record(0, 0.0, 0.0, a, chemical_potential(a, 0.1, P), nullptr, 0.1, P);
  CHECK(first.du_l2 == 0.0);
  CHECK(first.du_hm1 == 0.0);
}

TEST_CASE("energy decay monitor") {
  std::mt19937_64 rng(13);
  const auto g = Grid2D::make(24, two_pi);
  const auto P = PolynomialPotential::double_well();
  auto recs = trajectory(testutil::random_field(g, rng, -0.5, 0.5), 20, 0.1, 0.1, P);
  CHECK(check_energy_decay(recs, 1e-10).empty());

  // f = 0 contracts every mode
  const auto lin = trajectory(testutil::random_field(g, rng), 10, 0.7, 0.1, PolynomialPotential::zero());
  CHECK(check_energy_decay(lin, 1e-10).empty());

  recs[7].energy = recs[6].energy + 1e-3;
  const auto flagged = check_energy_decay(recs, 1e-10);
  REQUIRE(flagged.size() == 1);
  CHECK(flagged.front() == 7);

  const std::span<const DiagnosticsRecord> tail(recs.data() + 1, 3);
  CHECK(check_energy_decay(tail, 1e-10, recs[0].energy).empty());
  CHECK(check_energy_decay(tail, 1e-10, recs[1].energy - 1.0).size() == 1);
}

TEST_CASE("summed dissipation") {
  std::mt19937_64 rng(17);
  const auto g = Grid2D::make(24, two_pi);
  const auto P = PolynomialPotential::double_well();
  const auto recs = trajectory(testutil::random_field(g, rng, -0.5, 0.5), 30, 0.1, 0.1, P);
  const std::span<const DiagnosticsRecord> steps(recs.data() + 1, recs.size() - 1);
  const double c_k = 1.0 * 0.1 / (8.0 * 0.1);
  const auto check = check_summed_dissipation(steps, c_k, recs[0].energy, 1e-10);
  CHECK(check.holds);
  CHECK(check.rhs == recs[0].energy);

  // single step: the sum reduces to one term
  const auto one = check_summed_dissipation(steps.first(1), c_k, recs[0].energy, 1e-10);
  const double direct = (1.0 - c_k) * recs[1].du_hm1 * recs[1].du_hm1 / 0.1 + recs[1].energy;
  CHECK(one.lhs == doctest::Approx(direct).epsilon(1e-15));
  CHECK(one.holds);

  const auto lin = trajectory(testutil::random_field(g, rng), 10, 0.3, 0.1, PolynomialPotential::zero());
  const std::span<const DiagnosticsRecord> lin_steps(lin.data() + 1, lin.size() - 1);
  for (double ck : {0.0, 0.01, 0.5, 1.0}) CHECK(check_summed_dissipation(lin_steps, ck, lin[0].energy, 1e-10).holds);

  CHECK(check_summed_dissipation({}, 0.5, 1.0, 1e-10).holds);
  CHECK_THROWS_AS(check_summed_dissipation(steps, 1.5, 0.0, 1e-10), std::invalid_argument);
}

TEST_CASE("H^-1 recursion") {
  const auto g = Grid2D::make(32, two_pi);
  const auto P = PolynomialPotential::double_well();
  const auto b = theory_bounds(P, 0.1, 0.0, 0.1, *g, 0.25, std::nullopt, 0.0);
  CHECK(check_hminus1_recursion(Field(g), Field(g), 0.1, 0.1, b.gamma1, b.C1_alpha));

  const Field big = Field::from_function(g, [](double x, double) { return 50.0 * std::sin(x); });
  const auto s = step(big, 0.01, 0.1, P, [] {
    SolverConfig c;
    c.mode = SolverMode::newton;
    c.linear_max_iter = 3000;
    return c;
  }());
  CHECK(check_hminus1_recursion(big, s.u_next, 0.01, 0.1, b.gamma1, b.C1_alpha));

  // growth far beyond C1 k is rejected
  CHECK_FALSE(check_hminus1_recursion(1.0, 100.0, 0.1, 0.1, b.gamma1, b.C1_alpha));
  CHECK(check_hminus1_recursion(100.0, 1.0, 0.1, 0.1, b.gamma1, b.C1_alpha));
}

TEST_CASE("theory bounds for the double well") {
  const auto g = Grid2D::make(80, two_pi);
  const auto P = PolynomialPotential::double_well();
  const auto b = theory_bounds(P, 0.1, 0.0, 0.1, *g, 0.25, std::nullopt, 100.0);

  // independent recomputation: gamma_1 = 1, c1 = c3 = 1/2, |Omega| = 4 pi^2
  const double C1 = (0.5 + 2.0 * 0.5) * 4.0 * pi * pi;
  CHECK(b.gamma1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.C1_alpha == doctest::Approx(C1).epsilon(1e-12));
  CHECK(std::abs(b.C1_alpha - 59.22) <= 0.005);
  CHECK(b.rho_0k == doctest::Approx(std::sqrt(2.0 * C1 * 1.01 / 0.1)).epsilon(1e-12));
  CHECK(std::abs(b.rho_0k - 34.59) <= 0.005);
  CHECK(b.rho_0 == doctest::Approx(std::sqrt(2.0 * C1 / 0.1)).epsilon(1e-12));
  REQUIRE(b.rho_hat_0.has_value());
  CHECK(*b.rho_hat_0 == doctest::Approx(std::sqrt(2.0 * C1 * (10.0 + 0.8))).epsilon(1e-12));
  CHECK(*b.E_hat_0 == doctest::Approx(std::max(100.0, *b.rho_hat_0)));
  CHECK(*b.n0_time >= 0.0);

  double prev = 0.0;
  for (double k : {0.0, 1e-6, 1e-3, 0.01, 0.1, 1.0}) {
    const double r = theory_bounds(P, 0.1, 0.0, k, *g, 0.25, std::nullopt, 100.0).rho_0k;
    CHECK(r > prev);
    prev = r;
  }
  const double r0 = theory_bounds(P, 0.1, 0.0, 0.0, *g, 0.25, std::nullopt, 100.0).rho_0k;
  CHECK(r0 == doctest::Approx(b.rho_0).epsilon(1e-15));

  // alpha > 0 adds c2 alpha |Omega|
  const auto ba = theory_bounds(P, 0.1, 0.5, 0.1, *g, 0.25, 1.0, 100.0);
  CHECK(ba.C1_alpha == doctest::Approx((0.5 + ba.c2 * 0.5 + 1.0) * 4.0 * pi * pi).epsilon(1e-12));

  const auto quad = theory_bounds(PolynomialPotential({0.0, 0.0, 1.0}), 0.1, 0.0, 0.1, *g, 0.25, std::nullopt, 1.0);
  CHECK_FALSE(quad.rho_hat_0.has_value());
  CHECK_FALSE(quad.n0_time.has_value());
  CHECK_THROWS_AS(theory_bounds(P, 0.0, 0.0, 0.1, *g, 0.25, std::nullopt, 1.0), std::invalid_argument);
}

TEST_CASE("absorbing time") {
  const double C1 = 1.5 * 4.0 * pi * pi;
  const double rho0k = std::sqrt(2.0 * C1 * 1.01 / 0.1);
  const double rho = rho0k * (1.0 + 1e-6);
  const double t = absorbing_time(1.0, 0.1, 0.1, rho0k, 100.0, rho);
  CHECK(t == doctest::Approx(10.1 * (std::log(1e4) - std::log(rho * rho - rho0k * rho0k))).epsilon(1e-12));
  CHECK(t == doctest::Approx(154.0).epsilon(0.01));
  CHECK(absorbing_time(1.0, 0.1, 0.1, rho0k, 0.0, rho) == 0.0);
  CHECK(absorbing_time(1.0, 0.1, 0.1, rho0k, 1.0, 2.0 * rho0k) == 0.0);
  CHECK_THROWS_AS(absorbing_time(1.0, 0.1, 0.1, rho0k, 100.0, rho0k), std::invalid_argument);
}
