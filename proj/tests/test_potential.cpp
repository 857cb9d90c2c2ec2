#include "chstab/polynomial.hpp"
#include "chstab/potential.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using chstab::PolynomialPotential;

namespace {

// Dense-sampling supremum over [-r, r]; independent of the critical-point solver.
template <class Fn>
double sampled_sup(Fn&& g, double r, int points) {
  double best = -INFINITY;
  for (int i = 0; i <= points; ++i) best = std::max(best, g(-r + 2.0 * r * i / points));
  return best;
}

}  // namespace

TEST_CASE("polynomial helpers") {
  const std::vector<double> c{-1.0, 0.0, 1.0};  // v^2 - 1
  CHECK(chstab::poly::evaluate(c, 3.0) == doctest::Approx(8.0));
  CHECK(chstab::poly::derivative(c) == std::vector<double>{0.0, 2.0});
  const auto roots = chstab::poly::real_roots(c);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chstab::poly::real_roots(std::vector<double>{1.0, 0.0, 1.0}).empty());
  CHECK(chstab::poly::trimmed(std::vector<double>{1.0, 2.0, 0.0, 0.0}).size() == 2);

  // sup of -v^4 + 2 v^2 is 1 at v = +-1; odd degree or positive leading term is unbounded
  const auto s = chstab::poly::supremum(std::vector<double>{0.0, 0.0, 2.0, 0.0, -1.0}, 10.0);
  REQUIRE(s.has_value());
  CHECK(*s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(chstab::poly::supremum(std::vector<double>{0.0, 1.0, 0.0, 1.0}, 10.0).has_value());
  CHECK_FALSE(chstab::poly::supremum(std::vector<double>{0.0, 0.0, 1.0}, 10.0).has_value());
}

TEST_CASE("potential construction") {
  CHECK_THROWS_AS(PolynomialPotential({1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(PolynomialPotential({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PolynomialPotential({-1.0, 0.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PolynomialPotential({-1.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PolynomialPotential({NAN, 0.0, 1.0}), std::invalid_argument);

  const auto dw = PolynomialPotential::double_well();
  CHECK(dw.p() == 2);
  CHECK_FALSE(dw.is_zero());
  CHECK(PolynomialPotential({0.0, 0.0, 0.0}).is_zero());
  CHECK(PolynomialPotential::zero(3).p() == 3);
  CHECK(PolynomialPotential({1.0, 0.0, -2.0, 0.0, 1.0}).p() == 3);
}

TEST_CASE("f and F of the double well") {
  const auto P = PolynomialPotential::double_well();
  CHECK(P.f(0.0) == 0.0);
  CHECK(P.f(1.0) == 0.0);
  CHECK(P.f(2.0) == 6.0);
  CHECK(P.F(0.0) == 0.0);
  CHECK(P.F(1.0) == -0.25);
  CHECK(P.F(2.0) == 2.0);
  CHECK(P.df(0.0) == -1.0);
  CHECK(P.d2f(1.0) == 6.0);
  const auto b = P.primitive_coeffs();
  REQUIRE(b.size() == 3);
  CHECK(b[0] == -0.5);
  CHECK(b[1] == 0.0);
  CHECK(b[2] == 0.25);
}

TEST_CASE("F' = f by central differences at random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), point(-5.0, 5.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> a(5);
    for (auto& x : a) x = coef(rng);
    a.back() = 0.5 + std::abs(a.back());
    const PolynomialPotential P(a);
    CHECK(P.F(0.0) == 0.0);
    for (int i = 0; i < 100; ++i) {
      const double v = point(rng);
      const double h = 1e-6;
      const double numeric = (P.F(v + h) - P.F(v - h)) / (2.0 * h);
      CHECK(std::abs(numeric - P.f(v)) <= 1e-6 * std::max(1.0, std::abs(P.f(v))));
    }
  }
}

TEST_CASE("concavity bound") {
  CHECK(chstab::concavity_bound(PolynomialPotential::double_well()) == 1.0);
  CHECK(chstab::concavity_bound(PolynomialPotential({0.0, 0.0, 1.0})) == 0.0);
  CHECK(chstab::concavity_bound(PolynomialPotential::zero()) == 0.0);

  // f = u^5 - 2u^3 + u against 1e6 samples of F'' on [-10, 10]
  const PolynomialPotential P({1.0, 0.0, -2.0, 0.0, 1.0});
  const double c = chstab::concavity_bound(P);
  const double sampled_min = -sampled_sup([&](double v) { return -P.df(v); }, 10.0, 1'000'000);
  CHECK(c == doctest::Approx(-sampled_min).epsilon(1e-9));
  CHECK(c == doctest::Approx(0.8).epsilon(1e-12));  // min of 5v^4 - 6v^2 + 1 at v^2 = 3/5

  // F'' + c >= 0 on a dense grid, attained up to 1e-9
  double tightest = INFINITY;
  double lowest = INFINITY;
  for (int i = 0; i <= 200000; ++i) lowest = std::min(lowest, P.df(-100.0 + 200.0 * i / 200000) + c);
  CHECK(lowest >= -1e-12);
  for (int i = 0; i <= 2'000'000; ++i) {
    const double v = -2.0 + 4.0 * i / 2'000'000;
    tightest = std::min(tightest, P.df(v) + c);
  }
  CHECK(tightest <= 1e-9);
}

TEST_CASE("assumption constants of the double well with c0 = 1/4") {
  const auto k = chstab::assumption_constants(PolynomialPotential::double_well(), 0.25, 1.0);
  // sup(v^2 - v^4/2) = 1/2 at v^2 = 1, sup(v^2/2 - v^4/8) = 1/2 at v^2 = 2
  const double c1_oracle = sampled_sup([](double v) { return v * v - 0.5 * v * v * v * v; }, 5.0, 1'000'000);
  const double c3_oracle = sampled_sup([](double v) { return 0.5 * v * v - v * v * v * v / 8.0; }, 5.0, 1'000'000);
  CHECK(k.c1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(k.c3 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(k.c1 - c1_oracle) <= 1e-9);
  CHECK(std::abs(k.c3 - c3_oracle) <= 1e-9);
  CHECK(k.c == 1.0);
  CHECK(k.c0 == 0.25);
  CHECK(k.eta == 1.0);
}

TEST_CASE("assumption constants edge cases") {
  CHECK(chstab::assumption_constants(PolynomialPotential({0.0, 0.0, 1.0}), 0.5, 1.0).c1 == doctest::Approx(0.0));
  CHECK_THROWS_AS(chstab::assumption_constants(PolynomialPotential::double_well(), 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(chstab::assumption_constants(PolynomialPotential::double_well(), 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chstab::assumption_constants(PolynomialPotential::double_well(), 0.25, -1.0),
                  std::invalid_argument);
  try {
    (void)chstab::assumption_constants(PolynomialPotential::double_well(), 1.0, 1.0);
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("unbounded") != std::string::npos);
  }
}

TEST_CASE("assumption constants satisfy the sampled inequalities") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 2;
    std::vector<double> a(static_cast<std::size_t>(2 * p - 1));
    for (auto& x : a) x = coef(rng);
    a.back() = 0.5 + std::abs(a.back());
    const PolynomialPotential P(a);
    const double c0 = 0.5 * a.back() / p;  // inside (a/(3p), a/p), so every supremum is finite
    const double eta = 1.0;
    const auto k = chstab::assumption_constants(P, c0, eta);
    const double r = P.root_radius() * 3.0;
    double worst = INFINITY;
    for (int i = 0; i <= 20000; ++i) {
      const double v = -r + 2.0 * r * i / 20000;
      const double v2p = std::pow(v, 2 * p);
      const double scale = std::max(1.0, v2p);
      worst = std::min({worst, (P.f(v) * v - (p * c0 * v2p - k.c1)) / scale,
                        (eta * c0 * v2p + k.c2 - std::abs(P.f(v))) / scale,
                        (P.F(v) - (0.5 * c0 * v2p - k.c3)) / scale, (1.5 * c0 * v2p + k.c3 - P.F(v)) / scale,
                        (P.df(v) + k.c) / scale});
    }
    CHECK(worst >= -1e-9);
  }
}

TEST_CASE("step bounds") {
  const auto b = chstab::step_bounds(PolynomialPotential::double_well(), 0.1);
  REQUIRE(b.k_energy.has_value());
  REQUIRE(b.k_potential.has_value());
  CHECK(*b.k_energy == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(*b.k_potential == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(0.1 <= *b.k_energy);
  CHECK(0.1 < *b.k_potential);

  const auto cubic = chstab::step_bounds(PolynomialPotential({0.0, 0.0, 1.0}), 0.1);
  CHECK_FALSE(cubic.k_energy.has_value());
  CHECK_FALSE(cubic.k_potential.has_value());
  CHECK_THROWS_AS(chstab::step_bounds(PolynomialPotential::double_well(), 0.0), std::invalid_argument);
}
