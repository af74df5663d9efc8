#include <doctest.h>

#include <cmath>
#include <random>

#include "dpa/forces.hpp"
#include "dpa/particles.hpp"
#include "oracles.hpp"

using namespace dpa;

TEST_CASE("quantile partition of a uniform density") {
  const auto s = quantile_partition(InitialDensity::uniform(0.0, 1.0, 1.0), 4);
  const std::vector<double> expect{0.0, 0.25, 0.5, 0.75, 1.0};
  REQUIRE(s.x.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(s.x[i] == doctest::Approx(expect[i]).epsilon(1e-13));
  CHECK(s.h == doctest::Approx(0.25));
}

TEST_CASE("quantile partition of the parabolic bump") {
  const auto bump = InitialDensity::parabolic_bump(0.75, 0.0, 1.0);
  const auto two = quantile_partition(bump, 2);
  CHECK(two.x[0] == doctest::Approx(-1.0));
  CHECK(two.x[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(two.x[2] == doctest::Approx(1.0));

  // quartile condition int_{-1}^{-r} 3/4 (1 - x^2) = 1/4  <=>  3r - r^3 = 1
  const double r = oracle::bisect([](double v) { return 3 * v - v * v * v - 1; }, 0.0, 1.0);
  CHECK(r == doctest::Approx(0.347296).epsilon(1e-6));
  const double quarter =
      oracle::adaptive([](double x) { return 0.75 * (1 - x * x); }, -1.0, -r, 1e-15);
  CHECK(quarter == doctest::Approx(0.25).epsilon(1e-12));

  const auto four = quantile_partition(bump, 4);
  CHECK(four.x[1] == doctest::Approx(-r).epsilon(1e-12));
  CHECK(std::abs(four.x[2]) < 1e-12);
  CHECK(four.x[3] == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("quantile partition skips interior gaps and rejects bad N") {
  const auto pc = InitialDensity::piecewise_constant({0.0, 1.0, 2.0, 3.0}, {1.0, 0.0, 1.0});
  const auto s = quantile_partition(pc, 2);
  // the middle particle sits at the start of the gap, sup{x : R(x) < 1}
  CHECK(s.x[1] == doctest::Approx(1.0));
  CHECK_THROWS(quantile_partition(pc, 1));
}

TEST_CASE("cell densities") {
  CHECK(cell_densities({{0.0, 1.0, 2.0}, 1.0, 0.0}) == std::vector<double>{1.0, 1.0});
  const auto r = cell_densities({{0.0, 0.5, 2.0}, 1.0, 0.0});
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(2.0 / 3.0));
  const auto bump = quantile_partition(InitialDensity::parabolic_bump(0.75, 0.0, 1.0), 2);
  for (double v : cell_densities(bump)) CHECK(v == doctest::Approx(0.5));
  CHECK_THROWS_AS(cell_densities({{0.0, 1.0, 1.0}, 1.0, 0.0}), CoincidentParticles);
}

TEST_CASE("Newtonian rank formula examples") {
  const ParticleState s{{-1.0, -0.2, 0.1, 0.5, 3.0}, 0.3, 0.0};
  const auto f = newtonian_forces_fast(s, ExternalPotential::zero(), 1);
  for (std::size_t i = 0; i < 5; ++i) CHECK(f[i] == doctest::Approx(0.3 * (2.0 * i - 4)));

  const ParticleState t{{0.0, 1.0, 5.0}, 0.5, 0.0};
  const auto a = newtonian_forces_fast(t, ExternalPotential::zero(), 1);
  const auto r = newtonian_forces_fast(t, ExternalPotential::zero(), -1);
  CHECK(a.f == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(r.f == std::vector<double>{1.0, 0.0, -1.0});

  const auto shifted = newtonian_forces_fast(t, ExternalPotential::linear(1.0), 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(shifted[i] == doctest::Approx(a[i] + 1.0));
}

TEST_CASE("forces of V = x^2/2 with repulsive Newtonian kernel") {
  ProblemSpec spec;
  spec.V = ExternalPotential::quadratic(1.0);
  spec.W = Interaction::newtonian(false);
  const ParticleState s{{-1.0, 0.0, 1.0}, 1.0, 0.0};
  const auto fast = compute_forces(s, spec);
  const auto direct = particle_forces(s, spec.V, spec.W);
  const std::vector<double> expect{1.0, 0.0, -1.0};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(fast[i] == doctest::Approx(expect[i]));
    CHECK(direct[i] == doctest::Approx(expect[i]));
  }
}

TEST_CASE("direct forces match an independent double loop for smooth kernels") {
  std::mt19937_64 rng(7);
  const auto W = Interaction::morse({});
  const auto V = ExternalPotential::quadratic(0.3);
  const ParticleState s{oracle::random_ordered(rng, 12), 1.0 / 11, 0.0};
  const auto f = particle_forces(s, V, W);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    double acc = 0.3 * s.x[i];
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if (j == i) continue;
      const double d = s.x[i] - s.x[j];
      const double r = std::abs(d);
      acc += s.h * oracle::sgn(d) * (std::exp(-r) - 0.5 / 0.5 * std::exp(-r / 0.5));
    }
    CHECK(f[i] == doctest::Approx(acc).epsilon(1e-13));
  }
  CHECK(particle_forces(s, ExternalPotential::zero(), Interaction::zero()).max_abs() == 0.0);
}

TEST_CASE("continuum Newtonian force") {
  const CellProfile rho({0.0, 2.0}, {1.0});
  const auto V = ExternalPotential::quadratic(1.0);
  const auto W = Interaction::newtonian(true);
  auto at1 = continuum_force(rho, V, W, 1.0);
  CHECK(at1.value == doctest::Approx(1.0));
  auto at05 = continuum_force(rho, V, W, 0.5);
  CHECK(at05.value == doctest::Approx(0.5 - 1.0));
  CHECK(at05.derivative == doctest::Approx(1.0 + 2.0));
  // trapezoid check of int sign(x - y) rho(y) dy at x = 0.5
  const int n = 200000;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double y = 2.0 * k / n;
    acc += (k == 0 || k == n ? 0.5 : 1.0) * oracle::sgn(0.5 - y);
  }
  CHECK(at05.value - 0.5 == doctest::Approx(acc * 2.0 / n).epsilon(1e-4));

  const auto none = continuum_force(rho, V, Interaction::zero(), 0.7);
  CHECK(none.value == doctest::Approx(0.7));
  CHECK(none.derivative == doctest::Approx(1.0));
}

TEST_CASE("continuum force leaving out the own cell") {
  const CellProfile rho({0.0, 1.0, 2.0}, {1.0, 3.0});
  const auto W = Interaction::newtonian(true);
  // at x = 0.25, own cell is (0,1); the rest is mass 3 ahead of x
  const auto F = continuum_force(rho, ExternalPotential::zero(), W, 0.25, ConvolutionMode::ExcludeOwnCell);
  CHECK(F.value == doctest::Approx(-3.0));
  CHECK(F.derivative == doctest::Approx(0.0));

  const auto G = Interaction::gaussian(1.0, 0.7);
  const auto full = continuum_force(rho, ExternalPotential::zero(), G, 0.25);
  const double ref = oracle::adaptive([&](double y) { return G.d1(0.25 - y) * rho(y); }, 0.0, 1.0, 1e-14) +
                     oracle::adaptive([&](double y) { return G.d1(0.25 - y) * rho(y); }, 1.0, 2.0, 1e-14);
  CHECK(full.value == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("force difference bounds hold on the quantile state") {
  ProblemSpec spec;
  spec.initial = InitialDensity::parabolic_bump(0.75, 0.0, 1.0);
  spec.W = Interaction::newtonian(true);
  spec.V = ExternalPotential::quadratic(1.0);
  const auto s = quantile_partition(spec.initial, 100);
  const auto report = check_force_bounds(s, compute_forces(s, spec), spec.force_lipschitz());
  CHECK(report.first_difference_ratio <= 1.0);
  CHECK(report.second_difference_ratio <= 1.0);
}
