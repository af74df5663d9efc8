#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dpa/variational.hpp"
#include "oracles.hpp"

using namespace dpa;

namespace {

double energy_oracle(const std::vector<double>& x, double h, const ExternalPotential& V,
                     const Interaction& W, std::size_t i_end) {
  double acc = 0.0;
  for (std::size_t i = 0; i < i_end; ++i) {
    acc += V.value(x[i]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != i) acc += 0.5 * h * W.value(x[i] - x[j]);
    }
  }
  return acc;
}

ProblemSpec bump_config(int which) {
  ProblemSpec s;
  s.initial = InitialDensity::parabolic_bump(0.75, 0.0, 1.0);
  s.W = Interaction::newtonian(which == 0);
  if (which == 1) s.V = ExternalPotential::quadratic(1.0);
  return s;
}

}  // namespace

TEST_CASE("discrete energy examples") {
  const ParticleState s{{0.0, 1.0, 2.0}, 1.0, 0.0};
  CHECK(energy_Fh(s, ExternalPotential::zero(), Interaction::zero()) == 0.0);
  CHECK(energy_Fh(s, ExternalPotential::linear(1.0), Interaction::zero()) == doctest::Approx(1.0));
  CHECK(energy_Fh(s, ExternalPotential::linear(1.0), Interaction::zero(), EnergyRange::AllParticles) ==
        doctest::Approx(3.0));
  // i in {0, 1}, j != i in {0, 1, 2}: (1 + 2 + 1 + 1) / 2
  const auto W = Interaction::newtonian(true);
  CHECK(energy_oracle(s.x, 1.0, ExternalPotential::zero(), W, 2) == doctest::Approx(2.5));
  CHECK(energy_Fh(s, ExternalPotential::zero(), W) == doctest::Approx(2.5));
  CHECK(energy_Fh(s, ExternalPotential::zero(), W, EnergyRange::AllParticles) == doctest::Approx(4.0));
}

TEST_CASE("discrete energy agrees with the double loop on random states") {
  std::mt19937_64 rng(3);
  const auto V = ExternalPotential::quadratic(0.7);
  for (const auto& W : {Interaction::newtonian(true), Interaction::newtonian(false), Interaction::morse({})}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = oracle::random_ordered(rng, 8);
      const ParticleState s{x, 1.0 / 7, 0.0};
      CHECK(energy_Fh(s, V, W) == doctest::Approx(energy_oracle(x, s.h, V, W, 7)).epsilon(1e-12));
      CHECK(energy_Fh(s, V, W, EnergyRange::AllParticles) ==
            doctest::Approx(energy_oracle(x, s.h, V, W, 8)).epsilon(1e-12));
    }
  }
}

TEST_CASE("auxiliary energy examples") {
  const ParticleState s{{0.0, 1.0, 2.0}, 1.0, 0.0};
  CHECK(energy_Fhat(s, ExternalPotential::zero(), Interaction::zero()) == 0.0);
  ExternalPotential one = ExternalPotential::zero();
  one.value = [](double) { return 1.0; };
  CHECK(energy_Fhat(s, one, Interaction::zero()) == doctest::Approx(2.0));

  // avg over (0,1) x (1,2) of |x - y| is 1; Monte Carlo to 1e-2, nested quadrature to 1e-10
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double mc = 0.0;
  for (int k = 0; k < 10000; ++k) mc += std::abs(u(rng) - (1.0 + u(rng)));
  CHECK(mc / 10000 == doctest::Approx(1.0).epsilon(1e-2));
  const double nested = oracle::adaptive(
      [](double x) { return oracle::adaptive([x](double y) { return std::abs(x - y); }, 1.0, 2.0, 1e-13); },
      0.0, 1.0, 1e-13);
  CHECK(nested == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(energy_Fhat(s, ExternalPotential::zero(), Interaction::newtonian(true)) == doctest::Approx(0.5 * (nested + nested)));
}

TEST_CASE("auxiliary energy for a smooth kernel against nested quadrature") {
  const ParticleState s{{-0.5, 0.1, 0.4, 1.2}, 0.25, 0.0};
  const auto W = Interaction::gaussian(1.0, 0.8);
  const auto V = ExternalPotential::quadratic(1.0);
  double ref = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double rho = s.h / (s.x[i + 1] - s.x[i]);
    ref += rho * oracle::adaptive([](double x) { return 0.5 * x * x; }, s.x[i], s.x[i + 1], 1e-14);
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double area = (s.x[i + 1] - s.x[i]) * (s.x[j + 1] - s.x[j]);
      const double I = oracle::adaptive(
          [&](double x) {
            return oracle::adaptive([&](double y) { return W.value(x - y); }, s.x[j], s.x[j + 1], 1e-14);
          },
          s.x[i], s.x[i + 1], 1e-14);
      ref += 0.5 * s.h * s.h * I / area;
    }
  }
  CHECK(energy_Fhat(s, V, W) == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("dual dissipation examples") {
  const auto mob = Mobility::power_cap(1.0);
  const ParticleState one{{0.0, 2.0}, 1.0, 0.0};  // rho_0 = 0.5
  CHECK(dual_dissipation(one, mob, {0.0, 0.0}) == 0.0);
  // i = 0: beta(rho_0) (zeta_0^+)^2 = 0.5; i = 1: beta(rho_0) (zeta_1^-)^2 = 0.5
  const double ref = oracle::dual_form({1.0, 0.5}, {0.5, 1.0}, {1.0, -1.0});
  CHECK(ref == doctest::Approx(0.5));
  CHECK(dual_dissipation(one, mob, {1.0, -1.0}) == doctest::Approx(ref));

  const ParticleState saturated{{0.0, 1.0, 2.0, 3.0}, 1.0, 0.0};
  CHECK(dual_dissipation(saturated, mob, {0.0, 2.0, -3.0, 0.0}) == 0.0);
  CHECK_THROWS(dual_dissipation(saturated, mob, {1.0}));
}

TEST_CASE("dissipation potential conventions") {
  const auto mob = Mobility::power_cap(1.0);
  const ParticleState saturated{{0.0, 1.0, 2.0}, 1.0, 0.0};
  CHECK(dissipation(saturated, mob, {0.0, 0.0, 0.0}) == 0.0);
  CHECK(std::isinf(dissipation(saturated, mob, {0.0, 0.1, 0.0})));
  CHECK(dissipation(saturated, mob, {-0.5, 0.0, 0.5}) == doctest::Approx(0.25));
}

TEST_CASE("Fenchel-Young inequality on random small instances") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto mob = Mobility::power_cap(2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const ParticleState s{oracle::random_ordered(rng, n, 0.0, 1.0), 0.1, 0.0};
    std::vector<double> zeta(n);
    for (auto& z : zeta) z = g(rng);
    const double rs = dual_dissipation(s, mob, zeta);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> j(n);
      double pair = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        j[i] = 2.0 * g(rng);
        pair += zeta[i] * j[i];
      }
      CHECK(dissipation(s, mob, j) + rs >= pair - 1e-12);
    }
    // coordinate-wise grid maximisation of <zeta, j> - R(j) recovers R*
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = 0.0;
      for (int k = -20000; k <= 20000; ++k) {
        std::vector<double> j(n, 0.0);
        j[i] = k * 1e-3;
        best = std::max(best, zeta[i] * j[i] - dissipation(s, mob, j));
      }
      sup += best;
    }
    CHECK(sup == doctest::Approx(rs).epsilon(1e-5));
    // equality at j = d R*(zeta)
    ForceVector f;
    for (double z : zeta) f.f.push_back(-z);
    const auto j = upwind_velocities(s, f, mob);
    double pair = 0.0;
    for (std::size_t i = 0; i < n; ++i) pair += zeta[i] * j[i];
    CHECK(dissipation(s, mob, j) + rs == doctest::Approx(pair).epsilon(1e-12));
    CHECK(dissipation_functional(s, mob, f) == doctest::Approx(2.0 * rs).epsilon(1e-12));
  }
}

TEST_CASE("energy-dissipation balance for a static problem is exact") {
  ProblemSpec spec;
  spec.initial = InitialDensity::parabolic_bump(0.75, 0.0, 1.0);
  IntegrateOptions opt;
  opt.dt = 0.1;
  const auto traj = integrate(quantile_partition(spec.initial, 10), spec, opt);
  CHECK(edb_residual(traj, spec, 0.0, 1.0) == 0.0);
}

TEST_CASE("gradient series along the attractive run") {
  const auto spec = bump_config(0);
  IntegrateOptions opt;
  opt.dt = 1e-3;
  const auto traj = integrate(quantile_partition(spec.initial, 50), spec, opt);
  const auto rec = gradient_series(traj, spec, {EnergyRange::AllParticles, false});
  REQUIRE(rec.size() == traj.size());
  for (std::size_t k = 0; k < rec.size(); ++k) {
    CHECK(rec[k].D_h == doctest::Approx(2.0 * rec[k].R_h_star).epsilon(1e-12));
    if (k > 0) CHECK(rec[k].F_h <= rec[k - 1].F_h + 1e-12);
  }
  CHECK(std::abs(rec.back().edb_partial) == doctest::Approx(edb_residual(traj, spec, 0.0, 1.0)).epsilon(1e-6));
  CHECK(fenchel_young_gap(traj, spec) < 1e-12);
  std::ostringstream os;
  write_gradient_csv(os, rec);
  CHECK(os.str().substr(0, os.str().find('\n')) == "t,F_h,Fhat_h,R_h,R_h_star,D_h,edb_partial");
}

TEST_CASE("energy without the last particle leaves a gap in the balance") {
  const auto spec = bump_config(0);
  IntegrateOptions opt;
  opt.dt = 1e-3;
  const auto traj = integrate(quantile_partition(spec.initial, 50), spec, opt);
  const double all = edb_residual(traj, spec, 0.0, 1.0, EnergyRange::AllParticles);
  const double partial = edb_residual(traj, spec, 0.0, 1.0, EnergyRange::ExcludeLast);
  CHECK(all < 1e-8);
  CHECK(partial > 1e3 * all);
}

TEST_CASE("continuous dual dissipation") {
  ProblemSpec spec;
  spec.V = ExternalPotential::linear(1.0);
  const Snapshot half{0.0, {0.0, 1.0}, {0.0, 0.0}, 0.5};
  CHECK(continuous_Rstar(half, spec) == doctest::Approx(0.125));
  spec.V = ExternalPotential::zero();
  CHECK(continuous_Rstar(half, spec) == 0.0);
  spec.V = ExternalPotential::linear(1.0);
  const Snapshot capped{0.0, {0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}, 1.0};
  CHECK(continuous_Rstar(capped, spec) == 0.0);
}

TEST_CASE("continuous and discrete dual dissipation agree to O(h)") {
  for (int which : {0, 1}) {
    const auto spec = bump_config(which);
    std::vector<double> gap;
    for (std::size_t N : {50, 100, 200}) {
      const auto s = quantile_partition(spec.initial, N);
      const auto f = compute_forces(s, spec);
      std::vector<double> neg(f.f.size());
      for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -f[i];
      const Snapshot snap{0.0, s.x, std::vector<double>(s.x.size(), 0.0), s.h};
      const double cont = continuous_Rstar(snap, spec, ConvolutionMode::ExcludeOwnCell);
      gap.push_back(std::max(0.0, cont - s.h * dual_dissipation(s, spec.mobility, neg)) / s.h);
    }
    // fitted c_D stays bounded under refinement
    CHECK(gap[2] <= 2.0 * gap[0] + 1e-9);
  }
}

TEST_CASE("action discrepancy is first order in h") {
  const auto spec = bump_config(1);
  auto phi = [](double x) { return std::exp(-x * x); };
  std::vector<double> d;
  for (std::size_t N : {50, 100, 200}) {
    const auto s = quantile_partition(spec.initial, N);
    const Snapshot snap{0.0, s.x, rhs(s, spec), s.h};
    d.push_back(action_discrepancy(snap, spec.mobility, phi));
  }
  CHECK(d[1] < 0.7 * d[0]);
  CHECK(d[2] < 0.7 * d[1]);
}
