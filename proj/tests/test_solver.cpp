#include <doctest.h>

#include <cmath>
#include <random>

#include "dpa/solver.hpp"
#include "oracles.hpp"

using namespace dpa;

namespace {

ProblemSpec bump_spec() {
  ProblemSpec s;
  s.initial = InitialDensity::parabolic_bump(0.75, 0.0, 1.0);
  return s;
}

// Upwind velocities written out case by case from the particle system.
std::vector<double> brute_velocities(const std::vector<double>& x, double h,
                                     const std::vector<double>& f, const Mobility& mob) {
  const std::size_t N = x.size() - 1;
  auto beta_cell = [&](long i) {
    if (i < 0 || i >= static_cast<long>(N)) return mob.beta(0.0);
    return mob.beta(h / (x[i + 1] - x[i]));
  };
  std::vector<double> v(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    const long k = static_cast<long>(i);
    if (f[i] < 0) v[i] = -beta_cell(k) * f[i];
    else v[i] = -beta_cell(k - 1) * f[i];
  }
  return v;
}

}  // namespace

TEST_CASE("upwind right-hand side examples") {
  ProblemSpec spec;
  spec.V = ExternalPotential::quadratic(1.0);
  spec.W = Interaction::newtonian(false);
  const ParticleState s{{-1.0, 0.0, 1.0}, 1.0, 0.0};
  const auto v = rhs(s, spec);
  CHECK(v[0] == doctest::Approx(-1.0));
  CHECK(v[1] == doctest::Approx(0.0));
  CHECK(v[2] == doctest::Approx(1.0));

  // saturated neighbours freeze an interior particle whatever its force
  ProblemSpec lin;
  lin.V = ExternalPotential::linear(5.0);
  const ParticleState sat{{0.0, 1.0, 2.0, 3.0}, 1.0, 0.0};
  CHECK(rhs(sat, lin)[1] == 0.0);
  CHECK(rhs(sat, lin)[2] == 0.0);

  ProblemSpec none;
  for (double u : rhs(sat, none)) CHECK(u == 0.0);
}

TEST_CASE("upwind velocities agree with a case-by-case evaluator") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto mob = Mobility::power_cap(1.5, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = oracle::random_ordered(rng, 9);
    const ParticleState s{x, 0.05, 0.0};
    ForceVector f;
    for (std::size_t i = 0; i < x.size(); ++i) f.f.push_back(g(rng));
    const auto v = upwind_velocities(s, f, mob);
    const auto ref = brute_velocities(x, 0.05, f.f, mob);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(v[i] == doctest::Approx(ref[i]).epsilon(1e-14));
  }
}

TEST_CASE("static problem stays put") {
  auto spec = bump_spec();
  IntegrateOptions opt;
  opt.t_end = 0.5;
  opt.dt = 0.1;
  const auto s0 = quantile_partition(spec.initial, 20);
  const auto traj = integrate(s0, spec, opt);
  CHECK(traj.size() == 6);
  for (const auto& s : traj.states) CHECK(s.x == s0.x);
  const auto report = check_cell_bounds(traj, spec);
  CHECK(report.min_lower_ratio >= 1.0);
}

TEST_CASE("uniform density upper ratio is one when static") {
  ProblemSpec spec;
  spec.initial = InitialDensity::uniform(0.0, 1.0, 1.0);
  IntegrateOptions opt;
  opt.t_end = 0.1;
  opt.dt = 0.05;
  const auto traj = integrate(quantile_partition(spec.initial, 10), spec, opt);
  const auto r = check_cell_bounds(traj, spec);
  REQUIRE(r.max_upper_ratio.has_value());
  CHECK(*r.max_upper_ratio == doctest::Approx(1.0));
  CHECK(r.min_lower_ratio == doctest::Approx(1.0));
}

TEST_CASE("translation under a linear potential with free mobility") {
  // V = -x, W = 0, density well below the cap: every particle moves with
  // velocity beta(rho) on its right cell.
  ProblemSpec spec;
  spec.mobility = Mobility::power_cap(100.0);
  spec.V = ExternalPotential::linear(-1.0);
  spec.initial = InitialDensity::uniform(0.0, 1.0, 1.0);
  const auto s0 = quantile_partition(spec.initial, 4);
  const auto v = rhs(s0, spec);
  CHECK(v[0] == doctest::Approx(spec.mobility.beta(1.0)));
  CHECK(v[4] == doctest::Approx(spec.mobility.beta(0.0)));
}

TEST_CASE("RK4 converges at fourth order and RK45 meets its tolerance") {
  auto spec = bump_spec();
  spec.W = Interaction::newtonian(false);
  spec.V = ExternalPotential::quadratic(1.0);
  const auto s0 = quantile_partition(spec.initial, 16);
  auto final_x = [&](double dt) {
    IntegrateOptions opt;
    opt.t_end = 0.5;
    opt.dt = dt;
    opt.output_intervals = 1;
    return integrate(s0, spec, opt).states.back().x;
  };
  const auto ref = final_x(1e-4);
  auto err = [&](double dt) {
    const auto x = final_x(dt);
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(x[i] - ref[i]));
    return e;
  };
  const double e1 = err(0.05);
  const double e2 = err(0.025);
  CHECK(e1 / e2 > 12.0);

  IntegrateOptions adaptive;
  adaptive.t_end = 0.5;
  adaptive.scheme = Scheme::RK45;
  adaptive.tolerance = 1e-10;
  adaptive.output_intervals = 5;
  const auto traj = integrate(s0, spec, adaptive);
  CHECK(traj.size() == 6);
  CHECK(traj.t_end() == doctest::Approx(0.5));
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(traj.states.back().x[i] == doctest::Approx(ref[i]).epsilon(1e-8));
}

TEST_CASE("integrator argument errors") {
  auto spec = bump_spec();
  const auto s0 = quantile_partition(spec.initial, 4);
  IntegrateOptions bad;
  bad.t_end = 0.0;
  CHECK_THROWS_AS(integrate(s0, spec, bad), std::invalid_argument);
  IntegrateOptions neg;
  neg.dt = -1.0;
  CHECK_THROWS_AS(integrate(s0, spec, neg), std::invalid_argument);
  ParticleState collapsed = s0;
  collapsed.x[2] = collapsed.x[1];
  CHECK_THROWS_AS(integrate(collapsed, spec, IntegrateOptions{}), CoincidentParticles);
}

TEST_CASE("step underflow is reported as a numerical error") {
  // strong attraction and a mobility that never vanishes: the outer particles collide
  ProblemSpec spec;
  spec.mobility = Mobility::tabulated({0.0, 1.0}, {1.0, 1.0});
  spec.initial = InitialDensity::uniform(0.0, 1.0, 1.0);
  spec.W = Interaction::regular([](double x) { return 50.0 * std::abs(x); },
                                [](double x) { return 50.0 * oracle::sgn(x); },
                                [](double) { return 0.0; }, 50.0, 0.0, 0.0);
  IntegrateOptions opt;
  opt.t_end = 1.0;
  opt.dt = 0.5;
  CHECK_THROWS_AS(integrate(quantile_partition(spec.initial, 2), spec, opt), NumericalError);
}

TEST_CASE("support functional") {
  CHECK(support_functional({{-1.0, 0.0, 2.0}, 1.0, 0.0}) == doctest::Approx(1 + 9 + 4));
}
