#include <doctest.h>

#include <cmath>
#include <vector>

#include "dpa/profile.hpp"
#include "dpa/quadrature.hpp"
#include "oracles.hpp"

using namespace dpa;

TEST_CASE("Gauss-Legendre 4 is exact to degree 7") {
  auto p7 = [](double x) { return 3 * std::pow(x, 7) - x * x + 2; };
  // antiderivative 3/8 x^8 - x^3/3 + 2x on [-0.5, 1.5]
  auto P = [](double x) { return 3.0 / 8 * std::pow(x, 8) - x * x * x / 3 + 2 * x; };
  CHECK(gauss_legendre4(p7, -0.5, 1.5) == doctest::Approx(P(1.5) - P(-0.5)).epsilon(1e-14));
  CHECK(gauss_legendre4_composite([](double x) { return std::sin(x); }, 0.0, M_PI, 8) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("Simpson on non-uniform grids integrates quadratics exactly") {
  const std::vector<double> t{0.0, 0.1, 0.35, 0.5, 0.9, 1.0, 1.3};
  std::vector<double> y;
  for (double s : t) y.push_back(3 * s * s - 2 * s + 1);
  // odd number of intervals: the tail uses the last three nodes
  CHECK(simpson(t, y) == doctest::Approx(std::pow(1.3, 3) - 1.3 * 1.3 + 1.3).epsilon(1e-12));
  const auto run = cumulative_simpson(t, y);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double s = t[k];
    CHECK(run[k] == doctest::Approx(s * s * s - s * s + s).epsilon(1e-12));
  }
}

TEST_CASE("Simpson on a uniform grid integrates cubics exactly") {
  std::vector<double> t, y;
  for (int k = 0; k <= 6; ++k) {
    t.push_back(0.25 * k);
    y.push_back(t.back() * t.back() * t.back());
  }
  CHECK(simpson(t, y) == doctest::Approx(std::pow(1.5, 4) / 4).epsilon(1e-13));
}

TEST_CASE("Simpson converges at fourth order on smooth data") {
  auto err = [](int n) {
    std::vector<double> t(n + 1), y(n + 1);
    for (int k = 0; k <= n; ++k) {
      t[k] = 2.0 * k / n;
      y[k] = std::exp(t[k]);
    }
    return std::abs(simpson(t, y) - (std::exp(2.0) - 1));
  };
  CHECK(err(20) / err(40) > 14.0);
}

TEST_CASE("cell profile lookup and cumulative") {
  const CellProfile p({0.0, 1.0, 3.0}, {2.0, 0.5});
  CHECK(p.mass() == doctest::Approx(3.0));
  CHECK(p.locate(-0.1) == -1);
  CHECK(p.locate(0.0) == 0);
  CHECK(p.locate(1.0) == 1);
  CHECK(p.locate(3.0) == -1);
  CHECK(p(2.0) == 0.5);
  CHECK(p.cumulative(2.0) == doctest::Approx(2.5));
  CHECK(p.cumulative(10.0) == doctest::Approx(3.0));
}

TEST_CASE("L1 distance of profiles against a Riemann sum") {
  const std::vector<double> ea{0.0, 0.4, 1.0}, va{1.0, 2.0};
  const std::vector<double> eb{0.2, 0.7, 1.3}, vb{1.5, 0.5};
  const CellProfile a(ea, va), b(eb, vb);
  const double ref = oracle::riemann(
      [&](double x) { return std::abs(oracle::pc_eval(ea, va, x) - oracle::pc_eval(eb, vb, x)); },
      -0.5, 2.0, 200000);
  CHECK(l1_distance(a, b) == doctest::Approx(ref).epsilon(1e-4));
  CHECK(l1_distance(a, a) == 0.0);
  // disjoint unit-mass indicators
  CHECK(l1_distance(CellProfile({0, 1}, {1}), CellProfile({2, 3}, {1})) == doctest::Approx(2.0));
}

TEST_CASE("W1 of one-cell profiles") {
  // mass 1 on (0,1) against mass 1 on (0,2): CDFs x and x/2
  const CellProfile a({0.0, 1.0}, {1.0}), b({0.0, 2.0}, {0.5});
  const double ref = oracle::riemann(
      [](double x) { return std::abs(std::min(x, 1.0) - x / 2); }, 0.0, 2.0, 100000);
  CHECK(ref == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(w1_distance(a, b) == doctest::Approx(ref).epsilon(1e-8));
  CHECK(w1_distance(a, a) == 0.0);
}

TEST_CASE("W1 translation identity, symmetry and triangle inequality") {
  const CellProfile p({0.0, 0.3, 1.0, 1.2}, {1.0, 0.2, 3.0});
  const double d = 0.37;
  const CellProfile q({d, 0.3 + d, 1.0 + d, 1.2 + d}, {1.0, 0.2, 3.0});
  CHECK(w1_distance(p, q) == doctest::Approx(d).epsilon(1e-12));
  const CellProfile r({-0.5, 0.5, 0.9}, {0.3, 1.0});
  CHECK(w1_distance(p, r) == doctest::Approx(w1_distance(r, p)));
  CHECK(w1_distance(p, r) <= w1_distance(p, q) + w1_distance(q, r) + 1e-14);
}
