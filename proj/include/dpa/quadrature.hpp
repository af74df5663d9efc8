#pragma once

#include <array>
#include <span>
#include <vector>

namespace dpa {

/// 4-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 7.
struct GaussLegendre4 {
  static constexpr std::array<double, 4> nodes = {-0.8611363115940526, -0.3399810435848563,
                                                  0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> weights = {0.3478548451374538, 0.6521451548625461,
                                                    0.6521451548625461, 0.3478548451374538};
};

template <class F>
double gauss_legendre4(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    sum += GaussLegendre4::weights[k] * f(mid + half * GaussLegendre4::nodes[k]);
  }
  return half * sum;
}

/// Composite Gauss-Legendre over `pieces` equal sub-intervals.
template <class F>
double gauss_legendre4_composite(F&& f, double a, double b, int pieces) {
  double sum = 0.0;
  const double w = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    sum += gauss_legendre4(f, a + k * w, a + (k + 1) * w);
  }
  return sum;
}

/// Composite Simpson rule on a (possibly non-uniform) grid. Pairs of
/// intervals use the three-point non-uniform Simpson formula; a trailing odd
/// interval is integrated with the quadratic through the last three nodes.
double simpson(std::span<const double> t, std::span<const double> y);

/// Running integral from t[0] to every t[k], fourth-order accurate at every
/// node for smooth data.
std::vector<double> cumulative_simpson(std::span<const double> t, std::span<const double> y);

}  // namespace dpa
