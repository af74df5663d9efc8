#pragma once

#include <stdexcept>
#include <vector>

#include "dpa/model.hpp"
#include "dpa/profile.hpp"

namespace dpa {

/// Ordered particle positions x_0 <= ... <= x_N; each of the N cells
/// (x_i, x_{i+1}) carries mass h.
struct ParticleState {
  std::vector<double> x;
  double h = 0.0;
  double t = 0.0;

  std::size_t cells() const { return x.empty() ? 0 : x.size() - 1; }
  double mass() const { return h * static_cast<double>(cells()); }
};

class QuantileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CoincidentParticles : public std::runtime_error {
 public:
  CoincidentParticles(std::size_t cell, double width);
  std::size_t cell() const { return cell_; }

 private:
  std::size_t cell_;
};

/// Equal-mass partition of the initial density into N cells. The interior
/// points are the generalized quantiles sup{x : R(x) < i h} of the cumulative
/// function R, found by bisection.
ParticleState quantile_partition(const InitialDensity& initial, std::size_t N);

/// rho_i = h / (x_{i+1} - x_i); throws CoincidentParticles on a non-positive
/// width.
std::vector<double> cell_densities(const ParticleState& state);

/// Piecewise-constant reconstruction sum_i rho_i 1_{[x_i, x_{i+1})}.
CellProfile to_profile(const ParticleState& state);

}  // namespace dpa
