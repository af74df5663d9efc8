#pragma once

#include <vector>

#include "dpa/model.hpp"
#include "dpa/particles.hpp"
#include "dpa/profile.hpp"

namespace dpa {

/// Particle forces f_i = V'(x_i) + sum_{j != i} h W'(x_i - x_j), i = 0..N.
struct ForceVector {
  std::vector<double> f;

  std::size_t size() const { return f.size(); }
  double operator[](std::size_t i) const { return f[i]; }
  /// max(f_i, 0)
  double plus(std::size_t i) const { return f[i] > 0.0 ? f[i] : 0.0; }
  /// min(f_i, 0)
  double minus(std::size_t i) const { return f[i] < 0.0 ? f[i] : 0.0; }
  double max_abs() const;
};

/// Direct O(N^2) evaluation, summed in ascending j for every i.
ForceVector particle_forces(const ParticleState& state, const ExternalPotential& V,
                            const Interaction& W);

/// O(N) rank formula for Newtonian kernels: f_i = V'(x_i) + sign * h (2i - N),
/// sign = +1 attractive, -1 repulsive.
ForceVector newtonian_forces_fast(const ParticleState& state, const ExternalPotential& V,
                                  int sign);

/// Fast path for Newtonian kernels, direct sum otherwise.
ForceVector compute_forces(const ParticleState& state, const ProblemSpec& spec);

enum class ConvolutionMode {
  Full,
  /// Leave the cell containing x out of the convolution.
  ExcludeOwnCell,
};

struct ContinuumForce {
  double value = 0.0;       // F(x) = V'(x) + (W' * rho)(x)
  double derivative = 0.0;  // dF/dx
};

/// Force field generated by a piecewise-constant density. Newtonian kernels
/// use the cumulative closed form F = V' +- (2 R(x) - m); other kernels use
/// the exact cell antiderivative int_{K_j} W'(x - y) dy = W(x - a_j) - W(x - b_j).
ContinuumForce continuum_force(const CellProfile& rho, const ExternalPotential& V,
                               const Interaction& W, double x,
                               ConvolutionMode mode = ConvolutionMode::Full);

/// Largest ratios of the observed force differences to their bounds
///   |f_{i+1} - f_i| <= c_f |K_i|
///   |f_{i+1} - 2 f_i + f_{i-1}| <= c_f (|K_i|^2 + |K_{i-1}|^2 + ||K_i| - |K_{i-1}||).
/// Both ratios are <= 1 when the bounds hold.
struct ForceBoundReport {
  double first_difference_ratio = 0.0;
  double second_difference_ratio = 0.0;
};

ForceBoundReport check_force_bounds(const ParticleState& state, const ForceVector& forces,
                                    double c_f);

}  // namespace dpa
