#include "dpa/forces.hpp"

#include <algorithm>
#include <cmath>

namespace dpa {

double ForceVector::max_abs() const {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

ForceVector particle_forces(const ParticleState& state, const ExternalPotential& V,
                            const Interaction& W) {
  const std::size_t n = state.x.size();
  ForceVector out;
  out.f.resize(n);
  const bool interacting = W.kind() != InteractionKind::Zero;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    if (interacting) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        acc += state.h * W.d1(state.x[i] - state.x[j]);
      }
    }
    out.f[i] = V.d1(state.x[i]) + acc;
  }
  return out;
}

ForceVector newtonian_forces_fast(const ParticleState& state, const ExternalPotential& V,
                                  int sign) {
  const std::size_t n = state.x.size();
  const auto N = static_cast<double>(state.cells());
  ForceVector out;
  out.f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.f[i] = V.d1(state.x[i]) + sign * state.h * (2.0 * static_cast<double>(i) - N);
  }
  return out;
}

ForceVector compute_forces(const ParticleState& state, const ProblemSpec& spec) {
  if (spec.W.is_newtonian()) return newtonian_forces_fast(state, spec.V, spec.W.newtonian_sign());
  return particle_forces(state, spec.V, spec.W);
}

ContinuumForce continuum_force(const CellProfile& rho, const ExternalPotential& V,
                               const Interaction& W, double x, ConvolutionMode mode) {
  ContinuumForce out{V.d1(x), V.d2(x)};
  if (W.kind() == InteractionKind::Zero) return out;

  const long own = mode == ConvolutionMode::ExcludeOwnCell ? rho.locate(x) : -1;
  const auto& e = rho.edges();
  const auto& v = rho.values();

  if (W.is_newtonian()) {
    const int s = W.newtonian_sign();
    const double ahead = rho.cumulative(x);
    out.value += s * (2.0 * ahead - rho.mass());
    out.derivative += s * 2.0 * rho(x);
    if (own >= 0) {
      const auto k = static_cast<std::size_t>(own);
      // own-cell part of int sign(x - y) rho(y) dy
      out.value -= s * v[k] * ((x - e[k]) - (e[k + 1] - x));
      out.derivative -= s * 2.0 * v[k];
    }
    return out;
  }

  double value = 0.0;
  double slope = 0.0;
  for (std::size_t j = 0; j < rho.cells(); ++j) {
    if (static_cast<long>(j) == own || v[j] == 0.0) continue;
    value += v[j] * (W.value(x - e[j]) - W.value(x - e[j + 1]));
    slope += v[j] * (W.d1(x - e[j]) - W.d1(x - e[j + 1]));
  }
  out.value += value;
  out.derivative += slope;
  return out;
}

ForceBoundReport check_force_bounds(const ParticleState& state, const ForceVector& forces,
                                    double c_f) {
  ForceBoundReport r;
  const std::size_t n = state.cells();
  for (std::size_t i = 0; i < n; ++i) {
    const double k = state.x[i + 1] - state.x[i];
    const double diff = std::abs(forces[i + 1] - forces[i]);
    if (diff > 0.0) r.first_difference_ratio = std::max(r.first_difference_ratio, diff / (c_f * k));
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double ki = state.x[i + 1] - state.x[i];
    const double km = state.x[i] - state.x[i - 1];
    const double second = std::abs(forces[i + 1] - 2.0 * forces[i] + forces[i - 1]);
    const double bound = c_f * (ki * ki + km * km + std::abs(ki - km));
    if (second > 0.0) r.second_difference_ratio = std::max(r.second_difference_ratio, second / bound);
  }
  return r;
}

}  // namespace dpa
