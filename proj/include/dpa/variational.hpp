#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "dpa/forces.hpp"
#include "dpa/model.hpp"
#include "dpa/particles.hpp"
#include "dpa/reconstruct.hpp"
#include "dpa/solver.hpp"

namespace dpa {

/// Index range of the discrete energy.
///   ExcludeLast: sum_{i=0}^{N-1} V(x_i) + 1/2 sum_{i=0}^{N-1} sum_{j=0..N, j!=i} h W(x_i - x_j)
///   AllParticles:  both sums over i = 0..N (and j = 0..N)
/// Only AllParticles has the forces f_i as its exact gradient, so the
/// energy-dissipation balance closes exactly for it.
enum class EnergyRange { ExcludeLast, AllParticles };

double energy_Fh(const ParticleState& state, const ExternalPotential& V, const Interaction& W,
                 EnergyRange range = EnergyRange::ExcludeLast);

/// int V rho_hat + 1/2 sum_{i != j} h^2 avg_{K_i} avg_{K_j} W(x - y), over
/// the N cells.
double energy_Fhat(const ParticleState& state, const ExternalPotential& V, const Interaction& W);

/// 1/2 sum_{i=0}^N [beta(rho_{i-1}) (zeta_i^-)^2 + beta(rho_i) (zeta_i^+)^2], rho_{-1} = rho_N = 0.
double dual_dissipation(const ParticleState& state, const Mobility& mobility,
                        const std::vector<double>& zeta);

/// Legendre dual of dual_dissipation in zeta. 0^2/0 counts as 0, a
/// positive square over 0 gives +inf.
double dissipation(const ParticleState& state, const Mobility& mobility,
                   const std::vector<double>& j);

/// sum_{i=0}^N [beta(rho_i) (f_i^-)^2 + beta(rho_{i-1}) (f_i^+)^2]
double dissipation_functional(const ParticleState& state, const Mobility& mobility,
                              const ForceVector& forces);

struct GradientRecord {
  double t = 0.0;
  double F_h = 0.0;
  double Fhat_h = 0.0;
  double R_h = 0.0;
  double R_h_star = 0.0;
  double D_h = 0.0;
  /// int_0^t (R_h + R_h*) + F_h(t) - F_h(0)
  double edb_partial = 0.0;
};

struct GradientOptions {
  EnergyRange range = EnergyRange::AllParticles;
  bool aux_energy = true;
};

std::vector<GradientRecord> gradient_series(const Trajectory& traj, const ProblemSpec& spec,
                                            const GradientOptions& options = {});

/// |int_s^t (R_h + R_h*) dr + F_h(t) - F_h(s)| with composite Simpson over
/// the stored times in [s, t].
double edb_residual(const Trajectory& traj, const ProblemSpec& spec, double s, double t,
                    EnergyRange range = EnergyRange::AllParticles);

/// max over stored times of |R_h(x, x') - R_h*(x, -f)| / (1 + R_h*(x, -f)).
double fenchel_young_gap(const Trajectory& traj, const ProblemSpec& spec);

/// 1/2 int |F|^2 theta(rho_hat) dx with the continuum force of the
/// reconstructed density.
double continuous_Rstar(const Snapshot& snapshot, const ProblemSpec& spec,
                        ConvolutionMode mode = ConvolutionMode::Full);

/// |[<phi, j_hat> - 1/2 int phi^2 theta(rho_hat)] - h [<xi, x'> - R_h*(x, xi)]|
/// with xi_i = phi(x_i).
double action_discrepancy(const Snapshot& snapshot, const Mobility& mobility,
                          const std::function<double(double)>& phi);

/// t,F_h,Fhat_h,R_h,R_h_star,D_h,edb_partial
void write_gradient_csv(std::ostream& os, const std::vector<GradientRecord>& records);

}  // namespace dpa
