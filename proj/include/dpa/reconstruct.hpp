#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "dpa/particles.hpp"
#include "dpa/profile.hpp"
#include "dpa/solver.hpp"

namespace dpa {

/// Particle positions and velocities at one stored time.
struct Snapshot {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> v;
  double h = 0.0;

  std::size_t cells() const { return x.size() - 1; }
  ParticleState state() const { return ParticleState{x, h, t}; }
  CellProfile profile() const { return to_profile(state()); }
  /// Linear in-cell velocity u_i(x) between v_i and v_{i+1}.
  double velocity_in_cell(std::size_t i, double y) const;
};

/// Piecewise-constant density and piecewise-linear-velocity flux on the
/// moving cells of a trajectory.
class ReconstructedFields {
 public:
  explicit ReconstructedFields(const Trajectory& traj);

  std::size_t size() const { return snapshots_.size(); }
  const Snapshot& operator[](std::size_t k) const { return snapshots_[k]; }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  std::vector<double> times() const;
  double mass() const { return mass_; }

  /// Snapshot stored at time t; throws std::out_of_range otherwise.
  const Snapshot& at(double t) const;
  std::size_t index_of(double t) const;

 private:
  std::vector<Snapshot> snapshots_;
  double mass_ = 0.0;
};

/// rho_i on [x_i, x_{i+1}), 0 elsewhere.
double density_eval(const ReconstructedFields& fields, double t, double x);
/// rho_i u_i(x) on [x_i, x_{i+1}), 0 elsewhere.
double flux_eval(const ReconstructedFields& fields, double t, double x);

/// Sum of rho_i |K_i|.
double total_mass(const Snapshot& s);
/// Integral of |flux| over the line, exact.
double flux_l1(const Snapshot& s);

/// Bounded Lipschitz test function with its derivative.
struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// <phi, rho>; 4-point Gauss per cell, exact for polynomial phi up to degree 7.
double pair_density(const Snapshot& s, const std::function<double(double)>& phi);
/// <phi, flux>; exact for polynomial phi up to degree 6.
double pair_flux(const Snapshot& s, const std::function<double(double)>& phi);

/// | <phi, rho_t> - <phi, rho_s> - int_s^t <phi', j_r> dr |, with the time
/// integral taken by composite Simpson over the stored times in [s, t].
double continuity_residual(const ReconstructedFields& fields, const TestFunction& phi, double s,
                           double t);

/// One row per cell per stored time: t,x_left,x_right,rho,u_left,u_right
void write_snapshot_csv(std::ostream& os, const ReconstructedFields& fields);

}  // namespace dpa
