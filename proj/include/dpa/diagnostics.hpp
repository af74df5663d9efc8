#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpa/model.hpp"
#include "dpa/particles.hpp"
#include "dpa/profile.hpp"
#include "dpa/solver.hpp"

namespace dpa {

struct DiagnosticsRecord {
  double t = 0.0;
  double l1_mass = 0.0;
  double bv_norm = 0.0;
  double tv_only = 0.0;
  double h1_proxy = 0.0;
  double w1_from_initial = 0.0;
  double support_measure = 0.0;
  double max_density = 0.0;
  double min_cell_ratio = 0.0;
};

/// rho_0 + sum |rho_i - rho_{i-1}| + rho_{N-1}
double total_variation(const std::vector<double>& rho);
double bv_norm(const ParticleState& state);

/// H1 norm of the continuous piecewise-linear function through the cell
/// midpoints (mid_i, rho_i), pinned to 0 at x_0 and x_N.
double h1_proxy(const ParticleState& state);

DiagnosticsRecord diagnose(const ParticleState& state, const CellProfile& initial, double M);
std::vector<DiagnosticsRecord> diagnostics_series(const Trajectory& traj, const ProblemSpec& spec);

/// t,mass,bv,tv,h1,w1_from_initial,support,max_density,min_cell_ratio
void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

/// Largest W1(rho_s/m, rho_t/m) / |t - s| over all stored pairs.
double w1_lipschitz_ratio(const Trajectory& traj);

/// A density frame of some solver at time t.
struct ProfileFrame {
  double t = 0.0;
  CellProfile rho;
};

std::vector<ProfileFrame> frames_of(const Trajectory& traj);

/// Non-negative space-time test function with compact support in
/// [0, T) x [x_lo, x_hi].
struct SpaceTimeTest {
  std::function<double(double, double)> value;
  std::function<double(double, double)> dt;
  std::function<double(double, double)> dx;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double t_end = 0.0;
};

/// (1 - t/T) (1 - ((x - a)/r)^2)^3_+
SpaceTimeTest bump_test_function(double a, double r, double T);

struct EntropyTest {
  std::string id;
  SpaceTimeTest phi;
};

/// Three centers times three radii covering [lo, hi].
std::vector<EntropyTest> entropy_test_grid(double lo, double hi, double T);

/// int eta_c(rho_0) phi(0) + int int eta_c(rho) phi_t
///   - sign(rho - c) [(theta(rho) - theta(c)) F phi_x - theta(c) F_x phi]
/// with eta_c(s) = |s - c|, sign(0) = 0, F the continuum force of each
/// frame. Space integrals are Gauss per piece between cell edges, the time
/// integral composite Simpson over the frames. `window` bounds the region
/// on which the frames are defined; the test support must lie inside it.
double entropy_residual(const std::vector<ProfileFrame>& frames, const ProblemSpec& spec, double c,
                        const SpaceTimeTest& phi, double window_lo, double window_hi);

struct EntropyRow {
  double c = 0.0;
  std::string phi_id;
  double residual = 0.0;
};

/// c,phi_id,residual
void write_entropy_csv(std::ostream& os, const std::vector<EntropyRow>& rows);

}  // namespace dpa
