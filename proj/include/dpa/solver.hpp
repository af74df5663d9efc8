#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "dpa/forces.hpp"
#include "dpa/model.hpp"
#include "dpa/particles.hpp"

namespace dpa {

/// Upwind particle velocities
///   x'_0 = -beta(rho_0) f_0^- - beta(0) f_0^+
///   x'_i = -beta(rho_i) f_i^- - beta(rho_{i-1}) f_i^+
///   x'_N = -beta(0) f_N^- - beta(rho_{N-1}) f_N^+
/// i.e. rho_{-1} = rho_N = 0.
std::vector<double> upwind_velocities(const ParticleState& state, const ForceVector& forces,
                                      const Mobility& mobility);

std::vector<double> rhs(const ParticleState& state, const ProblemSpec& spec);

enum class Scheme { RK4, RK45 };

struct IntegrateOptions {
  double t_end = 1.0;
  Scheme scheme = Scheme::RK4;
  /// RK4 step; default_time_step() when unset. Also the initial RK45 step.
  std::optional<double> dt;
  /// RK45 mixed absolute/relative tolerance.
  double tolerance = 1e-8;
  /// Number of equal output intervals; 0 stores every accepted step.
  std::size_t output_intervals = 0;
};

/// States and velocities at the stored times. velocities[k] is the
/// right-hand side evaluated at states[k].
struct Trajectory {
  std::vector<ParticleState> states;
  std::vector<std::vector<double>> velocities;

  std::size_t size() const { return states.size(); }
  std::vector<double> times() const;
  double h() const { return states.front().h; }
  double t_end() const { return states.back().t; }
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepUnderflow : public NumericalError {
 public:
  StepUnderflow(double time, std::size_t cell);
  double time() const { return time_; }
  std::size_t cell() const { return cell_; }

 private:
  double time_;
  std::size_t cell_;
};

class NonFiniteState : public NumericalError {
 public:
  explicit NonFiniteState(double time);
};

/// min(1e-3, 0.1 h / (M beta_max max|f|)) evaluated at the given state.
double default_time_step(const ParticleState& state, const ProblemSpec& spec);

/// Integrates the particle system. A step that would reorder particles (at
/// any stage) is rejected and retried as two half steps, down to
/// 1e-12 * t_end.
Trajectory integrate(const ParticleState& initial, const ProblemSpec& spec,
                     const IntegrateOptions& options);

struct CellBoundReport {
  /// min over time and cells of |K_i| M / h; the lower bound asks for >= 1.
  double min_lower_ratio = 0.0;
  /// max over time and cells of |K_i| sigma / h, when sigma > 0.
  std::optional<double> max_upper_ratio;
  /// exp(mu T) with mu = 1.01 c_f beta_max.
  double upper_limit = 0.0;
};

CellBoundReport check_cell_bounds(const Trajectory& traj, const ProblemSpec& spec);

/// |x_0|^2 + |x_N - x_0|^2 + |x_N|^2
double support_functional(const ParticleState& state);

}  // namespace dpa
