#include "dpa/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dpa {

namespace {

std::string underflow_message(double time, std::size_t cell) {
  std::ostringstream os;
  os.precision(17);
  os << "step size underflow at t = " << time << " (cell " << cell << " collapsing)";
  return os.str();
}

std::string non_finite_message(double time) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite particle state at t = " << time;
  return os.str();
}

// Index of the first cell with non-positive width, or npos.
std::size_t first_collapsed(const std::vector<double>& x) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i + 1] > x[i])) return i;
  }
  return std::string::npos;
}

bool all_finite(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

class System {
 public:
  System(const ProblemSpec& spec, double h) : spec_(spec), h_(h) {}

  // Velocity at x, or nullopt (with the offending cell) if x is not ordered.
  std::optional<std::vector<double>> velocity(const std::vector<double>& x,
                                              std::size_t& bad) const {
    bad = first_collapsed(x);
    if (bad != std::string::npos) return std::nullopt;
    scratch_.x = x;
    scratch_.h = h_;
    return rhs(scratch_, spec_);
  }

 private:
  const ProblemSpec& spec_;
  double h_;
  mutable ParticleState scratch_;
};

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& k) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
  return out;
}

// Classical RK4; nullopt when any stage or the result is disordered.
std::optional<std::vector<double>> rk4_step(const System& sys, const std::vector<double>& x,
                                            double dt, std::size_t& bad) {
  auto k1 = sys.velocity(x, bad);
  if (!k1) return std::nullopt;
  auto k2 = sys.velocity(axpy(x, 0.5 * dt, *k1), bad);
  if (!k2) return std::nullopt;
  auto k3 = sys.velocity(axpy(x, 0.5 * dt, *k2), bad);
  if (!k3) return std::nullopt;
  auto k4 = sys.velocity(axpy(x, dt, *k3), bad);
  if (!k4) return std::nullopt;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] + dt / 6.0 * ((*k1)[i] + 2.0 * (*k2)[i] + 2.0 * (*k3)[i] + (*k4)[i]);
  }
  bad = first_collapsed(out);
  if (bad != std::string::npos) return std::nullopt;
  return out;
}

void rk4_advance(const System& sys, std::vector<double>& x, double t, double dt,
                 double min_step) {
  std::size_t bad = 0;
  if (auto next = rk4_step(sys, x, dt, bad)) {
    if (!all_finite(*next)) throw NonFiniteState(t + dt);
    x = std::move(*next);
    return;
  }
  if (0.5 * dt < min_step) throw StepUnderflow(t, bad);
  rk4_advance(sys, x, t, 0.5 * dt, min_step);
  rk4_advance(sys, x, t + 0.5 * dt, 0.5 * dt, min_step);
}

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Rk45Result {
  std::vector<double> x;
  double error = 0.0;
};

std::optional<Rk45Result> rk45_step(const System& sys, const std::vector<double>& x, double dt,
                                    double tol, std::size_t& bad) {
  const std::size_t n = x.size();
  auto stage = [&](std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
    std::vector<double> y = x;
    for (const auto& [a, k] : terms) {
      for (std::size_t i = 0; i < n; ++i) y[i] += dt * a * (*k)[i];
    }
    return y;
  };
  auto k1 = sys.velocity(x, bad);
  if (!k1) return std::nullopt;
  auto k2 = sys.velocity(stage({{a21, &*k1}}), bad);
  if (!k2) return std::nullopt;
  auto k3 = sys.velocity(stage({{a31, &*k1}, {a32, &*k2}}), bad);
  if (!k3) return std::nullopt;
  auto k4 = sys.velocity(stage({{a41, &*k1}, {a42, &*k2}, {a43, &*k3}}), bad);
  if (!k4) return std::nullopt;
  auto k5 = sys.velocity(stage({{a51, &*k1}, {a52, &*k2}, {a53, &*k3}, {a54, &*k4}}), bad);
  if (!k5) return std::nullopt;
  auto k6 =
      sys.velocity(stage({{a61, &*k1}, {a62, &*k2}, {a63, &*k3}, {a64, &*k4}, {a65, &*k5}}), bad);
  if (!k6) return std::nullopt;
  Rk45Result r;
  r.x = stage({{b1, &*k1}, {b3, &*k3}, {b4, &*k4}, {b5, &*k5}, {b6, &*k6}});
  auto k7 = sys.velocity(r.x, bad);
  if (!k7) return std::nullopt;
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = dt * (e1 * (*k1)[i] + e3 * (*k3)[i] + e4 * (*k4)[i] + e5 * (*k5)[i] +
                           e6 * (*k6)[i] + e7 * (*k7)[i]);
    err = std::max(err, std::abs(e) / (tol * (1.0 + std::abs(x[i]))));
  }
  r.error = err;
  return r;
}

}  // namespace

StepUnderflow::StepUnderflow(double time, std::size_t cell)
    : NumericalError(underflow_message(time, cell)), time_(time), cell_(cell) {}

NonFiniteState::NonFiniteState(double time) : NumericalError(non_finite_message(time)) {}

std::vector<double> upwind_velocities(const ParticleState& state, const ForceVector& forces,
                                      const Mobility& mobility) {
  const std::size_t n = state.cells();
  const auto rho = cell_densities(state);
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i) beta[i] = mobility.beta(rho[i]);
  const double beta_out = mobility.beta(0.0);

  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double right = i < n ? beta[i] : beta_out;   // beta(rho_i)
    const double left = i > 0 ? beta[i - 1] : beta_out;  // beta(rho_{i-1})
    v[i] = -right * forces.minus(i) - left * forces.plus(i);
  }
  return v;
}

std::vector<double> rhs(const ParticleState& state, const ProblemSpec& spec) {
  return upwind_velocities(state, compute_forces(state, spec), spec.mobility);
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) t[k] = states[k].t;
  return t;
}

double default_time_step(const ParticleState& state, const ProblemSpec& spec) {
  const double fmax = compute_forces(state, spec).max_abs();
  const double speed = spec.M() * spec.mobility.beta_max() * fmax;
  if (!(speed > 0.0)) return 1e-3;
  return std::min(1e-3, 0.1 * state.h / speed);
}

Trajectory integrate(const ParticleState& initial, const ProblemSpec& spec,
                     const IntegrateOptions& options) {
  if (!(options.t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
  if (options.dt && !(*options.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (options.scheme == Scheme::RK45 && !(options.tolerance > 1e-12 && options.tolerance < 1e-2)) {
    throw std::invalid_argument("integrate: tolerance must lie in (1e-12, 1e-2)");
  }
  if (first_collapsed(initial.x) != std::string::npos) {
    throw CoincidentParticles(first_collapsed(initial.x), 0.0);
  }

  const System sys(spec, initial.h);
  const double t_end = options.t_end;
  const double t0 = initial.t;
  const double min_step = 1e-12 * t_end;

  Trajectory traj;
  std::vector<double> x = initial.x;
  auto store = [&](double t) {
    ParticleState s{x, initial.h, t};
    traj.velocities.push_back(rhs(s, spec));
    traj.states.push_back(std::move(s));
  };
  store(t0);

  const double dt_nominal = options.dt ? *options.dt : default_time_step(initial, spec);

  if (options.scheme == Scheme::RK4) {
    const std::size_t intervals = options.output_intervals;
    if (intervals == 0) {
      const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt_nominal - 1e-9));
      const double dt = t_end / static_cast<double>(steps);
      for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        rk4_advance(sys, x, t, dt, min_step);
        store(t0 + dt * static_cast<double>(k + 1));
      }
    } else {
      const double spacing = t_end / static_cast<double>(intervals);
      const auto sub = static_cast<std::size_t>(std::ceil(spacing / dt_nominal - 1e-9));
      const double dt = spacing / static_cast<double>(sub);
      for (std::size_t k = 0; k < intervals; ++k) {
        for (std::size_t s = 0; s < sub; ++s) {
          const double t = t0 + spacing * static_cast<double>(k) + dt * static_cast<double>(s);
          rk4_advance(sys, x, t, dt, min_step);
        }
        store(t0 + spacing * static_cast<double>(k + 1));
      }
    }
    return traj;
  }

  // adaptive Dormand-Prince
  std::vector<double> outputs;
  if (options.output_intervals > 0) {
    for (std::size_t k = 1; k <= options.output_intervals; ++k) {
      outputs.push_back(t0 + t_end * static_cast<double>(k) / static_cast<double>(options.output_intervals));
    }
  } else {
    outputs.push_back(t0 + t_end);
  }
  double t = t0;
  double dt = dt_nominal;
  std::size_t next_out = 0;
  while (next_out < outputs.size()) {
    const double target = outputs[next_out];
    const bool hits_output = t + dt >= target - 1e-14 * t_end;
    const double step = hits_output ? target - t : dt;
    std::size_t bad = 0;
    auto result = rk45_step(sys, x, step, options.tolerance, bad);
    if (!result) {
      if (0.5 * step < min_step) throw StepUnderflow(t, bad);
      dt = 0.5 * step;
      continue;
    }
    if (!all_finite(result->x)) throw NonFiniteState(t + step);
    if (result->error > 1.0) {
      const double shrink = std::max(0.2, 0.9 * std::pow(result->error, -0.2));
      if (step * shrink < min_step) throw StepUnderflow(t, first_collapsed(x));
      dt = step * shrink;
      continue;
    }
    x = std::move(result->x);
    t = hits_output ? target : t + step;
    const double grow = result->error > 0.0 ? std::min(5.0, 0.9 * std::pow(result->error, -0.2)) : 5.0;
    dt = std::max(step * grow, min_step);
    if (hits_output) {
      store(t);
      ++next_out;
    } else if (options.output_intervals == 0) {
      store(t);
    }
  }
  return traj;
}

CellBoundReport check_cell_bounds(const Trajectory& traj, const ProblemSpec& spec) {
  CellBoundReport r;
  const double M = spec.M();
  const double sigma = spec.initial.lower_bound();
  r.min_lower_ratio = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  for (const auto& s : traj.states) {
    for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
      const double w = s.x[i + 1] - s.x[i];
      r.min_lower_ratio = std::min(r.min_lower_ratio, w * M / s.h);
      upper = std::max(upper, w * sigma / s.h);
    }
  }
  if (sigma > 0.0) r.max_upper_ratio = upper;
  const double mu = 1.01 * spec.force_lipschitz() * spec.mobility.beta_max();
  r.upper_limit = std::exp(mu * (traj.t_end() - traj.states.front().t));
  return r;
}

double support_functional(const ParticleState& state) {
  const double a = state.x.front();
  const double b = state.x.back();
  return a * a + (b - a) * (b - a) + b * b;
}

}  // namespace dpa
