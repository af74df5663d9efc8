#include "dpa/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "dpa/csv.hpp"
#include "dpa/quadrature.hpp"

namespace dpa {

namespace {

// sum_{i != j} over all n points of s |x_i - x_j| / 2 for sorted x.
double newtonian_pair_sum(const std::vector<double>& x, int s) {
  const auto n = static_cast<double>(x.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * (2.0 * static_cast<double>(k) - n + 1.0);
  return s * acc;
}

// beta(rho_i) for i = -1..N, stored at offset +1.
std::vector<double> padded_beta(const ParticleState& state, const Mobility& mobility) {
  const auto rho = cell_densities(state);
  std::vector<double> b(rho.size() + 2);
  b.front() = mobility.beta(0.0);
  b.back() = mobility.beta(0.0);
  for (std::size_t i = 0; i < rho.size(); ++i) b[i + 1] = mobility.beta(rho[i]);
  return b;
}

double cell_average_W(const Interaction& W, double a, double b, double c, double d) {
  if (W.is_newtonian()) return W.value(0.5 * (a + b) - 0.5 * (c + d));
  const double inner = gauss_legendre4(
      [&](double x) { return gauss_legendre4([&](double y) { return W.value(x - y); }, c, d); },
      a, b);
  return inner / ((b - a) * (d - c));
}

}  // namespace

double energy_Fh(const ParticleState& state, const ExternalPotential& V, const Interaction& W,
                 EnergyRange range) {
  const std::size_t n = state.x.size();
  const std::size_t last = range == EnergyRange::AllParticles ? n : n - 1;
  double pot = 0.0;
  for (std::size_t i = 0; i < last; ++i) pot += V.value(state.x[i]);
  if (W.kind() == InteractionKind::Zero) return pot;

  double inter = 0.0;
  if (W.is_newtonian()) {
    inter = state.h * newtonian_pair_sum(state.x, W.newtonian_sign());
    if (range == EnergyRange::ExcludeLast) {
      double tail = 0.0;
      for (std::size_t j = 0; j + 1 < n; ++j) tail += W.value(state.x.back() - state.x[j]);
      inter -= 0.5 * state.h * tail;
    }
    return pot + inter;
  }
  for (std::size_t i = 0; i < last; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) inter += W.value(state.x[i] - state.x[j]);
    }
  }
  return pot + 0.5 * state.h * inter;
}

double energy_Fhat(const ParticleState& state, const ExternalPotential& V, const Interaction& W) {
  const auto rho = cell_densities(state);
  const auto& x = state.x;
  const std::size_t N = rho.size();
  double pot = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    pot += rho[i] * gauss_legendre4([&](double y) { return V.value(y); }, x[i], x[i + 1]);
  }
  if (W.kind() == InteractionKind::Zero) return pot;

  const double h2 = state.h * state.h;
  if (W.is_newtonian()) {
    std::vector<double> mid(N);
    for (std::size_t i = 0; i < N; ++i) mid[i] = 0.5 * (x[i] + x[i + 1]);
    return pot + h2 * newtonian_pair_sum(mid, W.newtonian_sign());
  }
  double inter = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      inter += cell_average_W(W, x[i], x[i + 1], x[j], x[j + 1]);
    }
  }
  return pot + h2 * inter;
}

double dual_dissipation(const ParticleState& state, const Mobility& mobility,
                        const std::vector<double>& zeta) {
  if (zeta.size() != state.x.size()) throw std::invalid_argument("dual_dissipation: size mismatch");
  const auto b = padded_beta(state, mobility);
  double acc = 0.0;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    const double neg = std::min(zeta[i], 0.0);
    const double pos = std::max(zeta[i], 0.0);
    acc += b[i] * neg * neg + b[i + 1] * pos * pos;
  }
  return 0.5 * acc;
}

double dissipation(const ParticleState& state, const Mobility& mobility,
                   const std::vector<double>& j) {
  if (j.size() != state.x.size()) throw std::invalid_argument("dissipation: size mismatch");
  const auto b = padded_beta(state, mobility);
  auto term = [](double part, double beta) {
    if (part == 0.0) return 0.0;
    if (beta <= 0.0) return std::numeric_limits<double>::infinity();
    return part * part / beta;
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    acc += term(std::min(j[i], 0.0), b[i]) + term(std::max(j[i], 0.0), b[i + 1]);
  }
  return 0.5 * acc;
}

double dissipation_functional(const ParticleState& state, const Mobility& mobility,
                              const ForceVector& forces) {
  const auto b = padded_beta(state, mobility);
  double acc = 0.0;
  for (std::size_t i = 0; i < forces.size(); ++i) {
    const double fm = forces.minus(i);
    const double fp = forces.plus(i);
    acc += b[i + 1] * fm * fm + b[i] * fp * fp;
  }
  return acc;
}

std::vector<GradientRecord> gradient_series(const Trajectory& traj, const ProblemSpec& spec,
                                            const GradientOptions& options) {
  std::vector<GradientRecord> out(traj.size());
  std::vector<double> times(traj.size());
  std::vector<double> power(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    const auto forces = compute_forces(s, spec);
    std::vector<double> neg_f(forces.f.size());
    for (std::size_t i = 0; i < neg_f.size(); ++i) neg_f[i] = -forces[i];
    auto& r = out[k];
    r.t = s.t;
    r.F_h = energy_Fh(s, spec.V, spec.W, options.range);
    if (options.aux_energy) r.Fhat_h = energy_Fhat(s, spec.V, spec.W);
    r.R_h = dissipation(s, spec.mobility, traj.velocities[k]);
    r.R_h_star = dual_dissipation(s, spec.mobility, neg_f);
    r.D_h = dissipation_functional(s, spec.mobility, forces);
    times[k] = s.t;
    power[k] = r.R_h + r.R_h_star;
  }
  const auto integral = cumulative_simpson(times, power);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].edb_partial = integral[k] + out[k].F_h - out.front().F_h;
  }
  return out;
}

double edb_residual(const Trajectory& traj, const ProblemSpec& spec, double s, double t,
                    EnergyRange range) {
  const auto times = traj.times();
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  auto index = [&](double v) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (std::abs(times[k] - v) <= tol) return k;
    }
    throw std::out_of_range("edb_residual: time is not stored");
  };
  const std::size_t a = index(s);
  const std::size_t b = index(t);
  if (!(a < b)) throw std::invalid_argument("edb_residual: need s < t");
  std::vector<double> tt;
  std::vector<double> power;
  for (std::size_t k = a; k <= b; ++k) {
    const auto& st = traj.states[k];
    const auto forces = compute_forces(st, spec);
    std::vector<double> neg_f(forces.f.size());
    for (std::size_t i = 0; i < neg_f.size(); ++i) neg_f[i] = -forces[i];
    tt.push_back(st.t);
    power.push_back(dissipation(st, spec.mobility, traj.velocities[k]) +
                    dual_dissipation(st, spec.mobility, neg_f));
  }
  const double dF = energy_Fh(traj.states[b], spec.V, spec.W, range) -
                    energy_Fh(traj.states[a], spec.V, spec.W, range);
  return std::abs(simpson(tt, power) + dF);
}

double fenchel_young_gap(const Trajectory& traj, const ProblemSpec& spec) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    const auto forces = compute_forces(s, spec);
    std::vector<double> neg_f(forces.f.size());
    for (std::size_t i = 0; i < neg_f.size(); ++i) neg_f[i] = -forces[i];
    const double rs = dual_dissipation(s, spec.mobility, neg_f);
    const double r = dissipation(s, spec.mobility, traj.velocities[k]);
    worst = std::max(worst, std::abs(r - rs) / (1.0 + rs));
  }
  return worst;
}

double continuous_Rstar(const Snapshot& snapshot, const ProblemSpec& spec, ConvolutionMode mode) {
  const auto profile = snapshot.profile();
  const auto& e = profile.edges();
  const auto& v = profile.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < profile.cells(); ++i) {
    const double th = spec.mobility.theta(v[i]);
    if (th == 0.0) continue;
    acc += th * gauss_legendre4(
                    [&](double y) {
                      const double F = continuum_force(profile, spec.V, spec.W, y, mode).value;
                      return F * F;
                    },
                    e[i], e[i + 1]);
  }
  return 0.5 * acc;
}

double action_discrepancy(const Snapshot& snapshot, const Mobility& mobility,
                          const std::function<double(double)>& phi) {
  const auto state = snapshot.state();
  const auto rho = cell_densities(state);
  double continuum = pair_flux(snapshot, phi);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double th = mobility.theta(rho[i]);
    continuum -= 0.5 * th *
                 gauss_legendre4([&](double y) { return phi(y) * phi(y); }, snapshot.x[i],
                                 snapshot.x[i + 1]);
  }
  std::vector<double> xi(snapshot.x.size());
  double pairing = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    xi[i] = phi(snapshot.x[i]);
    pairing += xi[i] * snapshot.v[i];
  }
  const double discrete = snapshot.h * (pairing - dual_dissipation(state, mobility, xi));
  return std::abs(continuum - discrete);
}

void write_gradient_csv(std::ostream& os, const std::vector<GradientRecord>& records) {
  CsvWriter csv(os, {"t", "F_h", "Fhat_h", "R_h", "R_h_star", "D_h", "edb_partial"});
  for (const auto& r : records) {
    csv.row({r.t, r.F_h, r.Fhat_h, r.R_h, r.R_h_star, r.D_h, r.edb_partial});
  }
}

}  // namespace dpa
