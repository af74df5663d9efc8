#include "dpa/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "dpa/csv.hpp"
#include "dpa/forces.hpp"
#include "dpa/quadrature.hpp"

namespace dpa {

double total_variation(const std::vector<double>& rho) {
  if (rho.empty()) return 0.0;
  double tv = rho.front() + rho.back();
  for (std::size_t i = 1; i < rho.size(); ++i) tv += std::abs(rho[i] - rho[i - 1]);
  return tv;
}

double bv_norm(const ParticleState& state) {
  return state.mass() + total_variation(cell_densities(state));
}

double h1_proxy(const ParticleState& state) {
  const auto rho = cell_densities(state);
  std::vector<double> nx{state.x.front()};
  std::vector<double> ny{0.0};
  for (std::size_t i = 0; i < rho.size(); ++i) {
    nx.push_back(0.5 * (state.x[i] + state.x[i + 1]));
    ny.push_back(rho[i]);
  }
  nx.push_back(state.x.back());
  ny.push_back(0.0);
  double l2 = 0.0;
  double grad = 0.0;
  for (std::size_t k = 0; k + 1 < nx.size(); ++k) {
    const double d = nx[k + 1] - nx[k];
    const double a = ny[k];
    const double b = ny[k + 1];
    l2 += d * (a * a + a * b + b * b) / 3.0;
    grad += (b - a) * (b - a) / d;
  }
  return std::sqrt(l2 + grad);
}

DiagnosticsRecord diagnose(const ParticleState& state, const CellProfile& initial, double M) {
  const auto rho = cell_densities(state);
  DiagnosticsRecord r;
  r.t = state.t;
  r.l1_mass = state.mass();
  r.tv_only = total_variation(rho);
  r.bv_norm = r.l1_mass + r.tv_only;
  r.h1_proxy = h1_proxy(state);
  r.w1_from_initial = w1_distance(initial, to_profile(state));
  r.support_measure = state.x.back() - state.x.front();
  r.max_density = *std::max_element(rho.begin(), rho.end());
  r.min_cell_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    r.min_cell_ratio = std::min(r.min_cell_ratio, (state.x[i + 1] - state.x[i]) * M / state.h);
  }
  return r;
}

std::vector<DiagnosticsRecord> diagnostics_series(const Trajectory& traj, const ProblemSpec& spec) {
  const auto initial = to_profile(traj.states.front());
  const double M = spec.M();
  std::vector<DiagnosticsRecord> out;
  out.reserve(traj.size());
  for (const auto& s : traj.states) out.push_back(diagnose(s, initial, M));
  return out;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
  CsvWriter csv(os, {"t", "mass", "bv", "tv", "h1", "w1_from_initial", "support", "max_density",
                     "min_cell_ratio"});
  for (const auto& r : records) {
    csv.row({r.t, r.l1_mass, r.bv_norm, r.tv_only, r.h1_proxy, r.w1_from_initial,
             r.support_measure, r.max_density, r.min_cell_ratio});
  }
}

double w1_lipschitz_ratio(const Trajectory& traj) {
  std::vector<CellProfile> profiles;
  profiles.reserve(traj.size());
  for (const auto& s : traj.states) profiles.push_back(to_profile(s));
  double worst = 0.0;
  for (std::size_t a = 0; a < profiles.size(); ++a) {
    for (std::size_t b = a + 1; b < profiles.size(); ++b) {
      const double dt = traj.states[b].t - traj.states[a].t;
      worst = std::max(worst, w1_distance(profiles[a], profiles[b]) / dt);
    }
  }
  return worst;
}

std::vector<ProfileFrame> frames_of(const Trajectory& traj) {
  std::vector<ProfileFrame> frames;
  frames.reserve(traj.size());
  for (const auto& s : traj.states) frames.push_back({s.t, to_profile(s)});
  return frames;
}

SpaceTimeTest bump_test_function(double a, double r, double T) {
  if (!(r > 0.0)) throw std::invalid_argument("bump_test_function: radius must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("bump_test_function: T must be positive");
  SpaceTimeTest phi;
  auto space = [a, r](double x) {
    const double u = (x - a) / r;
    const double q = 1.0 - u * u;
    return q > 0.0 ? q * q * q : 0.0;
  };
  auto space_dx = [a, r](double x) {
    const double u = (x - a) / r;
    const double q = 1.0 - u * u;
    return q > 0.0 ? -6.0 * u * q * q / r : 0.0;
  };
  phi.value = [=](double t, double x) { return (1.0 - t / T) * space(x); };
  phi.dt = [=](double, double x) { return -space(x) / T; };
  phi.dx = [=](double t, double x) { return (1.0 - t / T) * space_dx(x); };
  phi.x_lo = a - r;
  phi.x_hi = a + r;
  phi.t_end = T;
  return phi;
}

std::vector<EntropyTest> entropy_test_grid(double lo, double hi, double T) {
  const double L = hi - lo;
  std::vector<EntropyTest> grid;
  const double centers[] = {lo + 0.25 * L, lo + 0.5 * L, lo + 0.75 * L};
  const double radii[] = {0.125 * L, 0.25 * L, 0.5 * L};
  int ci = 0;
  for (double a : centers) {
    int ri = 0;
    for (double r : radii) {
      // keep the support inside [lo, hi]
      const double rr = std::min(r, std::min(a - lo, hi - a));
      grid.push_back({"a" + std::to_string(ci) + "_r" + std::to_string(ri), bump_test_function(a, rr, T)});
      ++ri;
    }
    ++ci;
  }
  return grid;
}

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Break points for integrating over [lo, hi] against a profile.
std::vector<double> pieces(const CellProfile& rho, double lo, double hi) {
  std::vector<double> pts{lo};
  for (double e : rho.edges()) {
    if (e > lo && e < hi) pts.push_back(e);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  const double cap = (hi - lo) / 64.0;
  std::vector<double> out{pts.front()};
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double a = out.back();
    const double b = pts[k];
    if (b <= a) continue;
    const int sub = std::max(1, static_cast<int>(std::ceil((b - a) / cap)));
    for (int s = 1; s < sub; ++s) out.push_back(a + (b - a) * s / sub);
    out.push_back(b);
  }
  return out;
}

}  // namespace

double entropy_residual(const std::vector<ProfileFrame>& frames, const ProblemSpec& spec, double c,
                        const SpaceTimeTest& phi, double window_lo, double window_hi) {
  if (frames.size() < 2) throw std::invalid_argument("entropy_residual: need at least two frames");
  if (phi.x_lo < window_lo || phi.x_hi > window_hi) {
    throw std::invalid_argument("entropy_residual: test support exceeds the simulated window");
  }
  const double T = phi.t_end;
  const double t_tol = 1e-9 * std::max(1.0, T);
  if (frames.back().t < T - t_tol) {
    throw std::invalid_argument("entropy_residual: test support exceeds the simulated time");
  }
  for (double x : {phi.x_lo, 0.5 * (phi.x_lo + phi.x_hi), phi.x_hi}) {
    if (std::abs(phi.value(T, x)) > 1e-14) {
      throw std::invalid_argument("entropy_residual: test function must vanish at the final time");
    }
  }
  const auto& mob = spec.mobility;
  const double theta_c = mob.theta(c);

  auto eta = [c](double s) { return std::abs(s - c); };

  // initial term
  const auto& first = frames.front();
  double initial = 0.0;
  {
    const auto pts = pieces(first.rho, phi.x_lo, phi.x_hi);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double r = first.rho(0.5 * (pts[k] + pts[k + 1]));
      initial += eta(r) * gauss_legendre4([&](double x) { return phi.value(first.t, x); }, pts[k],
                                          pts[k + 1]);
    }
  }

  std::vector<double> times;
  std::vector<double> integrand;
  for (const auto& frame : frames) {
    if (frame.t > T + t_tol) break;
    const double t = std::min(frame.t, T);
    const auto pts = pieces(frame.rho, phi.x_lo, phi.x_hi);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double r = frame.rho(0.5 * (pts[k] + pts[k + 1]));
      const double s = sgn(r - c);
      const double e = eta(r);
      const double dtheta = mob.theta(r) - theta_c;
      acc += gauss_legendre4(
          [&](double x) {
            const auto F = continuum_force(frame.rho, spec.V, spec.W, x);
            return e * phi.dt(t, x) -
                   s * (dtheta * F.value * phi.dx(t, x) - theta_c * F.derivative * phi.value(t, x));
          },
          pts[k], pts[k + 1]);
    }
    times.push_back(t);
    integrand.push_back(acc);
  }
  return initial + simpson(times, integrand);
}

void write_entropy_csv(std::ostream& os, const std::vector<EntropyRow>& rows) {
  os.precision(17);
  os << "c,phi_id,residual\n";
  for (const auto& r : rows) os << r.c << ',' << r.phi_id << ',' << r.residual << '\n';
}

}  // namespace dpa
