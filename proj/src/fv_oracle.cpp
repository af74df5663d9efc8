#include "dpa/fv_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpa/forces.hpp"
#include "dpa/quadrature.hpp"

namespace dpa {

namespace {

std::string cfl_message(double dt, double limit) {
  std::ostringstream os;
  os.precision(17);
  os << "CFL violation: dt = " << dt << " exceeds the stable limit " << limit;
  return os.str();
}

std::vector<double> face_forces(const FvGrid& grid, const ProblemSpec& spec) {
  const auto profile = grid.profile();
  const double dx = grid.dx();
  std::vector<double> F(grid.cells() + 1);
  for (std::size_t k = 0; k <= grid.cells(); ++k) {
    F[k] = continuum_force(profile, spec.V, spec.W, grid.a + dx * static_cast<double>(k)).value;
  }
  return F;
}

double stability_rate(const std::vector<double>& F, double dx, const Mobility& mob) {
  double fmax = 0.0;
  double lip = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    fmax = std::max(fmax, std::abs(F[k]));
    if (k > 0) lip = std::max(lip, std::abs(F[k] - F[k - 1]) / dx);
  }
  return (fmax * mob.max_abs_theta_prime() + mob.max_theta() * lip) / dx;
}

double rusanov(const Mobility& mob, double F, double left, double right) {
  const double gl = -mob.theta(left) * F;
  const double gr = -mob.theta(right) * F;
  const double speed =
      std::abs(F) * std::max(std::abs(mob.theta_prime(left)), std::abs(mob.theta_prime(right)));
  return 0.5 * (gl + gr) - 0.5 * speed * (right - left);
}

bool concave_on_cap(const Mobility& mob) {
  if (mob.kind() == Mobility::Kind::PowerCap) return true;
  const double top = std::isfinite(mob.cap()) ? mob.cap() : mob.table_s().back();
  const int samples = 2000;
  double prev = mob.theta_prime(0.0);
  for (int k = 1; k < samples; ++k) {
    const double s = top * k / samples;
    const double d = mob.theta_prime(s);
    if (d > prev + 1e-12) return false;
    prev = d;
  }
  return true;
}

double inverse_theta_prime(const Mobility& mob, double xi, double lo, double hi) {
  if (mob.kind() == Mobility::Kind::PowerCap) {
    const double g = mob.gamma();
    const double capg = std::pow(mob.cap(), g);
    const double base = std::max(0.0, (capg - xi) / (1.0 + g));
    return std::clamp(std::pow(base, 1.0 / g), lo, hi);
  }
  // theta' is non-increasing on [lo, hi]
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mob.theta_prime(mid) > xi) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CellProfile FvGrid::profile() const {
  std::vector<double> edges(rho.size() + 1);
  const double h = dx();
  for (std::size_t k = 0; k <= rho.size(); ++k) edges[k] = a + h * static_cast<double>(k);
  edges.back() = b;
  return CellProfile(std::move(edges), rho);
}

double FvGrid::mass() const {
  double acc = 0.0;
  for (double r : rho) acc += r;
  return acc * dx();
}

FvGrid make_grid(const InitialDensity& initial, double a, double b, std::size_t cells) {
  if (!(b > a) || cells == 0) throw std::invalid_argument("make_grid: empty window");
  if (initial.x_min() < a || initial.x_max() > b) {
    throw std::invalid_argument("make_grid: initial support leaves the window");
  }
  FvGrid g{a, b, std::vector<double>(cells), 0.0};
  const double dx = g.dx();
  for (std::size_t k = 0; k < cells; ++k) {
    const double lo = a + dx * static_cast<double>(k);
    const double hi = k + 1 == cells ? b : a + dx * static_cast<double>(k + 1);
    g.rho[k] = (initial.cumulative(hi) - initial.cumulative(lo)) / (hi - lo);
  }
  return g;
}

FvGrid make_riemann_grid(double a, double b, std::size_t cells, double x0, double rho_left,
                         double rho_right) {
  if (!(b > a) || cells == 0) throw std::invalid_argument("make_riemann_grid: empty window");
  FvGrid g{a, b, std::vector<double>(cells), 0.0};
  const double dx = g.dx();
  const double pos = (x0 - a) / dx;
  if (std::abs(pos - std::round(pos)) > 1e-9) {
    throw std::invalid_argument("make_riemann_grid: jump must lie on a cell edge");
  }
  const auto split = static_cast<std::size_t>(std::llround(pos));
  for (std::size_t k = 0; k < cells; ++k) g.rho[k] = k < split ? rho_left : rho_right;
  return g;
}

CflViolation::CflViolation(double dt, double limit)
    : std::runtime_error(cfl_message(dt, limit)), dt_(dt), limit_(limit) {}

double max_stable_dt(const FvGrid& grid, const ProblemSpec& spec) {
  const double rate = stability_rate(face_forces(grid, spec), grid.dx(), spec.mobility);
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return 0.45 / rate;
}

FvGrid fv_step(const FvGrid& grid, const ProblemSpec& spec, double dt, Boundary boundary) {
  const auto F = face_forces(grid, spec);
  const double dx = grid.dx();
  const double rate = stability_rate(F, dx, spec.mobility);
  if (dt * rate > 0.45 * (1.0 + 1e-12)) throw CflViolation(dt, 0.45 / rate);

  const auto& mob = spec.mobility;
  const std::size_t n = grid.cells();
  std::vector<double> G(n + 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) G[k] = rusanov(mob, F[k], grid.rho[k - 1], grid.rho[k]);
  if (boundary == Boundary::Outflow) {
    G[0] = rusanov(mob, F[0], grid.rho.front(), grid.rho.front());
    G[n] = rusanov(mob, F[n], grid.rho.back(), grid.rho.back());
  }
  FvGrid next = grid;
  const double lambda = dt / dx;
  for (std::size_t k = 0; k < n; ++k) next.rho[k] = grid.rho[k] - lambda * (G[k + 1] - G[k]);
  next.t = grid.t + dt;
  return next;
}

FvRun fv_solve(const FvGrid& initial, const ProblemSpec& spec, const FvOptions& options) {
  if (!(options.t_end > 0.0)) throw std::invalid_argument("fv_solve: t_end must be positive");
  if (!(options.cfl > 0.0 && options.cfl <= 1.0)) throw std::invalid_argument("fv_solve: cfl in (0, 1]");
  const std::size_t intervals = std::max<std::size_t>(1, options.output_intervals);
  FvRun run;
  run.final = initial;
  run.frames.push_back({initial.t, initial.profile()});
  const double t0 = initial.t;
  for (std::size_t k = 1; k <= intervals; ++k) {
    const double target = t0 + options.t_end * static_cast<double>(k) / static_cast<double>(intervals);
    while (run.final.t < target - 1e-14 * options.t_end) {
      const double dt = std::min(options.cfl * max_stable_dt(run.final, spec), target - run.final.t);
      run.final = fv_step(run.final, spec, dt, options.boundary);
      ++run.steps;
    }
    run.final.t = target;
    run.frames.push_back({target, run.final.profile()});
  }
  return run;
}

double riemann_exact(const Mobility& mobility, double rho_left, double rho_right, double xi) {
  const double cap = mobility.cap();
  if (rho_left < 0.0 || rho_right < 0.0 || rho_left > cap || rho_right > cap) {
    throw std::domain_error("riemann_exact: states must lie in [0, cap]");
  }
  if (!concave_on_cap(mobility)) throw std::domain_error("riemann_exact: theta is not concave");
  if (rho_left == rho_right) return rho_left;
  if (rho_left < rho_right) {
    const double speed = (mobility.theta(rho_right) - mobility.theta(rho_left)) / (rho_right - rho_left);
    return xi < speed ? rho_left : rho_right;
  }
  const double head = mobility.theta_prime(rho_left);
  const double tail = mobility.theta_prime(rho_right);
  if (xi <= head) return rho_left;
  if (xi >= tail) return rho_right;
  return inverse_theta_prime(mobility, xi, rho_right, rho_left);
}

double l1_compare(const CellProfile& dpa, const FvGrid& grid) {
  if (dpa.lower() < grid.a - 1e-12 || dpa.upper() > grid.b + 1e-12) {
    throw std::invalid_argument("l1_compare: density support leaves the grid window");
  }
  return l1_distance(dpa, grid.profile());
}

double l1_to_riemann(const CellProfile& rho, const Mobility& mobility, double rho_left,
                     double rho_right, double x0, double t, double lo, double hi) {
  if (!(t > 0.0)) throw std::invalid_argument("l1_to_riemann: t must be positive");
  std::vector<double> pts{lo, hi};
  for (double e : rho.edges()) {
    if (e > lo && e < hi) pts.push_back(e);
  }
  std::vector<double> waves;
  if (rho_left < rho_right) {
    waves.push_back((mobility.theta(rho_right) - mobility.theta(rho_left)) / (rho_right - rho_left));
  } else if (rho_left > rho_right) {
    waves.push_back(mobility.theta_prime(rho_left));
    waves.push_back(mobility.theta_prime(rho_right));
  }
  for (double w : waves) {
    const double x = x0 + w * t;
    if (x > lo && x < hi) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  auto diff = [&](double x) {
    return std::abs(rho(x) - riemann_exact(mobility, rho_left, rho_right, (x - x0) / t));
  };
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (pts[k + 1] > pts[k]) acc += gauss_legendre4_composite(diff, pts[k], pts[k + 1], 4);
  }
  return acc;
}

}  // namespace dpa
