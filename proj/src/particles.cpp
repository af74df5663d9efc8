#include "dpa/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dpa {

namespace {

std::string coincident_message(std::size_t cell, double width) {
  std::ostringstream os;
  os << "cell " << cell << " has non-positive width " << width;
  return os.str();
}

constexpr int kMaxBisection = 200;

// sup{x in [lo, hi] : R(x) < target}, assuming R(lo) < target <= R(hi).
double generalized_quantile(const InitialDensity& rho, double target, double lo, double hi) {
  const double scale = std::max({1.0, std::abs(rho.x_min()), std::abs(rho.x_max())});
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid <= lo || mid >= hi) return hi;
    if (rho.cumulative(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw QuantileError("quantile bisection did not converge");
}

}  // namespace

CoincidentParticles::CoincidentParticles(std::size_t cell, double width)
    : std::runtime_error(coincident_message(cell, width)), cell_(cell) {}

ParticleState quantile_partition(const InitialDensity& initial, std::size_t N) {
  if (N < 2) throw std::invalid_argument("quantile_partition: need N >= 2 cells");
  const double m = initial.mass();
  if (!(m > 0.0)) throw QuantileError("quantile_partition: initial density has zero mass");
  const double h = m / static_cast<double>(N);

  ParticleState state;
  state.h = h;
  state.t = 0.0;
  state.x.resize(N + 1);
  state.x.front() = initial.x_min();
  state.x.back() = initial.x_max();

  double lo = initial.x_min();
  for (std::size_t i = 1; i < N; ++i) {
    const double target = static_cast<double>(i) * h;
    const double xi = generalized_quantile(initial, target, lo, initial.x_max());
    const double err = std::abs(initial.cumulative(xi) - target);
    if (err > 1e-12 * m) {
      std::ostringstream os;
      os << "quantile " << i << " missed its target mass by " << err;
      throw QuantileError(os.str());
    }
    state.x[i] = xi;
    lo = xi;
  }
  return state;
}

std::vector<double> cell_densities(const ParticleState& state) {
  const std::size_t n = state.cells();
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = state.x[i + 1] - state.x[i];
    if (!(w > 0.0)) throw CoincidentParticles(i, w);
    rho[i] = state.h / w;
  }
  return rho;
}

CellProfile to_profile(const ParticleState& state) {
  return CellProfile(state.x, cell_densities(state));
}

}  // namespace dpa
