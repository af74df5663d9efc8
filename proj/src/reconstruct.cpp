#include "dpa/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dpa/csv.hpp"
#include "dpa/quadrature.hpp"

namespace dpa {

double Snapshot::velocity_in_cell(std::size_t i, double y) const {
  const double w = x[i + 1] - x[i];
  return ((x[i + 1] - y) * v[i] + (y - x[i]) * v[i + 1]) / w;
}

ReconstructedFields::ReconstructedFields(const Trajectory& traj) {
  if (traj.size() == 0) throw std::invalid_argument("ReconstructedFields: empty trajectory");
  snapshots_.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    snapshots_.push_back(Snapshot{s.t, s.x, traj.velocities[k], s.h});
  }
  mass_ = traj.states.front().mass();
}

std::vector<double> ReconstructedFields::times() const {
  std::vector<double> t(snapshots_.size());
  for (std::size_t k = 0; k < snapshots_.size(); ++k) t[k] = snapshots_[k].t;
  return t;
}

std::size_t ReconstructedFields::index_of(double t) const {
  const auto it = std::lower_bound(snapshots_.begin(), snapshots_.end(), t,
                                   [](const Snapshot& s, double v) { return s.t < v; });
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  for (auto cand : {it, it == snapshots_.begin() ? it : it - 1}) {
    if (cand != snapshots_.end() && std::abs(cand->t - t) <= tol) {
      return static_cast<std::size_t>(cand - snapshots_.begin());
    }
  }
  std::ostringstream os;
  os << "time " << t << " is not a stored output time";
  throw std::out_of_range(os.str());
}

const Snapshot& ReconstructedFields::at(double t) const { return snapshots_[index_of(t)]; }

namespace {

long locate_cell(const Snapshot& s, double y) {
  if (y < s.x.front() || y >= s.x.back()) return -1;
  const auto it = std::upper_bound(s.x.begin(), s.x.end(), y);
  return static_cast<long>(it - s.x.begin()) - 1;
}

}  // namespace

double density_eval(const ReconstructedFields& fields, double t, double x) {
  const Snapshot& s = fields.at(t);
  const long k = locate_cell(s, x);
  if (k < 0) return 0.0;
  const auto i = static_cast<std::size_t>(k);
  return s.h / (s.x[i + 1] - s.x[i]);
}

double flux_eval(const ReconstructedFields& fields, double t, double x) {
  const Snapshot& s = fields.at(t);
  const long k = locate_cell(s, x);
  if (k < 0) return 0.0;
  const auto i = static_cast<std::size_t>(k);
  return s.h / (s.x[i + 1] - s.x[i]) * s.velocity_in_cell(i, x);
}

double total_mass(const Snapshot& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.cells(); ++i) {
    const double w = s.x[i + 1] - s.x[i];
    acc += (s.h / w) * w;
  }
  return acc;
}

double flux_l1(const Snapshot& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.cells(); ++i) {
    const double w = s.x[i + 1] - s.x[i];
    const double rho = s.h / w;
    const double a = s.v[i];
    const double b = s.v[i + 1];
    double integral;
    if ((a >= 0 && b >= 0) || (a <= 0 && b <= 0)) {
      integral = 0.5 * w * std::abs(a + b);
    } else {
      integral = 0.5 * w * (a * a + b * b) / (std::abs(a) + std::abs(b));
    }
    acc += rho * integral;
  }
  return acc;
}

double pair_density(const Snapshot& s, const std::function<double(double)>& phi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.cells(); ++i) {
    const double rho = s.h / (s.x[i + 1] - s.x[i]);
    acc += rho * gauss_legendre4(phi, s.x[i], s.x[i + 1]);
  }
  return acc;
}

double pair_flux(const Snapshot& s, const std::function<double(double)>& phi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.cells(); ++i) {
    const double rho = s.h / (s.x[i + 1] - s.x[i]);
    acc += rho * gauss_legendre4([&](double y) { return phi(y) * s.velocity_in_cell(i, y); },
                                 s.x[i], s.x[i + 1]);
  }
  return acc;
}

double continuity_residual(const ReconstructedFields& fields, const TestFunction& phi, double s,
                           double t) {
  if (!phi.value || !phi.derivative) {
    throw std::invalid_argument("continuity_residual: test function needs its derivative");
  }
  const std::size_t a = fields.index_of(s);
  const std::size_t b = fields.index_of(t);
  if (!(a < b)) throw std::invalid_argument("continuity_residual: need s < t");
  std::vector<double> times;
  std::vector<double> action;
  for (std::size_t k = a; k <= b; ++k) {
    times.push_back(fields[k].t);
    action.push_back(pair_flux(fields[k], phi.derivative));
  }
  const double lhs = pair_density(fields[b], phi.value) - pair_density(fields[a], phi.value);
  return std::abs(lhs - simpson(times, action));
}

void write_snapshot_csv(std::ostream& os, const ReconstructedFields& fields) {
  CsvWriter csv(os, {"t", "x_left", "x_right", "rho", "u_left", "u_right"});
  for (const auto& s : fields.snapshots()) {
    for (std::size_t i = 0; i < s.cells(); ++i) {
      csv.row({s.t, s.x[i], s.x[i + 1], s.h / (s.x[i + 1] - s.x[i]), s.v[i], s.v[i + 1]});
    }
  }
}

}  // namespace dpa
