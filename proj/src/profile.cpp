#include "dpa/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpa {

CellProfile::CellProfile(std::vector<double> edges, std::vector<double> values)
    : edges_(std::move(edges)), values_(std::move(values)) {
  if (edges_.size() != values_.size() + 1 || values_.empty()) {
    throw std::invalid_argument("CellProfile: need n+1 edges for n values");
  }
  prefix_.assign(edges_.size(), 0.0);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (edges_[k + 1] < edges_[k]) throw std::invalid_argument("CellProfile: edges must be sorted");
    prefix_[k + 1] = prefix_[k] + values_[k] * (edges_[k + 1] - edges_[k]);
  }
}

long CellProfile::locate(double x) const {
  if (edges_.empty() || x < edges_.front() || x >= edges_.back()) return -1;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  return static_cast<long>(it - edges_.begin()) - 1;
}

double CellProfile::operator()(double x) const {
  const long k = locate(x);
  return k < 0 ? 0.0 : values_[static_cast<std::size_t>(k)];
}

double CellProfile::cumulative(double x) const {
  if (edges_.empty() || x <= edges_.front()) return 0.0;
  if (x >= edges_.back()) return prefix_.back();
  const auto k = static_cast<std::size_t>(locate(x));
  return prefix_[k] + values_[k] * (x - edges_[k]);
}

namespace {

std::vector<double> merged_breakpoints(const CellProfile& a, const CellProfile& b) {
  std::vector<double> pts;
  pts.reserve(a.edges().size() + b.edges().size());
  std::merge(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
             std::back_inserter(pts));
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Integral over [0, w] of |d0 + (d1 - d0) s / w|.
double abs_linear_integral(double d0, double d1, double w) {
  if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0)) {
    return 0.5 * w * std::abs(d0 + d1);
  }
  // sign change: two triangles
  const double a0 = std::abs(d0);
  const double a1 = std::abs(d1);
  return 0.5 * w * (a0 * a0 + a1 * a1) / (a0 + a1);
}

}  // namespace

double l1_distance(const CellProfile& a, const CellProfile& b) {
  const auto pts = merged_breakpoints(a, b);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double lo = pts[k];
    const double hi = pts[k + 1];
    const double mid = 0.5 * (lo + hi);
    acc += std::abs(a(mid) - b(mid)) * (hi - lo);
  }
  return acc;
}

double w1_distance(const CellProfile& a, const CellProfile& b) {
  const double ma = a.mass();
  const double mb = b.mass();
  if (!(ma > 0.0) || !(mb > 0.0)) throw std::invalid_argument("w1_distance: zero-mass profile");
  const auto pts = merged_breakpoints(a, b);
  double acc = 0.0;
  // Both distribution functions are linear between merged breakpoints.
  double d_prev = a.cumulative(pts.front()) / ma - b.cumulative(pts.front()) / mb;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double d_next = a.cumulative(pts[k + 1]) / ma - b.cumulative(pts[k + 1]) / mb;
    acc += abs_linear_integral(d_prev, d_next, pts[k + 1] - pts[k]);
    d_prev = d_next;
  }
  return acc;
}

}  // namespace dpa
