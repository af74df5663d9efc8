#pragma once

#include <vector>

namespace dpa {

/// Piecewise-constant density on consecutive cells [edges[k], edges[k+1]),
/// zero outside [edges.front(), edges.back()). Both the particle
/// reconstruction and the finite-volume grid are represented this way.
class CellProfile {
 public:
  CellProfile() = default;
  CellProfile(std::vector<double> edges, std::vector<double> values);

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t cells() const { return values_.size(); }
  double lower() const { return edges_.front(); }
  double upper() const { return edges_.back(); }

  /// Half-open cell lookup: index k with edges[k] <= x < edges[k+1], or -1.
  long locate(double x) const;
  double operator()(double x) const;
  /// Integral of the density over (-inf, x].
  double cumulative(double x) const;
  double mass() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

 private:
  std::vector<double> edges_;
  std::vector<double> values_;
  std::vector<double> prefix_;
};

/// L1 distance between two piecewise-constant densities, exact.
double l1_distance(const CellProfile& a, const CellProfile& b);

/// 1-Wasserstein distance between a/mass(a) and b/mass(b), computed exactly
/// as the L1 distance between the two piecewise-linear distribution
/// functions.
double w1_distance(const CellProfile& a, const CellProfile& b);

}  // namespace dpa
