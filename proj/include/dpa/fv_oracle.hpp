#pragma once

#include <stdexcept>
#include <vector>

#include "dpa/diagnostics.hpp"
#include "dpa/model.hpp"
#include "dpa/profile.hpp"

namespace dpa {

/// Uniform finite-volume grid of cell averages on [a, b].
struct FvGrid {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> rho;
  double t = 0.0;

  std::size_t cells() const { return rho.size(); }
  double dx() const { return (b - a) / static_cast<double>(rho.size()); }
  CellProfile profile() const;
  double mass() const;
};

/// Exact cell averages of the initial density.
FvGrid make_grid(const InitialDensity& initial, double a, double b, std::size_t cells);
/// rho_left on x < x0, rho_right on x >= x0; the jump must sit on a cell edge.
FvGrid make_riemann_grid(double a, double b, std::size_t cells, double x0, double rho_left,
                         double rho_right);

enum class Boundary { ZeroFlux, Outflow };

class CflViolation : public std::runtime_error {
 public:
  CflViolation(double dt, double limit);
  double dt() const { return dt_; }
  double limit() const { return limit_; }

 private:
  double dt_;
  double limit_;
};

/// Largest dt with dt (max|F| max|theta'| + max theta Lip F) / dx <= 0.45.
double max_stable_dt(const FvGrid& grid, const ProblemSpec& spec);

/// One conservative Rusanov step for rho_t + (g(x, rho))_x = 0 with
/// g = -theta(rho) F(x), F recomputed from the current averages.
FvGrid fv_step(const FvGrid& grid, const ProblemSpec& spec, double dt, Boundary boundary);

struct FvOptions {
  double t_end = 1.0;
  Boundary boundary = Boundary::ZeroFlux;
  /// Fraction of the stability limit used per step.
  double cfl = 0.4 / 0.45;
  /// Equal output intervals recorded as frames (the initial frame included).
  std::size_t output_intervals = 1;
};

struct FvRun {
  FvGrid final;
  std::vector<ProfileFrame> frames;
  std::size_t steps = 0;
};

FvRun fv_solve(const FvGrid& initial, const ProblemSpec& spec, const FvOptions& options);

/// Entropy solution of rho_t + theta(rho)_x = 0 at x/t = xi for concave
/// theta on [0, cap]. Throws std::domain_error if theta is not concave.
double riemann_exact(const Mobility& mobility, double rho_left, double rho_right, double xi);

/// ||dpa - grid||_L1; throws std::invalid_argument if the support of `dpa`
/// leaves the grid window.
double l1_compare(const CellProfile& dpa, const FvGrid& grid);

/// int_lo^hi |rho(x) - riemann_exact((x - x0)/t)| dx
double l1_to_riemann(const CellProfile& rho, const Mobility& mobility, double rho_left,
                     double rho_right, double x0, double t, double lo, double hi);

}  // namespace dpa
