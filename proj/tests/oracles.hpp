#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library except for plain data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

/// Bisection for a root of f on [a, b], f(a) f(b) < 0.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 300; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Midpoint Riemann sum.
inline double riemann(const std::function<double(double)>& f, double a, double b, int n) {
  const double w = (b - a) / n;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += f(a + (k + 0.5) * w);
  return acc * w;
}

/// Adaptive Simpson, for smooth integrands.
inline double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                       int depth = 40) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) < 15 * tol) {
          return left + right + (left + right - whole) / 15;
        }
        return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), depth);
}

/// Sorted random positions with strictly positive gaps.
inline std::vector<double> random_ordered(std::mt19937_64& rng, std::size_t n, double lo = -2.0,
                                          double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (;;) {
    for (auto& v : x) v = u(rng);
    std::sort(x.begin(), x.end());
    bool ok = true;
    for (std::size_t i = 1; i < n; ++i) ok = ok && x[i] > x[i - 1];
    if (ok) return x;
  }
}

/// Quadratic form 1/2 sum_i [b_left_i (z_i^-)^2 + b_right_i (z_i^+)^2] written
/// term by term.
inline double dual_form(const std::vector<double>& b_left, const std::vector<double>& b_right,
                        const std::vector<double>& z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 0) acc += b_left[i] * z[i] * z[i];
    if (z[i] > 0) acc += b_right[i] * z[i] * z[i];
  }
  return acc / 2;
}

/// Piecewise-constant density given by edges/values evaluated pointwise.
inline double pc_eval(const std::vector<double>& edges, const std::vector<double>& values, double x) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (x >= edges[k] && x < edges[k + 1]) return values[k];
  }
  return 0.0;
}

}  // namespace oracle
