#include "dpa/quadrature.hpp"

#include <stdexcept>

namespace dpa {
namespace {

// Integral over [t0, t1] of the quadratic through (t0,y0), (t1,y1), (t2,y2).
// t2 may lie on either side of [t0, t1].
double quadratic_piece(double t0, double t1, double t2, double y0, double y1, double y2) {
  // Lagrange basis integrated over [t0, t1] with s = t - t0.
  const double a = t1 - t0;
  const double b = t2 - t0;
  // l0(s) = (s - a)(s - b) / (ab), l1(s) = s (s - b) / (a (a - b)), l2(s) = s (s - a) / (b (b - a))
  const double int_s2 = a * a * a / 3.0;
  const double int_s = a * a / 2.0;
  const double i0 = (int_s2 - (a + b) * int_s + a * b * a) / (a * b);
  const double i1 = (int_s2 - b * int_s) / (a * (a - b));
  const double i2 = (int_s2 - a * int_s) / (b * (b - a));
  return y0 * i0 + y1 * i1 + y2 * i2;
}

// Integral over [t0, t2] of the quadratic through three nodes.
double simpson_pair(double t0, double t1, double t2, double y0, double y1, double y2) {
  const double h0 = t1 - t0;
  const double h1 = t2 - t1;
  const double hs = h0 + h1;
  return hs / 6.0 *
         (y0 * (2.0 - h1 / h0) + y1 * hs * hs / (h0 * h1) + y2 * (2.0 - h0 / h1));
}

}  // namespace

double simpson(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw std::invalid_argument("simpson: size mismatch");
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (t[1] - t[0]) * (y[0] + y[1]);
  double sum = 0.0;
  std::size_t k = 0;
  for (; k + 2 < n; k += 2) {
    sum += simpson_pair(t[k], t[k + 1], t[k + 2], y[k], y[k + 1], y[k + 2]);
  }
  if (k + 1 < n) {
    // one interval [t[k], t[k+1]] left over
    sum += quadratic_piece(t[k], t[k + 1], t[k - 1], y[k], y[k + 1], y[k - 1]);
  }
  return sum;
}

std::vector<double> cumulative_simpson(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw std::invalid_argument("cumulative_simpson: size mismatch");
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * (t[1] - t[0]) * (y[0] + y[1]);
    return out;
  }
  for (std::size_t k = 2; k < n; k += 2) {
    out[k] = out[k - 2] + simpson_pair(t[k - 2], t[k - 1], t[k], y[k - 2], y[k - 1], y[k]);
  }
  for (std::size_t k = 1; k < n; k += 2) {
    if (k + 1 < n) {
      out[k] = out[k - 1] + quadratic_piece(t[k - 1], t[k], t[k + 1], y[k - 1], y[k], y[k + 1]);
    } else {
      out[k] = out[k - 1] + quadratic_piece(t[k - 1], t[k], t[k - 2], y[k - 1], y[k], y[k - 2]);
    }
  }
  return out;
}

}  // namespace dpa
