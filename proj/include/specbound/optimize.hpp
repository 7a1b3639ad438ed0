#pragma once

#include <cmath>
#include <functional>
#include <utility>

namespace specbound::optimize {

/// Golden-section minimization on [lo, hi]; returns (argmin, value).
inline std::pair<double, double> golden_min(
    const std::function<double(double)>& f, double lo, double hi,
    double xtol = 1e-10) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double xm = 0.5 * (a + b), fm = f(xm);
  if (fc < fm) { xm = c; fm = fc; }
  if (fd < fm) { xm = d; fm = fd; }
  return {xm, fm};
}

/// Seed grid of n points on [lo, hi], then golden section around the best
/// cell.  The returned value never exceeds the best grid value.
inline std::pair<double, double> grid_then_golden_min(
    const std::function<double(double)>& f, double lo, double hi, int n,
    double xtol = 1e-10) {
  double best_x = lo, best_f = f(lo);
  double h = (hi - lo) / (n - 1);
  for (int i = 1; i < n; ++i) {
    double x = lo + i * h;
    double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  auto [x, v] = golden_min(f, std::fmax(lo, best_x - h), std::fmin(hi, best_x + h), xtol);
  if (v < best_f) return {x, v};
  return {best_x, best_f};
}

}  // namespace specbound::optimize
