#pragma once

#include <cmath>
#include <limits>

namespace hpbif::detail {

/// Root of f in [a, b] given f(a), f(b) of opposite sign (or zero). Illinois
/// false position with a bisection step whenever the bracket fails to halve.
template <typename F>
double bracketed_root(F&& f, double a, double b, double fa, double fb,
                      double abs_tol, int max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  int side = 0;
  double width = std::abs(b - a);
  for (int it = 0; it < max_iter; ++it) {
    double x = (a * fb - b * fa) / (fb - fa);
    if (!(x > std::min(a, b) && x < std::max(a, b))) x = 0.5 * (a + b);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = x;
      fb = fx;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
    const double w = std::abs(b - a);
    if (w <= abs_tol + 4.0 * eps * std::abs(x)) break;
    if (w > 0.5 * width) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (fm == 0.0) return m;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
      side = 0;
    }
    width = std::abs(b - a);
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace hpbif::detail
