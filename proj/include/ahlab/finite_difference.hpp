#pragma once

#include "ahlab/linalg.hpp"

#include <cmath>
#include <limits>

namespace ahlab::fd {

constexpr double kDefaultStep = 1e-3;

/// Fourth-order first derivative of f at x. Central stencil when x +- 2h lies
/// in [lo, hi], otherwise the one-sided five-point stencil pointing inward.
/// f may return any type supporting addition and scalar multiplication.
template <class F>
auto derivative(F&& f, double x, double h, double lo = -std::numeric_limits<double>::infinity(),
                double hi = std::numeric_limits<double>::infinity()) {
  if (x - 2.0 * h >= lo && x + 2.0 * h <= hi) {
    auto fm2 = f(x - 2.0 * h);
    auto fm1 = f(x - h);
    auto fp1 = f(x + h);
    auto fp2 = f(x + 2.0 * h);
    return decltype(fm2)((fm2 - fp2 + 8.0 * (fp1 - fm1)) * (1.0 / (12.0 * h)));
  }
  const double s = (x + 4.0 * h <= hi) ? 1.0 : -1.0;
  const double hs = s * h;
  auto f0 = f(x);
  auto f1 = f(x + hs);
  auto f2 = f(x + 2.0 * hs);
  auto f3 = f(x + 3.0 * hs);
  auto f4 = f(x + 4.0 * hs);
  return decltype(f0)((-25.0 * f0 + 48.0 * f1 - 36.0 * f2 + 16.0 * f3 - 3.0 * f4) *
                      (1.0 / (12.0 * hs)));
}

/// Partial derivative of f(Vector) along coordinate k. Bounds apply to x(k).
template <class F>
auto partial(F&& f, const Vector& x, int k, double h,
             double lo = -std::numeric_limits<double>::infinity(),
             double hi = std::numeric_limits<double>::infinity()) {
  return derivative(
      [&](double t) {
        Vector xs = x;
        xs(k) = t;
        return f(xs);
      },
      x(k), h, lo, hi);
}

}  // namespace ahlab::fd
