#pragma once

#include <functional>
#include <span>

namespace ahlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Adaptive Simpson with Richardson correction on [a, b], absolute tolerance
/// `tol`, recursion depth capped at `max_depth`. Throws Errc::tolerance if a
/// panel fails to converge at the depth cap.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-10, int max_depth = 40);

/// Same, split at the interior points of `breaks` that fall inside (a, b);
/// the tolerance is shared in proportion to panel length.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breaks, double tol = 1e-10,
                                  int max_depth = 40);

}  // namespace ahlab
