#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ahlab {

/// log q ~ exponent * x + log_constant, fitted by least squares on a window.
struct DecayFit {
  double exponent = 0.0;
  double log_constant = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double r_squared = 0.0;
  std::size_t n_samples = 0;
};

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

/// Default fit window: the last 60% of the sampled x-range.
Window tail_window(std::span<const double> x, double fraction = 0.6);

/// Requires q > 0 throughout the window and at least 8 samples in it.
DecayFit fit_decay_rate(std::span<const double> x, std::span<const double> q,
                        std::optional<Window> window = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_samples = 0;
};

/// Ordinary least squares of y against x. r_squared is 1 for exactly constant y.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// sup_{s >= x_i} |q(s)|: the smallest nonincreasing majorant of |q| sampled
/// on an increasing grid.
std::vector<double> tail_supremum(std::span<const double> q);

}  // namespace ahlab
