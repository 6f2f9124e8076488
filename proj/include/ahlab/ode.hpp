#pragma once

#include "ahlab/linalg.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ahlab::ode {

/// dy/dt = f(t, y); the callee writes into `dydt` (already sized).
using Rhs = std::function<void(double t, const Vector& y, Vector& dydt)>;

/// Called after every accepted step. Returning a label halts the integration
/// at that step (outputs up to and including it are kept).
using Guard = std::function<std::optional<std::string>(double t, const Vector& y)>;

struct Options {
  double rtol = 1e-9;
  double atol = 1e-9;
  double initial_step = 0.0;  // 0 selects automatically
  double min_step = 1e-14;
  std::size_t max_steps = 2'000'000;
};

struct Event {
  double t = 0.0;
  std::string label;
};

struct Solution {
  std::vector<double> t;
  std::vector<Vector> y;
  std::optional<Event> halted;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Dormand-Prince 5(4) with error control on the 5th-order solution (local
/// extrapolation) and the 4th-order continuous extension for dense output.
/// Samples are produced at every point of `grid` (increasing, starting at t0).
Solution integrate(const Rhs& f, const Vector& y0, std::span<const double> grid,
                   const Options& opts = {}, const Guard& guard = {});

std::vector<double> uniform_grid(double a, double b, std::size_t samples);

}  // namespace ahlab::ode
