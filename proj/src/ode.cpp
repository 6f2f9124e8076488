#include "ahlab/ode.hpp"

#include "ahlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ahlab::ode {

namespace {

constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double scaled_norm(const Vector& v, const Vector& y0, const Vector& y1, const Options& o) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double q = v(i) / sc;
    s += q * q;
  }
  return std::sqrt(s / static_cast<double>(std::max<Eigen::Index>(v.size(), 1)));
}

}  // namespace

std::vector<double> uniform_grid(double a, double b, std::size_t samples) {
  if (samples < 2) throw Error(Errc::precondition, "grid needs at least two samples");
  std::vector<double> g(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  g.back() = b;
  return g;
}

Solution integrate(const Rhs& f, const Vector& y0, std::span<const double> grid,
                   const Options& opts, const Guard& guard) {
  if (grid.size() < 2) throw Error(Errc::precondition, "output grid needs two points");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw Error(Errc::precondition, "tolerances must be positive");
  const double t0 = grid.front();
  const double t1 = grid.back();
  if (!(t1 > t0)) throw Error(Errc::precondition, "integration is forward only");

  const auto n = y0.size();
  Solution sol;
  sol.t.reserve(grid.size());
  sol.y.reserve(grid.size());
  sol.t.push_back(t0);
  sol.y.push_back(y0);
  std::size_t next_out = 1;

  Vector y = y0, y_new(n), y_stage(n), err(n);
  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  double t = t0;
  f(t, y, k1);

  double h = opts.initial_step;
  if (h <= 0.0) {
    const double dy0 = scaled_norm(y, y, y, opts);
    const double df0 = scaled_norm(k1, y, y, opts);
    h = (dy0 < 1e-5 || df0 < 1e-5) ? 1e-6 : 0.01 * dy0 / df0;
    h = std::min(h, t1 - t0);
    y_stage = y + h * k1;
    f(t + h, y_stage, k2);
    const double ddf = scaled_norm(k2 - k1, y, y, opts) / h;
    const double m = std::max(df0, ddf);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / m, 0.2);
    h = std::min({100.0 * h, h1, t1 - t0});
  }

  double err_prev = 1e-4;
  while (t < t1) {
    if (sol.accepted + sol.rejected >= opts.max_steps) {
      throw Error(Errc::tolerance, "step budget exhausted", t);
    }
    if (t + h > t1 || t1 - (t + h) < 1e-12 * std::abs(t1)) h = t1 - t;

    y_stage = y + h * (a21 * k1);
    f(t + c2 * h, y_stage, k2);
    y_stage = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, y_stage, k3);
    y_stage = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, y_stage, k4);
    y_stage = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, y_stage, k5);
    y_stage = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, y_stage, k6);
    y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, y_new, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double e = scaled_norm(err, y, y_new, opts);
    if (!std::isfinite(e)) e = 1e10;
    if (e <= 1.0) {
      // Dense output coefficients for this step.
      const Vector ydiff = y_new - y;
      const Vector bspl = h * k1 - ydiff;
      const Vector r4 = ydiff - h * k7 - bspl;
      const Vector r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      const double t_new = t + h;
      while (next_out < grid.size() && grid[next_out] <= t_new + 1e-12 * std::abs(t_new)) {
        const double th = (grid[next_out] - t) / h;
        const double th1 = 1.0 - th;
        sol.t.push_back(grid[next_out]);
        sol.y.push_back(y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
        ++next_out;
      }
      t = t_new;
      y = y_new;
      k1 = k7;
      ++sol.accepted;
      if (!y.allFinite()) throw Error(Errc::blow_up, "non-finite state", t);
      if (guard) {
        if (auto label = guard(t, y)) {
          sol.halted = Event{t, *label};
          return sol;
        }
      }
      // PI step control (Hairer's beta = 0.04).
      const double fac = 0.9 * std::pow(std::max(e, 1e-10), -0.2 + 0.08) * std::pow(err_prev, 0.04);
      h *= std::clamp(fac, 0.2, 10.0);
      err_prev = std::max(e, 1e-4);
    } else {
      ++sol.rejected;
      h *= std::max(0.2, 0.9 * std::pow(e, -0.2));
    }
    if (h < opts.min_step) throw Error(Errc::tolerance, "step size underflow", t);
  }
  while (next_out < grid.size()) {
    sol.t.push_back(grid[next_out]);
    sol.y.push_back(y);
    ++next_out;
  }
  return sol;
}

}  // namespace ahlab::ode
