#include "ahlab/decay_fit.hpp"

#include "ahlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ahlab {

Window tail_window(std::span<const double> x, double fraction) {
  if (x.empty()) throw Error(Errc::insufficient_data, "empty sample");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return {*hi - fraction * (*hi - *lo), *hi};
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::dimension_mismatch, "fit_line sizes differ");
  const std::size_t n = x.size();
  if (n < 2) throw Error(Errc::insufficient_data, "need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw Error(Errc::insufficient_data, "degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_samples = n;
  if (syy <= 1e-30 * std::max(1.0, my * my)) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += e * e;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

DecayFit fit_decay_rate(std::span<const double> x, std::span<const double> q,
                        std::optional<Window> window) {
  if (x.size() != q.size()) throw Error(Errc::dimension_mismatch, "fit_decay_rate sizes differ");
  const Window w = window ? *window : tail_window(x);
  if (!(w.hi > w.lo)) throw Error(Errc::precondition, "empty fit window");
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < w.lo || x[i] > w.hi) continue;
    if (!(q[i] > 0.0) || !std::isfinite(q[i])) {
      throw Error(Errc::domain, "non-positive sample in fit window", x[i]);
    }
    xs.push_back(x[i]);
    ls.push_back(std::log(q[i]));
  }
  if (xs.size() < 8) throw Error(Errc::insufficient_data, "fewer than 8 samples in fit window");
  const LinearFit lf = fit_line(xs, ls);
  DecayFit fit;
  fit.exponent = lf.slope;
  fit.log_constant = lf.intercept;
  fit.x_lo = w.lo;
  fit.x_hi = w.hi;
  fit.r_squared = lf.r_squared;
  fit.n_samples = xs.size();
  return fit;
}

std::vector<double> tail_supremum(std::span<const double> q) {
  std::vector<double> out(q.size());
  double m = 0.0;
  for (std::size_t i = q.size(); i-- > 0;) {
    m = std::max(m, std::abs(q[i]));
    out[i] = m;
  }
  return out;
}

}  // namespace ahlab
