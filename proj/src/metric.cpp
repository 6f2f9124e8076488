#include "ahlab/metric.hpp"

#include "ahlab/errors.hpp"
#include "ahlab/finite_difference.hpp"

#include <cmath>

namespace ahlab {

Vector chart_coords(double radial, const std::vector<double>& y) {
  Vector x(static_cast<Eigen::Index>(y.size()) + 1);
  x(0) = radial;
  for (std::size_t i = 0; i < y.size(); ++i) x(static_cast<Eigen::Index>(i) + 1) = y[i];
  return x;
}

MetricJet CoordinateMetric::evaluate(const Vector& x, int order, double step) const {
  if (x.size() != dim) throw Error(Errc::dimension_mismatch, "coordinate vector size");
  if (x(0) < radial_min || x(0) > radial_max) {
    throw Error(Errc::out_of_span, "radial coordinate outside the metric's span", x(0));
  }
  MetricJet j = jet(x, order);
  if (order >= 1 && j.d1.empty()) {
    auto g_at = [&](const Vector& xs) { return jet(xs, 0).g; };
    j.d1.resize(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
      j.d1[static_cast<std::size_t>(k)] =
          k == 0 ? Matrix(fd::partial(g_at, x, k, step, radial_min, radial_max))
                 : Matrix(fd::partial(g_at, x, k, step));
    }
  }
  if (order >= 2 && j.d2.empty()) {
    j.d2.assign(static_cast<std::size_t>(dim * dim), Matrix());
    for (int b = 0; b < dim; ++b) {
      // d_b g as a function of the point, analytic if the closure has it.
      auto db_at = [&](const Vector& xs) -> Matrix {
        MetricJet inner = jet(xs, 1);
        if (!inner.d1.empty()) return inner.d1[static_cast<std::size_t>(b)];
        auto g_at = [&](const Vector& xx) { return jet(xx, 0).g; };
        return b == 0 ? Matrix(fd::partial(g_at, xs, b, step, radial_min, radial_max))
                      : Matrix(fd::partial(g_at, xs, b, step));
      };
      for (int a = 0; a <= b; ++a) {
        Matrix dab = a == 0 ? Matrix(fd::partial(db_at, x, a, step, radial_min, radial_max))
                            : Matrix(fd::partial(db_at, x, a, step));
        j.d2[static_cast<std::size_t>(a * dim + b)] = dab;
        j.d2[static_cast<std::size_t>(b * dim + a)] = dab;
      }
    }
    // Nested differences are not exactly symmetric in (a, b); average.
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b) {
        Matrix avg = 0.5 * (j.d2[static_cast<std::size_t>(a * dim + b)] +
                            j.d2[static_cast<std::size_t>(b * dim + a)]);
        j.d2[static_cast<std::size_t>(a * dim + b)] = avg;
        j.d2[static_cast<std::size_t>(b * dim + a)] = avg;
      }
  }
  return j;
}

MetricJet embed_fiber_jet(const MetricJet& fiber, int order) {
  const auto n = fiber.g.rows();
  const auto dim = n + 1;
  auto embed = [&](const Matrix& block, double corner) {
    Matrix m = Matrix::Zero(dim, dim);
    m(0, 0) = corner;
    m.bottomRightCorner(n, n) = block;
    return m;
  };
  MetricJet out;
  out.g = embed(fiber.g, 1.0);
  if (order >= 1 && !fiber.d1.empty()) {
    for (const auto& d : fiber.d1) out.d1.push_back(embed(d, 0.0));
  }
  if (order >= 2 && !fiber.d2.empty()) {
    for (const auto& d : fiber.d2) out.d2.push_back(embed(d, 0.0));
  }
  return out;
}

Matrix FermiMetric::fiber(const std::vector<double>& y, double r) const {
  return fiber_jet(chart_coords(r, y), 0).g;
}

CoordinateMetric FermiMetric::full() const {
  CoordinateMetric m;
  m.dim = n + 1;
  m.chart = Chart::fermi;
  m.radial_min = r_min;
  m.radial_max = r_max;
  m.label = label;
  m.jet = [fj = fiber_jet](const Vector& x, int order) {
    return embed_fiber_jet(fj(x, order), order);
  };
  return m;
}

Matrix CompactifiedMetric::fiber(const std::vector<double>& y, double rho) const {
  return fiber_jet(chart_coords(rho, y), 0).g;
}

CoordinateMetric CompactifiedMetric::full() const {
  CoordinateMetric m;
  m.dim = n + 1;
  m.chart = Chart::compactified;
  m.radial_min = 0.0;
  m.radial_max = 1.0;
  m.label = label;
  m.jet = [fj = fiber_jet](const Vector& x, int order) {
    if (!(x(0) > 0.0)) throw Error(Errc::domain, "rho must be positive", x(0));
    return embed_fiber_jet(fj(x, order), order);
  };
  return m;
}

CoordinateMetric CompactifiedMetric::blow_up() const {
  CoordinateMetric bar = full();
  CoordinateMetric m = bar;
  m.label = label + " (blow-up)";
  m.jet = [bj = bar.jet, dim = bar.dim](const Vector& x, int order) {
    // g = w gbar with w = rho^{-2}; w' = -2 rho^{-3}, w'' = 6 rho^{-4}.
    const MetricJet b = bj(x, order);
    const double rho = x(0);
    const double w = 1.0 / (rho * rho);
    const double w1 = -2.0 * w / rho;
    const double w2 = 6.0 * w / (rho * rho);
    MetricJet out;
    out.g = w * b.g;
    if (!b.d1.empty()) {
      out.d1.resize(static_cast<std::size_t>(dim));
      for (int k = 0; k < dim; ++k) {
        out.d1[static_cast<std::size_t>(k)] = w * b.d1[static_cast<std::size_t>(k)];
        if (k == 0) out.d1[0] += w1 * b.g;
      }
    }
    if (!b.d2.empty() && !b.d1.empty()) {
      out.d2.resize(static_cast<std::size_t>(dim * dim));
      for (int a = 0; a < dim; ++a)
        for (int c = 0; c < dim; ++c) {
          Matrix d = w * b.d2[static_cast<std::size_t>(a * dim + c)];
          if (a == 0) d += w1 * b.d1[static_cast<std::size_t>(c)];
          if (c == 0) d += w1 * b.d1[static_cast<std::size_t>(a)];
          if (a == 0 && c == 0) d += w2 * b.g;
          out.d2[static_cast<std::size_t>(a * dim + c)] = d;
        }
    }
    return out;
  };
  return m;
}

}  // namespace ahlab
