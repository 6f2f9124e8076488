#pragma once

#include "ahlab/linalg.hpp"
#include "ahlab/tensor.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ahlab {

/// Metric components and (optionally) their coordinate derivatives at a point.
/// d1[k] = d_k g; d2[a * dim + b] = d_a d_b g. Empty vectors mean "not supplied".
struct MetricJet {
  Matrix g;
  std::vector<Matrix> d1;
  std::vector<Matrix> d2;

  int order() const { return !d2.empty() ? 2 : (!d1.empty() ? 1 : 0); }
};

/// Jet closure: given coordinates x and the highest derivative order wanted,
/// returns at least g. Derivatives it omits are filled by finite differences.
using JetFn = std::function<MetricJet(const Vector& x, int order)>;

/// A metric on an open set of R^dim in one coordinate chart. Coordinate 0 is the
/// radial variable and is restricted to [radial_min, radial_max].
struct CoordinateMetric {
  int dim = 0;
  JetFn jet;
  Chart chart = Chart::fermi;
  double radial_min = -std::numeric_limits<double>::infinity();
  double radial_max = std::numeric_limits<double>::infinity();
  std::string label;

  /// Jet up to `order`, with missing derivatives completed by 4th-order
  /// central differences of width `step` (nested for second derivatives).
  MetricJet evaluate(const Vector& x, int order, double step) const;
};

/// R_N and its tangential derivatives, R_N[beta][alpha] = R_{0 alpha}^{beta}_0.
struct NormalCurvatureJet {
  Matrix rn;
  std::vector<Matrix> d_tangential;  // d_mu R_N for mu = 1..n (index mu - 1)
};

/// g = dr^2 + g_{beta nu}(y, r) dy^beta dy^nu. The fiber jet is a closure on
/// x = (r, y^1, ..., y^n) returning the n x n fiber block and its derivatives
/// with respect to all n + 1 coordinates.
struct FermiMetric {
  int n = 0;
  JetFn fiber_jet;
  /// Optional closed-form normal curvature, used in preference to differencing.
  std::function<NormalCurvatureJet(const Vector& x)> normal_curvature;
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
  std::string label;

  Matrix fiber(const std::vector<double>& y, double r) const;
  CoordinateMetric full() const;
};

/// gbar = drho^2 + gbar_{alpha beta}(y, rho) dy^alpha dy^beta on rho in (0, 1].
struct CompactifiedMetric {
  int n = 0;
  JetFn fiber_jet;  // closure on x = (rho, y^1, ..., y^n)
  std::string label;
  std::string provenance;
  /// Set when built by compactify_metric.
  std::shared_ptr<const FermiMetric> source;

  Matrix fiber(const std::vector<double>& y, double rho) const;
  CoordinateMetric full() const;
  /// The blow-up g = rho^{-2} gbar in the same (rho, y) chart.
  CoordinateMetric blow_up() const;
};

/// Wrap a fiber jet into the jet of diag(1, fiber) on n + 1 coordinates.
MetricJet embed_fiber_jet(const MetricJet& fiber, int order);

/// Coordinate vector (radial, y...).
Vector chart_coords(double radial, const std::vector<double>& y);

}  // namespace ahlab
