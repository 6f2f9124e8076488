#pragma once

#include "ahlab/decay_fit.hpp"
#include "ahlab/linalg.hpp"
#include "ahlab/metric.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace ahlab {

constexpr std::size_t kDefaultSamples = 512;
constexpr double kDefaultTol = 1e-9;

// ---------------------------------------------------------------------------
// Scalar Riccati equation lambda' + lambda^2 = f(r).

struct ScalarRiccatiProblem {
  std::function<double(double)> f;
  /// Claimed envelope |f(r) - 1| <= J e^{-r}.
  double envelope_constant = 0.0;
  double lambda0 = 1.0;
  double r0 = 0.0;
  double r1 = 20.0;
};

/// Checks lambda0 > 0 and J >= sup e^r |f - 1| on a 1024-point grid.
void validate(const ScalarRiccatiProblem& prob);

struct ScalarTrajectory {
  std::vector<double> r;
  std::vector<double> lambda;
};

/// Throws Errc::positivity_loss (with the crossing r) if lambda reaches 0.
ScalarTrajectory integrate_scalar_riccati(const ScalarRiccatiProblem& prob, double tol = kDefaultTol,
                                          std::size_t samples = kDefaultSamples);

struct EnvelopeReport {
  /// First grid r from which lambda > 1/2 for the rest of the trajectory.
  std::optional<double> r_half;
  double k_upper = 0.0;
  bool upper_holds = false;
  std::optional<double> upper_violation_r;
  double k_lower = 0.0;
  bool lower_holds = false;
  std::optional<double> lower_violation_r;
  /// Fit of the tail supremum of |lambda - 1| over the default window,
  /// restricted to samples above the noise floor; empty when fewer than 8 remain.
  std::optional<DecayFit> fit;
  double max_deviation = 0.0;
  bool below_floor = false;

  bool passed() const { return upper_holds && lower_holds; }
};

/// Test functions from the decay lemma: 1 + K_upper e^{-r} on the whole span
/// with K_upper = max(J, lambda0) + 1, and 1 - K_lower e^{-r} from r_half on,
/// with K_lower >= 2J and 1 - K_lower e^{-r_half} < 1/2.
/// Deviations at or below `noise_floor` are integration noise and are left out of the fit.
EnvelopeReport lemma_decay_envelope_check(const ScalarTrajectory& traj, double J, double lambda0,
                                          double noise_floor = 1e-10);

// ---------------------------------------------------------------------------
// Matrix Riccati and metric flow: S' + S^2 = -R_N, g' = g S + S^T g.

/// Q(r) = -R_N(r), the right-hand side of S' + S^2 = Q. Q = I when sec = -1.
using RiccatiForcing = std::function<Matrix(double r)>;

/// Normal curvature taken from a Fermi metric along the geodesic y = const.
struct FermiCurvatureSource {
  const FermiMetric* metric = nullptr;
  std::vector<double> y;
  double step = 1e-3;
};

using CurvatureSource = std::variant<RiccatiForcing, FermiCurvatureSource>;

struct ShapeMetricState {
  double r = 0.0;
  Matrix S;  // S[beta][gamma] = S^beta_gamma
  Matrix g;
};

struct ShapeMetricSample : ShapeMetricState {
  EigenRange shape;   // spectrum of S (g-self-adjoint)
  EigenRange metric;  // eigenvalues of g against delta
  double symmetry_defect = 0.0;  // max |g S - (g S)^T|, relative to max |g S|
};

struct ShapeMetricTrajectory {
  std::vector<ShapeMetricSample> samples;
};

/// Throws Errc::convexity_loss if S acquires a non-positive eigenvalue or g
/// stops being positive definite.
ShapeMetricTrajectory integrate_shape_metric(const CurvatureSource& source, const Matrix& S0,
                                             const Matrix& g0, double r0, double r1,
                                             double tol = kDefaultTol,
                                             std::size_t samples = kDefaultSamples);

struct ComparisonReport {
  double C = 0.0;   // sup e^r max(|lambda_M - 1|, |lambda_m - 1|)
  double L1 = 0.0;  // inf e^{-2r} min eig g
  double L2 = 0.0;  // sup e^{-2r} max eig g
  Window window;
  double max_symmetry_defect = 0.0;
  bool finite = false;
};

ComparisonReport shape_metric_estimate_check(const ShapeMetricTrajectory& traj,
                                             std::optional<Window> window = {});

struct SinhComparison {
  /// Smallest R with sinh^2(r - R) ref <= g(r) <= sinh^2(r + R) ref at every sample r > R.
  double radius = 0.0;
  /// Same construction driven by the bounds L1 e^{2r} <= g <= L2 e^{2r} (relative to ref).
  double radius_from_bounds = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
};

/// Bisection to 1e-6 on [0, r_last / 2]; Errc::no_finite_radius if the
/// inequalities cannot be met on that range.
SinhComparison sinh_comparison_radius(const ShapeMetricTrajectory& traj, const Matrix& reference);

}  // namespace ahlab
