#pragma once

#include "ahlab/finite_difference.hpp"
#include "ahlab/metric.hpp"
#include "ahlab/tensor.hpp"

#include <functional>
#include <vector>

namespace ahlab {

// Curvature sign convention: R_ijkl = g(R(d_i, d_j) d_k, d_l) with
// R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y], so sec(X, Z) = R(X, Z, Z, X) and
// hyperbolic space has R = -K. verify_sign_convention() asserts this.

ChristoffelField christoffel(const MetricJet& jet, Chart chart = Chart::fermi);
ChristoffelField christoffel(const CoordinateMetric& metric, const Vector& x,
                             double step = fd::kDefaultStep);
/// Christoffels of dr^2 + g_Y in Fermi coordinates; compactified points are
/// converted with r = -log(rho).
ChristoffelField christoffel(const FermiMetric& metric, const ChartPoint& p,
                             double step = fd::kDefaultStep);

Tensor4 riemann(const MetricJet& jet);
Tensor4 riemann(const CoordinateMetric& metric, const Vector& x, double step = fd::kDefaultStep);
Tensor4 riemann(const FermiMetric& metric, const ChartPoint& p, double step = fd::kDefaultStep);

/// Mixed curvature R_ij^k_l = g^{km} R_ijml.
DenseTensor<4> raise_third(const Tensor4& r, const Matrix& g_inv);

/// R_N[beta][alpha] = R_{0 alpha}^{beta}_0 (n x n), from a full-dimension Riemann tensor.
Matrix normal_curvature(const Tensor4& r, const Matrix& g_full);
/// Normal curvature operator of a Fermi metric at (y, r); closed form when the
/// metric supplies one.
Matrix normal_curvature(const FermiMetric& metric, const std::vector<double>& y, double r,
                        double step = fd::kDefaultStep);

struct CovariantCurvatureDerivative {
  Tensor5 nabla_r;  // (m, i, j, k, l) -> nabla_m R_ijkl
  Tensor4 r;        // R_ijkl at the point
  /// Max deviation between the differenced d_mu R_{0 alpha}^beta_0 and its
  /// reconstruction from nabla R and Christoffel terms.
  double residual = 0.0;
  /// Remainder F[mu - 1][beta][alpha] in
  ///   -d_mu R_N = -Gamma^s_{mu alpha}(delta + R_N)^beta_s + Gamma^beta_{mu s}(delta + R_N)^s_alpha + F.
  std::vector<Matrix> remainder;
  /// Directly differenced d_mu R_N (same layout as remainder).
  std::vector<Matrix> d_normal_curvature;
};

/// nabla_m R_ijkl = d_m R_ijkl - sum of Gamma * R terms, with d_m R by 4th-order
/// differences of riemann() at width `step`.
CovariantCurvatureDerivative covariant_curvature_derivative(const CoordinateMetric& metric,
                                                            const Vector& x,
                                                            double step = fd::kDefaultStep);
CovariantCurvatureDerivative covariant_curvature_derivative(const FermiMetric& metric,
                                                            const ChartPoint& p,
                                                            double step = fd::kDefaultStep);

/// Smooth map x -> y between charts with its first and second derivatives:
/// jacobian(m, i) = dy^m/dx^i, hessian[m](i, j) = d^2 y^m / dx^i dx^j.
struct ChartMap {
  std::function<Vector(const Vector&)> map;
  std::function<Matrix(const Vector&)> jacobian;
  std::function<std::vector<Matrix>(const Vector&)> hessian;
};

/// Max-norm residual of
///   d^2 y^m / dx^i dx^j = Gamma_x^l_ij dy^m/dx^l - Gamma_y^m_kl(f(x)) dy^k/dx^i dy^l/dx^j,
/// with Gamma_y from `metric` (coordinates y) and Gamma_x from its pullback,
/// each computed by its own differencing pipeline.
double christoffel_transform_residual(const CoordinateMetric& metric, const ChartMap& f,
                                      const Vector& x, double step = fd::kDefaultStep);
double christoffel_transform_residual(const FermiMetric& metric, const ChartMap& f,
                                      const ChartPoint& p, double step = fd::kDefaultStep);

/// Self-test: the hyperbolic model must give sec = -1 and R + K = 0.
/// Returns the largest deviation found.
double verify_sign_convention();

}  // namespace ahlab
