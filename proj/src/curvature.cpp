#include "ahlab/curvature.hpp"

#include "ahlab/errors.hpp"

#include <cmath>

namespace ahlab {

namespace {

std::size_t idx(int a, int b, int dim) { return static_cast<std::size_t>(a * dim + b); }

Matrix checked_inverse(const Matrix& g) {
  Eigen::FullPivLU<Matrix> lu(g);
  if (!lu.isInvertible() || !g.allFinite()) {
    throw Error(Errc::degenerate_metric, "metric matrix is singular");
  }
  return lu.inverse();
}

// T_ijl = d_i g_jl + d_j g_il - d_l g_ij, stored (i, j, l).
DenseTensor<3> first_kind(const MetricJet& jet) {
  const int n = static_cast<int>(jet.g.rows());
  DenseTensor<3> t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        t(i, j, l) = jet.d1[static_cast<std::size_t>(i)](j, l) +
                     jet.d1[static_cast<std::size_t>(j)](i, l) -
                     jet.d1[static_cast<std::size_t>(l)](i, j);
  return t;
}

}  // namespace

ChristoffelField christoffel(const MetricJet& jet, Chart chart) {
  if (jet.d1.empty()) throw Error(Errc::precondition, "christoffel needs first derivatives");
  const int n = static_cast<int>(jet.g.rows());
  const Matrix g_inv = checked_inverse(jet.g);
  const DenseTensor<3> t = first_kind(jet);
  ChristoffelField out{DenseTensor<3>(n), chart};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += g_inv(k, l) * t(i, j, l);
        out.gamma(k, i, j) = 0.5 * s;
        out.gamma(k, j, i) = 0.5 * s;
      }
  return out;
}

ChristoffelField christoffel(const CoordinateMetric& metric, const Vector& x, double step) {
  if (!(step > 0.0)) throw Error(Errc::precondition, "step must be positive");
  return christoffel(metric.evaluate(x, 1, step), metric.chart);
}

ChristoffelField christoffel(const FermiMetric& metric, const ChartPoint& p, double step) {
  return christoffel(metric.full(), p.to(Chart::fermi).coords(), step);
}

Tensor4 riemann(const MetricJet& jet) {
  if (jet.d2.empty()) throw Error(Errc::precondition, "riemann needs second derivatives");
  const int n = static_cast<int>(jet.g.rows());
  const Matrix g_inv = checked_inverse(jet.g);
  const ChristoffelField gam = christoffel(jet);
  const DenseTensor<3> t = first_kind(jet);

  // dGamma(m, k, i, j) = d_m Gamma^k_ij
  DenseTensor<4> dgam(n);
  for (int m = 0; m < n; ++m) {
    const Matrix dginv = -g_inv * jet.d1[static_cast<std::size_t>(m)] * g_inv;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Vector dt(n);
        for (int l = 0; l < n; ++l) {
          dt(l) = jet.d2[idx(m, i, n)](j, l) + jet.d2[idx(m, j, n)](i, l) -
                  jet.d2[idx(m, l, n)](i, j);
        }
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += dginv(k, l) * t(i, j, l) + g_inv(k, l) * dt(l);
          dgam(m, k, i, j) = 0.5 * s;
          dgam(m, k, j, i) = 0.5 * s;
        }
      }
  }

  // R^m_kij = d_i Gamma^m_jk - d_j Gamma^m_ik + Gamma^m_ip Gamma^p_jk - Gamma^m_jp Gamma^p_ik
  // R_ijkl = g_lm R^m_kij
  Tensor4 r(n);
  DenseTensor<4> up(n);  // (m, k, i, j)
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = dgam(i, m, j, k) - dgam(j, m, i, k);
          for (int p = 0; p < n; ++p) s += gam(m, i, p) * gam(p, j, k) - gam(m, j, p) * gam(p, i, k);
          up(m, k, i, j) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += jet.g(l, m) * up(m, k, i, j);
          r(i, j, k, l) = s;
        }
  return r;
}

Tensor4 riemann(const CoordinateMetric& metric, const Vector& x, double step) {
  if (!(step > 0.0)) throw Error(Errc::precondition, "step must be positive");
  return riemann(metric.evaluate(x, 2, step));
}

Tensor4 riemann(const FermiMetric& metric, const ChartPoint& p, double step) {
  return riemann(metric.full(), p.to(Chart::fermi).coords(), step);
}

DenseTensor<4> raise_third(const Tensor4& r, const Matrix& g_inv) {
  const int n = r.dim();
  DenseTensor<4> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += g_inv(k, m) * r(i, j, m, l);
          out(i, j, k, l) = s;
        }
  return out;
}

Matrix normal_curvature(const Tensor4& r, const Matrix& g_full) {
  const int dim = r.dim();
  const int n = dim - 1;
  const Matrix g_inv = checked_inverse(g_full);
  Matrix rn(n, n);
  for (int b = 1; b <= n; ++b)
    for (int a = 1; a <= n; ++a) {
      double s = 0.0;
      for (int m = 0; m < dim; ++m) s += g_inv(b, m) * r(0, a, m, 0);
      rn(b - 1, a - 1) = s;
    }
  return rn;
}

Matrix normal_curvature(const FermiMetric& metric, const std::vector<double>& y, double r,
                        double step) {
  const Vector x = chart_coords(r, y);
  if (metric.normal_curvature) return metric.normal_curvature(x).rn;
  const CoordinateMetric full = metric.full();
  const MetricJet jet = full.evaluate(x, 2, step);
  return normal_curvature(riemann(jet), jet.g);
}

CovariantCurvatureDerivative covariant_curvature_derivative(const CoordinateMetric& metric,
                                                            const Vector& x, double step) {
  if (!(step > 0.0)) throw Error(Errc::precondition, "step must be positive");
  const int dim = metric.dim;
  const int n = dim - 1;
  const MetricJet jet = metric.evaluate(x, 2, step);
  const Matrix g_inv = checked_inverse(jet.g);
  const ChristoffelField gam = christoffel(jet, metric.chart);

  CovariantCurvatureDerivative out;
  out.r = riemann(jet);
  const auto r_at = [&](const Vector& xs) { return riemann(metric, xs, step); };
  std::vector<Tensor4> dr;
  dr.reserve(static_cast<std::size_t>(dim));
  for (int m = 0; m < dim; ++m) {
    dr.push_back(m == 0 ? fd::partial(r_at, x, m, step, metric.radial_min, metric.radial_max)
                        : fd::partial(r_at, x, m, step));
  }

  const Tensor4& r = out.r;
  out.nabla_r = Tensor5(dim);
  for (int m = 0; m < dim; ++m)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) {
            double s = dr[static_cast<std::size_t>(m)](i, j, k, l);
            for (int p = 0; p < dim; ++p) {
              s -= gam(p, m, i) * r(p, j, k, l) + gam(p, m, j) * r(i, p, k, l) +
                   gam(p, m, k) * r(i, j, p, l) + gam(p, m, l) * r(i, j, k, p);
            }
            out.nabla_r(m, i, j, k, l) = s;
          }

  // Mixed curvature M_ij^k_l and its directly differenced tangential derivatives.
  const DenseTensor<4> mixed = raise_third(r, g_inv);
  const auto rn_at = [&](const Vector& xs) {
    const MetricJet j = metric.evaluate(xs, 2, step);
    return normal_curvature(riemann(j), j.g);
  };
  for (int mu = 1; mu <= n; ++mu) {
    const Matrix direct = fd::partial(rn_at, x, mu, step);
    Matrix f(n, n);
    double res = 0.0;
    for (int b = 1; b <= n; ++b)
      for (int a = 1; a <= n; ++a) {
        // nabla_mu R_{0 a}^b_0 from the all-lower derivative (metric compatibility).
        double nab = 0.0;
        for (int k = 0; k < dim; ++k) nab += g_inv(b, k) * out.nabla_r(mu, 0, a, k, 0);
        double radial_terms = 0.0;
        double tangential_terms = 0.0;
        for (int s = 0; s < dim; ++s) {
          radial_terms += gam(s, mu, 0) * mixed(s, a, b, 0) + gam(s, mu, 0) * mixed(0, a, b, s);
          tangential_terms += gam(s, mu, a) * mixed(0, s, b, 0) - gam(b, mu, s) * mixed(0, a, s, 0);
        }
        const double reconstructed = nab + radial_terms + tangential_terms;
        res = std::max(res, std::abs(direct(b - 1, a - 1) - reconstructed));
        f(b - 1, a - 1) = -(nab + radial_terms);
      }
    out.residual = std::max(out.residual, res);
    out.remainder.push_back(f);
    out.d_normal_curvature.push_back(direct);
  }
  return out;
}

CovariantCurvatureDerivative covariant_curvature_derivative(const FermiMetric& metric,
                                                            const ChartPoint& p, double step) {
  return covariant_curvature_derivative(metric.full(), p.to(Chart::fermi).coords(), step);
}

double christoffel_transform_residual(const CoordinateMetric& metric, const ChartMap& f,
                                      const Vector& x, double step) {
  const int dim = metric.dim;
  const Matrix jac = f.jacobian(x);
  if (jac.rows() != dim || jac.cols() != dim) {
    throw Error(Errc::dimension_mismatch, "chart map Jacobian size");
  }
  const double scale = std::max(1.0, jac.cwiseAbs().maxCoeff());
  if (std::abs(jac.determinant()) <= 1e-12 * std::pow(scale, dim)) {
    throw Error(Errc::non_invertible_map, "chart map Jacobian is singular");
  }
  const Vector y = f.map(x);
  const ChristoffelField gy = christoffel(metric, y, step);

  CoordinateMetric pulled;
  pulled.dim = dim;
  pulled.chart = metric.chart;
  pulled.label = metric.label + " (pullback)";
  pulled.jet = [&metric, &f](const Vector& xs, int) {
    const Matrix j = f.jacobian(xs);
    MetricJet out;
    out.g = j.transpose() * metric.jet(f.map(xs), 0).g * j;
    return out;
  };
  const ChristoffelField gx = christoffel(pulled, x, step);
  const std::vector<Matrix> hess = f.hessian(x);

  double res = 0.0;
  for (int m = 0; m < dim; ++m)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double rhs = 0.0;
        for (int l = 0; l < dim; ++l) rhs += gx(l, i, j) * jac(m, l);
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) rhs -= gy(m, k, l) * jac(k, i) * jac(l, j);
        res = std::max(res, std::abs(hess[static_cast<std::size_t>(m)](i, j) - rhs));
      }
  return res;
}

double christoffel_transform_residual(const FermiMetric& metric, const ChartMap& f,
                                      const ChartPoint& p, double step) {
  return christoffel_transform_residual(metric.full(), f, p.coords(), step);
}

double verify_sign_convention() {
  // dr^2 + e^{2r} delta on a 2-dimensional fiber: constant curvature -1.
  CoordinateMetric m;
  m.dim = 3;
  m.jet = [](const Vector& x, int order) {
    const double e = std::exp(2.0 * x(0));
    MetricJet j;
    j.g = Matrix::Identity(3, 3);
    j.g(1, 1) = j.g(2, 2) = e;
    if (order >= 1) {
      j.d1.assign(3, Matrix::Zero(3, 3));
      j.d1[0](1, 1) = j.d1[0](2, 2) = 2.0 * e;
    }
    if (order >= 2) {
      j.d2.assign(9, Matrix::Zero(3, 3));
      j.d2[0](1, 1) = j.d2[0](2, 2) = 4.0 * e;
    }
    return j;
  };
  Vector x(3);
  x << 0.7, 0.1, -0.2;
  const MetricJet jet = m.evaluate(x, 2, fd::kDefaultStep);
  const Tensor4 r = riemann(jet);
  double dev = (r + constant_curvature_tensor(jet.g)).max_abs() / jet.g.cwiseAbs().maxCoeff();
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) dev = std::max(dev, std::abs(sectional_curvature(r, jet.g, a, b) + 1.0));
  return dev;
}

}  // namespace ahlab
