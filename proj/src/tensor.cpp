#include "ahlab/tensor.hpp"

#include "ahlab/errors.hpp"

#include <cmath>

namespace ahlab {

ChartPoint ChartPoint::fermi(std::vector<double> y, double r) {
  if (!(r >= 0.0)) throw Error(Errc::domain, "Fermi radius must be >= 0");
  return ChartPoint(Chart::fermi, std::move(y), r);
}

ChartPoint ChartPoint::compactified(std::vector<double> y, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw Error(Errc::domain, "rho must lie in (0, 1]");
  return ChartPoint(Chart::compactified, std::move(y), rho);
}

double ChartPoint::r() const { return chart_ == Chart::fermi ? radial_ : -std::log(radial_); }

double ChartPoint::rho() const {
  return chart_ == Chart::compactified ? radial_ : std::exp(-radial_);
}

Vector ChartPoint::coords() const {
  Vector x(fiber_dim() + 1);
  x(0) = radial_;
  for (int i = 0; i < fiber_dim(); ++i) x(i + 1) = y_[static_cast<std::size_t>(i)];
  return x;
}

ChartPoint ChartPoint::to(Chart target) const {
  if (target == chart_) return *this;
  return target == Chart::fermi ? ChartPoint(Chart::fermi, y_, r())
                                : ChartPoint(Chart::compactified, y_, rho());
}

Tensor4 constant_curvature_tensor(const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  Tensor4 k(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) k(i, j, a, b) = g(i, b) * g(j, a) - g(i, a) * g(j, b);
  return k;
}

Tensor4 kulkarni_nomizu(const Matrix& h, const Matrix& k) {
  if (h.rows() != k.rows() || h.cols() != k.cols() || h.rows() != h.cols()) {
    throw Error(Errc::dimension_mismatch, "Kulkarni-Nomizu factors must be square and equal size");
  }
  const int n = static_cast<int>(h.rows());
  Tensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          out(i, j, a, b) = h(i, b) * k(j, a) - h(i, a) * k(j, b) + h(j, a) * k(i, b) -
                            h(j, b) * k(i, a);
  return out;
}

double sectional_curvature(const Tensor4& riemann, const Matrix& g, int a, int b) {
  const double area = g(a, a) * g(b, b) - g(a, b) * g(a, b);
  if (area <= 0.0) throw Error(Errc::degenerate_metric, "degenerate coordinate plane");
  return riemann(a, b, b, a) / area;
}

double riemann_symmetry_defect(const Tensor4& r) {
  const int n = r.dim();
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = r(i, j, k, l);
          d = std::max({d, std::abs(v + r(j, i, k, l)), std::abs(v + r(i, j, l, k)),
                        std::abs(v - r(k, l, i, j))});
        }
  return d;
}

double bianchi_defect(const Tensor4& r) {
  const int n = r.dim();
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          d = std::max(d, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
  return d;
}

namespace {

// Contract slot `slot` of a rank-`rank` tensor with matrix m: out_{..a..} = sum_i m(a, i) t_{..i..}.
std::vector<double> transform_slot(const std::vector<double>& t, int dim, int rank, int slot,
                                   const Matrix& m) {
  std::size_t inner = 1;
  for (int s = slot + 1; s < rank; ++s) inner *= static_cast<std::size_t>(dim);
  const std::size_t outer = t.size() / (inner * static_cast<std::size_t>(dim));
  std::vector<double> out(t.size(), 0.0);
  const auto d = static_cast<std::size_t>(dim);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t i = 0; i < d; ++i) {
        const double w = m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i));
        if (w == 0.0) continue;
        const std::size_t src = (o * d + i) * inner;
        const std::size_t dst = (o * d + a) * inner;
        for (std::size_t q = 0; q < inner; ++q) out[dst + q] += w * t[src + q];
      }
  return out;
}

}  // namespace

double gnorm(std::span<const double> components, int dim, std::span<const Slot> slots,
             const Matrix& g) {
  if (g.rows() != dim) throw Error(Errc::dimension_mismatch, "metric dimension");
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw Error(Errc::degenerate_metric, "metric is not SPD");
  // g = L L^T. Lower slots transform by L^{-1}, upper slots by L^T; the
  // result is the tensor in a g-orthonormal frame.
  const Matrix l = llt.matrixL();
  const Matrix l_inv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim, dim));
  const Matrix l_t = l.transpose();
  std::vector<double> t(components.begin(), components.end());
  const int rank = static_cast<int>(slots.size());
  for (int s = 0; s < rank; ++s) {
    t = transform_slot(t, dim, rank, s, slots[static_cast<std::size_t>(s)] == Slot::lower ? l_inv : l_t);
  }
  double sum = 0.0;
  for (double v : t) sum += v * v;
  return std::sqrt(sum);
}

double gnorm(const Tensor4& t, const Matrix& g) {
  const std::array<Slot, 4> s{Slot::lower, Slot::lower, Slot::lower, Slot::lower};
  return gnorm(t.data(), t.dim(), s, g);
}

double gnorm(const Tensor5& t, const Matrix& g) {
  const std::array<Slot, 5> s{Slot::lower, Slot::lower, Slot::lower, Slot::lower, Slot::lower};
  return gnorm(t.data(), t.dim(), s, g);
}

double gnorm_covariant(const Matrix& t, const Matrix& g) {
  const int n = static_cast<int>(t.rows());
  std::vector<double> c(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i * n + j)] = t(i, j);
  const std::array<Slot, 2> s{Slot::lower, Slot::lower};
  return gnorm(c, n, s, g);
}

double gnorm_mixed(const Matrix& t, const Matrix& g) {
  const int n = static_cast<int>(t.rows());
  std::vector<double> c(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i * n + j)] = t(i, j);
  const std::array<Slot, 2> s{Slot::upper, Slot::lower};
  return gnorm(c, n, s, g);
}

}  // namespace ahlab
