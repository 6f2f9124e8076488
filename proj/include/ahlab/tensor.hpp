#pragma once

#include "ahlab/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ahlab {

/// Which radial variable a chart point uses. rho = exp(-r).
enum class Chart { fermi, compactified };

/// A point (y, r) or (y, rho). Index 0 of the full coordinate vector is the
/// radial variable, 1..n are the tangential coordinates.
class ChartPoint {
 public:
  static ChartPoint fermi(std::vector<double> y, double r);
  static ChartPoint compactified(std::vector<double> y, double rho);

  Chart chart() const { return chart_; }
  const std::vector<double>& y() const { return y_; }
  int fiber_dim() const { return static_cast<int>(y_.size()); }
  double r() const;
  double rho() const;
  double radial() const { return radial_; }

  /// Full coordinate vector (radial, y^1, ..., y^n).
  Vector coords() const;
  ChartPoint to(Chart target) const;

 private:
  ChartPoint(Chart chart, std::vector<double> y, double radial)
      : chart_(chart), y_(std::move(y)), radial_(radial) {}

  Chart chart_;
  std::vector<double> y_;
  double radial_;
};

/// Dense tensor with `Rank` indices each ranging over `dim` values.
/// Components are stored row-major in the index order.
template <std::size_t Rank>
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(int dim) : dim_(dim), data_(power(dim), 0.0) {}

  int dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  template <typename... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  DenseTensor& operator+=(const DenseTensor& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseTensor& operator-=(const DenseTensor& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseTensor& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }
  friend DenseTensor operator*(DenseTensor a, double s) { return a *= s; }

 private:
  std::size_t power(int d) const {
    std::size_t p = 1;
    for (std::size_t i = 0; i < Rank; ++i) p *= static_cast<std::size_t>(d);
    return p;
  }
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t o = 0;
    for (int i : idx) o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    return o;
  }

  int dim_ = 0;
  std::vector<double> data_;
};

/// Covariant 4-tensor R_{ijkl}; also used for the constant curvature tensor
/// and Kulkarni-Nomizu products.
using Tensor4 = DenseTensor<4>;
/// Covariant 5-tensor, stored as (m, i, j, k, l) for nabla_m R_{ijkl}.
using Tensor5 = DenseTensor<5>;

/// Christoffel symbols of the second kind, Gamma^k_{ij} stored as (k, i, j).
struct ChristoffelField {
  DenseTensor<3> gamma;
  Chart chart = Chart::fermi;

  double operator()(int k, int i, int j) const { return gamma(k, i, j); }
  int dim() const { return gamma.dim(); }
};

/// K_{ijkl} = g_il g_jk - g_ik g_jl (constant curvature +1 convention).
Tensor4 constant_curvature_tensor(const Matrix& g);

/// (h (x) k)_{ijkl} = h_il k_jk - h_ik k_jl + h_jk k_il - h_jl k_ik.
Tensor4 kulkarni_nomizu(const Matrix& h, const Matrix& k);

/// Sectional curvature of the coordinate plane (a, b): R(a,b,b,a) / |a ^ b|^2.
double sectional_curvature(const Tensor4& riemann, const Matrix& g, int a, int b);

/// Largest deviation from R_ijkl = -R_jikl = -R_ijlk = R_klij.
double riemann_symmetry_defect(const Tensor4& r);
/// Largest |R_ijkl + R_jkil + R_kijl|.
double bianchi_defect(const Tensor4& r);

enum class Slot { lower, upper };

/// Pointwise g-norm of a tensor with the given index variances: the full
/// contraction of T with itself, using g^{-1} on lower slots and g on upper.
double gnorm(std::span<const double> components, int dim, std::span<const Slot> slots,
             const Matrix& g);

double gnorm(const Tensor4& t, const Matrix& g);
double gnorm(const Tensor5& t, const Matrix& g);
/// Covariant 2-tensor.
double gnorm_covariant(const Matrix& t, const Matrix& g);
/// (1,1) tensor with row index upper.
double gnorm_mixed(const Matrix& t, const Matrix& g);

}  // namespace ahlab
