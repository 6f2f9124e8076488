#pragma once

#include <Eigen/Dense>

#include <vector>

namespace ahlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Smallest and largest eigenvalue of a symmetric matrix.
struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};

EigenRange symmetric_eigen_range(const Matrix& a);

/// Eigenvalues of `a` relative to the SPD form `b`, i.e. of b^{-1/2} a b^{-1/2}.
EigenRange generalized_eigen_range(const Matrix& a, const Matrix& b);

/// Real spectrum of a g-self-adjoint (1,1) tensor S (row index upper), via
/// g^{1/2} S g^{-1/2} symmetrized.
EigenRange self_adjoint_eigen_range(const Matrix& s, const Matrix& g);

/// Inverse of an SPD matrix; throws Errc::degenerate_metric otherwise.
Matrix spd_inverse(const Matrix& g);

bool is_spd(const Matrix& g);

double spectral_norm(const Matrix& a);

double max_abs(const Matrix& a);

Matrix symmetrize(const Matrix& a);

}  // namespace ahlab
