#include "ahlab/linalg.hpp"

#include "ahlab/errors.hpp"

#include <cmath>

namespace ahlab {

EigenRange symmetric_eigen_range(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

EigenRange generalized_eigen_range(const Matrix& a, const Matrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(symmetrize(a), symmetrize(b),
                                                      Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::degenerate_metric, "reference form is not positive definite");
  }
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

EigenRange self_adjoint_eigen_range(const Matrix& s, const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(g));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw Error(Errc::degenerate_metric, "metric is not positive definite");
  }
  const Matrix root = es.operatorSqrt();
  const Matrix inv_root = es.operatorInverseSqrt();
  return symmetric_eigen_range(root * s * inv_root);
}

Matrix spd_inverse(const Matrix& g) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::degenerate_metric, "matrix is not positive definite");
  }
  return llt.solve(Matrix::Identity(g.rows(), g.cols()));
}

bool is_spd(const Matrix& g) {
  if (!g.allFinite()) return false;
  Eigen::LLT<Matrix> llt(symmetrize(g));
  return llt.info() == Eigen::Success;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace ahlab
