#pragma once

#include <Eigen/Dense>

namespace spt {

// Closest unitary in Frobenius norm, U V+ from the SVD.
inline Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// polar_unitary plus sigma_max / sigma_min of the input
inline Eigen::MatrixXcd polar_unitary_cond(const Eigen::MatrixXcd& m, double* cond) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (cond) {
    const double lo = s(s.size() - 1);
    *cond = lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace spt
