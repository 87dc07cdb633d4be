#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spt/projective.hpp"

namespace spt {

// Translation-invariant MPS: d physical tensors, each a D x D bond matrix.
struct UniformMPS {
  int d = 0;
  int D = 1;
  std::vector<Eigen::MatrixXcd> A;  // [physical index]
};

// Entangled-pair tensor: physical (m,n) = m*D + n, A^{(m,n)} = |m><n| / sqrt(D).
// Right-canonical, transfer map X -> (tr X / D) I.
UniformMPS build_eps_mps(const ProjectiveRep& rho);

UniformMPS product_umps(const Eigen::VectorXcd& v);  // bond dimension 1

// Stacked chain: physical index i_a * d_b + i_b, bond kron, matching the
// Kronecker ordering of stacked site reps.
UniformMPS tensor_umps(const UniformMPS& a, const UniformMPS& b);

// Ring amplitudes tr(A^{i_0} ... A^{i_{N-1}}), site-major, unnormalized.
Eigen::VectorXcd contract_umps_ring(const UniformMPS& mps, int N);

struct TransferSpectrum {
  std::complex<double> lambda1, lambda2;  // |lambda1| >= |lambda2|
  double gap = 0.0;                       // |lambda1| - |lambda2|
  Eigen::MatrixXcd fixed_point;           // right eigenvector of the dominant eigenvalue
};

// Top two eigenvalues of X -> sum_i A^i X A^i+. Dense solve for D <= 8,
// two-vector subspace iteration above that (tol 1e-12, 10^4 iterations).
TransferSpectrum transfer_spectrum(const UniformMPS& mps);

}  // namespace spt
