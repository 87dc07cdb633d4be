#include "spt/mps.hpp"

#include <algorithm>
#include <unsupported/Eigen/KroneckerProduct>

#include "spt/error.hpp"
#include "spt/rng.hpp"

namespace spt {

namespace {

void require_shape(const UniformMPS& mps) {
  if (mps.d < 1 || mps.D < 1 || static_cast<int>(mps.A.size()) != mps.d)
    throw Error(errc::dimension_mismatch, "malformed uniform MPS");
  for (const auto& a : mps.A)
    if (a.rows() != mps.D || a.cols() != mps.D)
      throw Error(errc::dimension_mismatch, "bond matrix shape mismatch");
}

// column-major vec: vec(A X A+) = (conj(A) (x) A) vec X
Eigen::MatrixXcd transfer_matrix(const UniformMPS& mps) {
  const long long DD = static_cast<long long>(mps.D) * mps.D;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(DD, DD);
  for (const auto& a : mps.A) t += Eigen::kroneckerProduct(a.conjugate(), a);
  return t;
}

}  // namespace

UniformMPS build_eps_mps(const ProjectiveRep& rho) {
  const int D = rho.dim;
  UniformMPS mps;
  mps.d = D * D;
  mps.D = D;
  mps.A.assign(mps.d, Eigen::MatrixXcd::Zero(D, D));
  const double w = 1.0 / std::sqrt(static_cast<double>(D));
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n) mps.A[m * D + n](m, n) = w;
  return mps;
}

UniformMPS product_umps(const Eigen::VectorXcd& v) {
  if (v.size() < 1) throw Error(errc::dimension_mismatch, "empty site vector");
  UniformMPS mps;
  mps.d = static_cast<int>(v.size());
  mps.D = 1;
  mps.A.assign(mps.d, Eigen::MatrixXcd::Zero(1, 1));
  for (int i = 0; i < mps.d; ++i) mps.A[i](0, 0) = v(i);
  return mps;
}

UniformMPS tensor_umps(const UniformMPS& a, const UniformMPS& b) {
  require_shape(a);
  require_shape(b);
  UniformMPS out;
  out.d = a.d * b.d;
  out.D = a.D * b.D;
  out.A.resize(out.d);
  for (int i = 0; i < a.d; ++i)
    for (int j = 0; j < b.d; ++j)
      out.A[i * b.d + j] = Eigen::kroneckerProduct(a.A[i], b.A[j]).eval();
  return out;
}

Eigen::VectorXcd contract_umps_ring(const UniformMPS& mps, int N) {
  require_shape(mps);
  if (N < 1) throw Error(errc::dimension_mismatch, "ring needs at least one site");
  long long total = 1;
  for (int j = 0; j < N; ++j) {
    if (__builtin_mul_overflow(total, static_cast<long long>(mps.d), &total) ||
        total > (1LL << 26))
      throw Error(errc::cap_exceeded, "ring contraction too large");
  }
  Eigen::VectorXcd amp(total);
  // prefix[j] = A^{i_0} ... A^{i_{j-1}}, refreshed from the lowest changed digit
  std::vector<Eigen::MatrixXcd> prefix(N + 1);
  prefix[0] = Eigen::MatrixXcd::Identity(mps.D, mps.D);
  std::vector<int> idx(N, 0);
  for (int j = 0; j < N; ++j) prefix[j + 1] = prefix[j] * mps.A[0];
  long long flat = 0;
  while (true) {
    amp(flat) = prefix[N].trace();
    int j = N - 1;
    while (j >= 0 && idx[j] == mps.d - 1) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
    for (int k = j; k < N; ++k) prefix[k + 1] = prefix[k] * mps.A[idx[k]];
    ++flat;
  }
  return amp;
}

TransferSpectrum transfer_spectrum(const UniformMPS& mps) {
  require_shape(mps);
  const long long DD = static_cast<long long>(mps.D) * mps.D;
  TransferSpectrum out;
  if (DD == 1) {
    std::complex<double> l = 0.0;
    for (const auto& a : mps.A) l += a(0, 0) * std::conj(a(0, 0));
    out.lambda1 = l;
    out.lambda2 = 0.0;
    out.gap = std::abs(l);
    out.fixed_point = Eigen::MatrixXcd::Ones(1, 1);
    return out;
  }
  const Eigen::MatrixXcd t = transfer_matrix(mps);
  Eigen::VectorXcd v1;
  if (mps.D <= 8) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(t);
    std::vector<int> order(DD);
    for (long long i = 0; i < DD; ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return std::abs(eig.eigenvalues()(x)) > std::abs(eig.eigenvalues()(y));
    });
    out.lambda1 = eig.eigenvalues()(order[0]);
    out.lambda2 = eig.eigenvalues()(order[1]);
    v1 = eig.eigenvectors().col(order[0]);
  } else {
    // two-vector subspace iteration
    Rng rng(0x5bd1e995u);
    Eigen::MatrixXcd q(DD, 2);
    for (long long i = 0; i < DD; ++i)
      for (int k = 0; k < 2; ++k) q(i, k) = rng.cnormal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(q);
    q = qr.householderQ() * Eigen::MatrixXcd::Identity(DD, 2);
    Eigen::MatrixXcd prev = q;
    int it = 0;
    for (; it < 10000; ++it) {
      Eigen::MatrixXcd z = t * q;
      Eigen::HouseholderQR<Eigen::MatrixXcd> step(z);
      q = step.householderQ() * Eigen::MatrixXcd::Identity(DD, 2);
      const double drift = (q * (q.adjoint() * prev) - prev).norm();
      prev = q;
      if (drift < 1e-12) break;
    }
    const Eigen::MatrixXcd b = q.adjoint() * (t * q);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(b);
    int hi = std::abs(eig.eigenvalues()(0)) >= std::abs(eig.eigenvalues()(1)) ? 0 : 1;
    out.lambda1 = eig.eigenvalues()(hi);
    out.lambda2 = eig.eigenvalues()(1 - hi);
    v1 = q * eig.eigenvectors().col(hi);
  }
  out.gap = std::abs(out.lambda1) - std::abs(out.lambda2);
  Eigen::MatrixXcd fp = Eigen::Map<Eigen::MatrixXcd>(v1.data(), mps.D, mps.D);
  // fix the overall phase from the largest entry
  long long r = 0, c = 0;
  fp.cwiseAbs().maxCoeff(&r, &c);
  const std::complex<double> piv = fp(r, c);
  fp *= std::conj(piv) / (std::abs(piv) * fp.norm());
  out.fixed_point = fp;
  return out;
}

}  // namespace spt
