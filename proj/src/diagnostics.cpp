#include "spt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "spt/error.hpp"

namespace spt {

namespace {

constexpr double kWeightFloor = 1e-14;

std::vector<double> psd_eigenvalues(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols()) throw Error(errc::not_density_matrix, "matrix is not square");
  if ((rho - rho.adjoint()).norm() > 1e-9)
    throw Error(errc::not_density_matrix, "matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
  double tr = 0.0;
  std::vector<double> out(eig.eigenvalues().size());
  for (int i = 0; i < eig.eigenvalues().size(); ++i) {
    const double l = eig.eigenvalues()(i);
    if (l < -1e-10)
      throw Error(errc::not_density_matrix, "negative eigenvalue", std::to_string(l));
    out[i] = std::max(0.0, l);
    tr += out[i];
  }
  if (std::abs(tr - 1.0) > 1e-8)
    throw Error(errc::not_density_matrix, "trace is not one", std::to_string(tr));
  return out;
}

}  // namespace

double spectrum_entropy(const std::vector<double>& spectrum) {
  double s = 0.0;
  for (double l : spectrum)
    if (l > kWeightFloor) s -= l * std::log(l);
  return s;
}

double entanglement_entropy(const DenseState& psi, const Arc& side) {
  return spectrum_entropy(schmidt_spectrum(psi, side));
}

double density_entropy(const Eigen::MatrixXcd& rho) {
  return spectrum_entropy(psd_eigenvalues(rho));
}

double trace_distance(const Eigen::MatrixXcd& rho1, const Eigen::MatrixXcd& rho2) {
  psd_eigenvalues(rho1);
  psd_eigenvalues(rho2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho1 - rho2, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i) s += std::abs(eig.eigenvalues()(i));
  return 0.5 * s;
}

double fidelity(const Eigen::MatrixXcd& rho1, const Eigen::MatrixXcd& rho2) {
  psd_eigenvalues(rho1);
  psd_eigenvalues(rho2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho1);
  Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd sqrt1 =
      eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner(sqrt1 * rho2 * sqrt1,
                                                        Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (int i = 0; i < inner.eigenvalues().size(); ++i)
    f += std::sqrt(std::max(0.0, inner.eigenvalues()(i)));
  return f;
}

FidelityDistanceBounds fidelity_distance_bounds(double t, double f) {
  FidelityDistanceBounds b;
  b.lower = 1.0 - f;
  b.upper = std::sqrt(std::max(0.0, 1.0 - f * f));
  b.ok = t >= b.lower - 1e-9 && t <= b.upper + 1e-9;
  return b;
}

std::optional<double> entropy_continuity_bound(double t, long long dim) {
  constexpr double kHalfInvE = 0.18393972058572116;  // 1/(2e)
  if (t <= 0.0 || t > kHalfInvE || dim < 2) return std::nullopt;
  const double x = 2.0 * t;
  return x * std::log(static_cast<double>(dim)) - x * std::log(x);
}

double mutual_information(const DenseState& psi, const std::vector<int>& region_a,
                          const std::vector<int>& region_b) {
  for (int a : region_a)
    for (int b : region_b)
      if (a == b) throw Error(errc::regions_overlap, "regions share site " + std::to_string(a));
  std::vector<int> both = region_a;
  both.insert(both.end(), region_b.begin(), region_b.end());
  return density_entropy(reduced_density(psi, region_a)) +
         density_entropy(reduced_density(psi, region_b)) -
         density_entropy(reduced_density(psi, both));
}

CorrelationBound correlation_bound_check(const DenseState& psi, const std::vector<int>& region_a,
                                         const std::vector<int>& region_b) {
  CorrelationBound out;
  out.mutual_info = mutual_information(psi, region_a, region_b);
  std::vector<int> both = region_a;
  both.insert(both.end(), region_b.begin(), region_b.end());
  const Eigen::MatrixXcd rho_ab = reduced_density(psi, both);
  const Eigen::MatrixXcd prod = Eigen::kroneckerProduct(reduced_density(psi, region_a),
                                                        reduced_density(psi, region_b));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho_ab - prod, Eigen::EigenvaluesOnly);
  out.distance = 0.0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i) out.distance += std::abs(eig.eigenvalues()(i));
  out.bound = std::sqrt(std::max(0.0, 2.0 * out.mutual_info));
  out.ok = out.distance <= out.bound + 1e-9;
  return out;
}

double schmidt_tail(const std::vector<double>& spectrum, int k) {
  if (k < 0) throw Error(errc::dimension_mismatch, "negative tail index");
  double s = 0.0;
  for (std::size_t i = static_cast<std::size_t>(k); i < spectrum.size(); ++i) s += spectrum[i];
  return s;
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw Error(errc::dimension_mismatch, "csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace spt
