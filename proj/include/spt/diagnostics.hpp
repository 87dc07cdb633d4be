#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spt/chain.hpp"

namespace spt {

// All entropies use the natural logarithm; weights below 1e-14 are dropped.
double spectrum_entropy(const std::vector<double>& spectrum);
double entanglement_entropy(const DenseState& psi, const Arc& side);
double density_entropy(const Eigen::MatrixXcd& rho);

// 0.5 || rho1 - rho2 ||_1
double trace_distance(const Eigen::MatrixXcd& rho1, const Eigen::MatrixXcd& rho2);
// || sqrt(rho1) sqrt(rho2) ||_1
double fidelity(const Eigen::MatrixXcd& rho1, const Eigen::MatrixXcd& rho2);

// 1 - F <= T <= sqrt(1 - F^2)
struct FidelityDistanceBounds {
  double lower = 0.0, upper = 0.0;
  bool ok = false;
};
FidelityDistanceBounds fidelity_distance_bounds(double t, double f);

// 2 T log d + eta(2T), eta(x) = -x log x; applicable for 0 < T <= 1/(2e)
std::optional<double> entropy_continuity_bound(double t, long long dim);

double mutual_information(const DenseState& psi, const std::vector<int>& region_a,
                          const std::vector<int>& region_b);

// || rho_AB - rho_A (x) rho_B ||_1 <= sqrt(2 I(A:B))
struct CorrelationBound {
  double mutual_info = 0.0;
  double distance = 0.0;
  double bound = 0.0;
  bool ok = false;
};
CorrelationBound correlation_bound_check(const DenseState& psi, const std::vector<int>& region_a,
                                         const std::vector<int>& region_b);

// sum of spectrum[k:], so tail(0) is the full weight
double schmidt_tail(const std::vector<double>& spectrum, int k);

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

}  // namespace spt
