#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spt/chain.hpp"
#include "spt/cocycle.hpp"
#include "spt/group.hpp"
#include "spt/mps.hpp"

namespace spt {

// ---- route 1: virtual symmetry action of a uniform MPS ----

struct VirtualOptions {
  double gap_tol = 1e-8;        // injectivity: 1 - |lambda2| of the transfer map
  double invariance_tol = 1e-8;  // |lambda(T_g)| must sit within this of 1
  double defect_tol = 1e-8;     // composition defect of the virtual unitaries
  double snap_tol = 1e-6;
};

// Solution of R(g) acting on the physical leg = phase * V+ A V on the bond,
// reported in the orientation where V_g V_h = nu(g,h) V_{gh} reproduces the
// state's own cocycle.
struct VirtualAction {
  FiniteGroup group;
  int D = 1;
  std::vector<Eigen::MatrixXcd> V;       // per element, unitary, V_e = I
  std::vector<double> theta;             // pushed-through phase per element
  std::vector<double> lambda_modulus;    // |dominant eigenvalue| of the twisted transfer
  std::vector<double> relation_residual; // worst per-physical-index defect
  double transfer_gap = 0.0;
};

VirtualAction extract_virtual_action(const FiniteGroup& g, const UniformMPS& mps,
                                     const std::vector<Eigen::MatrixXcd>& site_rep,
                                     const VirtualOptions& opt = {});

// nu(g,h) = tr(V_{gh}+ V_g V_h)/D. Throws when the composition defect
// ||V_g V_h - nu V_{gh}|| exceeds tol.
Cocycle2 cocycle_from_virtual(const VirtualAction& va, double tol = 1e-8,
                              double* max_defect = nullptr);

// ---- route 2: windowed wall operators of a dense ring state ----

struct WindowOptions {
  double invariance_tol = 1e-8;  // whole-ring symmetry pre-check
  double guard = 1e-3;           // factorization residual above this aborts
  double snap_tol = 1e-6;
  double iter_tol = 1e-12;
  int max_iter = 1000;
  int attempts = 3;  // restarts of the split iteration before giving up
  std::uint64_t seed = 1;
};

// Best factored approximation U_arc(g)|psi> ~ (VL_g (x) VR_g)|psi> with
// unitaries supported on 2w-site windows straddling the arc endpoints.
struct WallExtraction {
  std::vector<int> left_sites, right_sites;
  std::vector<Eigen::MatrixXcd> VL, VR;  // per element, VL_e = VR_e = I
  std::vector<double> residual;          // r_g = sqrt(2 (1 - |<phi|(VL(x)VR)|psi>|))
  std::vector<double> condition;         // singular value spread of the converged split
  std::vector<int> iterations;
};

WallExtraction extract_walls(const DenseState& psi, const Arc& arc, int w,
                             const WindowOptions& opt = {});

// ---- classification shared by both routes ----

struct ExtractionReport {
  std::string route;    // "virtual" or "window"
  Cocycle2 nu_raw;      // float mode, as measured
  Cocycle2 nu_exact;    // exact table the classification ran on
  CohomologyClass cls;
  bool beta_fallback = false;      // classified through the gauge-invariant
                                   // antisymmetrized table (abelian only)
  double snap_error = 0.0;
  double cocycle_residual = 0.0;   // identity check on the measured table
  double worst_defect = 0.0;       // virtual: composition defect; window: |1 - |value||
  double worst_residual = 0.0;     // virtual: relation residual; window: factorization residual
  double split_condition = 1.0;    // window route diagnostic
  int window = 0;
  Arc arc{0, 0};                   // window route source interval
  std::map<std::string, double> tolerances;  // numeric gates this run enforced
  double seconds = 0.0;
};

ExtractionReport extract_virtual_index(const FiniteGroup& g, const UniformMPS& mps,
                                       const std::vector<Eigen::MatrixXcd>& site_rep,
                                       const VirtualOptions& opt = {});

ExtractionReport extract_window_index(const DenseState& psi, const Arc& arc, int w,
                                      const WindowOptions& opt = {});

// Same-group stacked chain, virtual route on the tensored MPS.
ExtractionReport stacked_virtual_index(const FiniteGroup& g, const UniformMPS& a,
                                       const std::vector<Eigen::MatrixXcd>& rep_a,
                                       const UniformMPS& b,
                                       const std::vector<Eigen::MatrixXcd>& rep_b,
                                       const VirtualOptions& opt = {});

struct RouteComparison {
  bool same_class = false;
  std::optional<Cochain1> witness;  // gauge relating the two exact tables when equal
};

RouteComparison compare_routes(const ExtractionReport& a, const ExtractionReport& b);

}  // namespace spt
