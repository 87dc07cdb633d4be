#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "spt/chain.hpp"
#include "spt/extraction.hpp"

namespace spt {

struct EquivariantGate {
  Arc window;           // contiguous sites the gate acts on
  Eigen::MatrixXcd u;   // window-site-major basis
  double residual = 0.0;  // max over elements of ||U R_win(g) - R_win(g) U||
};

double equivariance_residual(const SiteSpec& spec, const Arc& window,
                             const Eigen::MatrixXcd& u);

// Haar-style draw from the commutant: polar factor of the group-averaged
// Ginibre matrix. Exactly equivariant by construction.
EquivariantGate sample_equivariant_gate(const SiteSpec& spec, const Arc& window,
                                        std::uint64_t seed);

// Alternating even/odd layers of 2-site gates; layer l starts at site l mod 2.
struct BrickworkCircuit {
  int depth = 0;
  std::vector<std::vector<EquivariantGate>> layers;
};

BrickworkCircuit build_brickwork(const SiteSpec& spec, int depth, std::uint64_t seed);

DenseState apply_circuit(const DenseState& psi, const BrickworkCircuit& c);
DenseState apply_circuit_inverse(const DenseState& psi, const BrickworkCircuit& c);

// Wall factorization residual as a function of the window halfwidth,
// profile[w-1] for w = 1..wmax. Guard disabled; callers read the decay.
std::vector<double> wall_leakage_profile(const DenseState& psi, const Arc& arc, int wmax,
                                         WindowOptions opt = {});

// One even+odd round of exactly equivariant 2-site gates turning the
// entangled-pair state of an honestly linear rep into a per-site product.
// The target site-pair vector must be rep-invariant; defaults to the
// normalized invariant vector closest to the pair basis.
struct SwindleResult {
  BrickworkCircuit circuit;  // the disentangler, depth 2
  DenseState output;
  std::vector<double> site_purity;   // tr(rho_j^2) after the circuit
  double invariance_residual = 0.0;  // worst |<out|U_g|out> - 1|
};

SwindleResult swindle_disentangler(const ProjectiveRep& linear, int N,
                                   std::optional<Eigen::VectorXcd> target = std::nullopt);

}  // namespace spt
