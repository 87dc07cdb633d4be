#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "spt/cocycle.hpp"
#include "spt/group.hpp"

namespace spt {

// Unitaries Q(g) with Q(g)Q(h) = nu(g,h) Q(gh). The stored cocycle is exact
// for the explicit constructors below and float when inferred numerically.
struct ProjectiveRep {
  FiniteGroup group;
  int dim = 0;
  std::vector<Eigen::MatrixXcd> mats;
  Cocycle2 cocycle;

  const Eigen::MatrixXcd& q(int g) const { return mats[g]; }
};

// nu(g,h) = tr(Q(gh)^dag Q(g) Q(h)) / D. Requires every Q(g)Q(h)Q(gh)^dag to
// be scalar within tol, else Error{not_projective_rep} naming the pair.
Cocycle2 cocycle_of_rep(const FiniteGroup& g, const std::vector<Eigen::MatrixXcd>& mats,
                        double tol = 1e-9);

// Validates unitarity (1e-10) and the projective relation (1e-9). When a
// cocycle is supplied it is trusted after verification; otherwise inferred.
ProjectiveRep make_projective_rep(FiniteGroup g, std::vector<Eigen::MatrixXcd> mats,
                                  std::optional<Cocycle2> cocycle = std::nullopt);

// Z_n x Z_n rep of dimension n: Q((j,k)) = shift^j (clock^q)^k, cocycle
// omega^(q k j'), pairing beta((1,0),(0,1)) = exp(-2 pi i q / n).
ProjectiveRep clock_shift_rep(int n, int q);

// Dimension-|G| rep (Q(g))_{h,h'} = nu(g,h') [h = g h']; realizes nu exactly.
// Input must be gauge-normalized.
ProjectiveRep twisted_regular_rep(const Cocycle2& nu);

ProjectiveRep dual_rep(const ProjectiveRep& r);
ProjectiveRep tensor_rep(const ProjectiveRep& a, const ProjectiveRep& b);

// dim-d identity matrices with the trivial cocycle
ProjectiveRep trivial_rep(const FiniteGroup& g, int dim = 1);

// commutant dimension 1, via the nullspace of the stacked twirl conditions
bool is_irreducible(const ProjectiveRep& r);

}  // namespace spt
