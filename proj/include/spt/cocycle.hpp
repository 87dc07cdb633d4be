#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "spt/group.hpp"

namespace spt {

enum class PhaseMode { Exact, Float };

// U(1)-valued 2-cochain table on G x G. Exact mode stores numerators k with
// a shared denominator, value(g,h) = exp(2*pi*i*k/den); float mode stores
// unit-modulus complex entries. Classification only ever happens in exact
// mode; floats cross over via snap_to_roots.
struct Cocycle2 {
  FiniteGroup group;
  PhaseMode mode = PhaseMode::Exact;
  long long den = 1;
  std::vector<long long> num;  // n*n row-major, residues in [0, den)
  Eigen::MatrixXcd vals;       // float mode only, n x n

  long long num_at(int g, int h) const { return num[static_cast<std::size_t>(g) * group.n + h]; }
  std::complex<double> value(int g, int h) const;

  static Cocycle2 trivial(const FiniteGroup& g);
  static Cocycle2 exact(FiniteGroup g, long long den, std::vector<long long> num);
  static Cocycle2 from_floats(FiniteGroup g, Eigen::MatrixXcd vals);  // unit modulus to 1e-12
  Cocycle2 to_float() const;
};

// U(1)-valued 1-cochain, same dual representation.
struct Cochain1 {
  FiniteGroup group;
  PhaseMode mode = PhaseMode::Exact;
  long long den = 1;
  std::vector<long long> num;  // length n
  Eigen::VectorXcd vals;

  std::complex<double> value(int g) const;
  static Cochain1 exact(FiniteGroup g, long long den, std::vector<long long> num);
  static Cochain1 from_floats(FiniteGroup g, Eigen::VectorXcd vals);
};

struct CocycleCheck {
  bool ok = false;
  double residual = 0.0;        // max over triples of |v(g,h)v(gh,k) - v(h,k)v(g,hk)|
  std::array<int, 3> worst{0, 0, 0};
};

CocycleCheck check_cocycle(const Cocycle2& nu, double tol = 1e-9);

// Divides out nu(e,e) so that nu(e,.) = nu(.,e) = 1. Idempotent, class-preserving.
Cocycle2 normalize_gauge(const Cocycle2& nu);

// Pointwise product. Exact+exact stays exact (lcm denominator); a float
// operand promotes the result to float.
Cocycle2 stack(const Cocycle2& a, const Cocycle2& b);

// Entrywise conjugate.
Cocycle2 inverse_cocycle(const Cocycle2& nu);

// nu(g,h) = mu(g) mu(h) mu(gh)^-1; always a cocycle.
Cocycle2 coboundary(const Cochain1& mu);

struct CoboundaryResult {
  bool yes = false;
  std::optional<Cochain1> witness;  // coboundary(witness) == nu when yes
};

// Exact decision over the integers (Smith normal form of the coboundary
// map at denominator M^2, M = lcm(den, |G|)). Float input is snapped to
// |G|-th roots first.
CoboundaryResult is_coboundary(const Cocycle2& nu);

// Canonical invariant of a cocycle class. Stores a representative so that
// equality and products reduce to exact coboundary tests; coords labels the
// class inside the invariant-factor decomposition of H^2 computed at
// modulus lcm(den, |G|). beta is the gauge-invariant antisymmetrized table
// nu(g,h)/nu(h,g), a complete invariant when G is abelian (empty otherwise).
struct CohomologyClass {
  FiniteGroup group;
  long long den = 1;
  std::vector<long long> rep;         // representative numerators, normalized gauge
  std::vector<long long> invariants;  // cyclic factors of H^2, each > 1
  std::vector<long long> coords;      // coords[i] in [0, invariants[i])
  long long beta_den = 1;
  std::vector<long long> beta;        // abelian G only, n*n numerators

  bool is_trivial() const;
  Cocycle2 representative() const;
  CohomologyClass product(const CohomologyClass& o) const;
  CohomologyClass inverse() const;
  bool operator==(const CohomologyClass& o) const;  // exact cohomology test
  std::string label() const;                        // "1" or "(c1,c2,...)"
};

CohomologyClass reduce_to_class(const Cocycle2& nu);

struct H2Result {
  FiniteGroup group;
  long long modulus = 1;              // coefficient roots used (|G|)
  std::vector<long long> invariants;  // cyclic decomposition of H^2
  std::vector<CohomologyClass> classes;
  std::vector<Cocycle2> representatives;  // exact, normalized, one per class
  long long order() const;
};

// Full H^2(G, U(1)) for |G| <= order_bound. Coefficients are restricted to
// |G|-th roots of unity, which every class of a group of order |G| admits.
H2Result enumerate_h2(const FiniteGroup& g, int order_bound = 12);

struct SnapResult {
  Cocycle2 snapped;  // exact mode
  double max_error = 0.0;
};

// Nearest M-th-root table of a float cocycle after gauge normalization.
// Throws Error{snap_failed} carrying the worst entry if any phase is
// farther than tol from every M-th root.
SnapResult snap_to_roots(const Cocycle2& nu, long long M, double tol = 1e-6);

}  // namespace spt
