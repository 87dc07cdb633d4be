#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "spt/cocycle.hpp"
#include "spt/error.hpp"
#include "spt/group.hpp"
#include "spt/projective.hpp"
#include "spt/rng.hpp"

using namespace spt;
using cd = std::complex<double>;

namespace {
// element (j,k) of Z_n x Z_n at index j*n + k
int el(int n, int j, int k) { return j * n + k; }
}  // namespace

TEST_CASE("clock and shift matrices compose with the advertised phase") {
  for (int n : {2, 3, 4})
    for (int q = 0; q < n; ++q) {
      const ProjectiveRep r = clock_shift_rep(n, q);
      REQUIRE(r.dim == n);
      const double w = 2.0 * M_PI / n;
      for (int g = 0; g < r.group.n; ++g)
        for (int h = 0; h < r.group.n; ++h) {
          const int k = g % n, jp = h / n;
          const cd want = std::polar(1.0, w * q * k * jp);
          const Eigen::MatrixXcd lhs = r.q(g) * r.q(h);
          const Eigen::MatrixXcd rhs = want * r.q(r.group.mul(g, h));
          CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
          CHECK(std::abs(r.cocycle.value(g, h) - want) < 1e-12);
        }
    }
}

TEST_CASE("the measured commutator phase is oriented") {
  // beta(x-shift, z-clock) must come out as exp(-2 pi i q / n)
  for (int n : {2, 3})
    for (int q = 1; q < n; ++q) {
      const ProjectiveRep r = clock_shift_rep(n, q);
      const int gx = el(n, 1, 0), gz = el(n, 0, 1);
      const cd beta =
          r.cocycle.value(gx, gz) * std::conj(r.cocycle.value(gz, gx));
      CHECK(std::abs(beta - std::polar(1.0, -2.0 * M_PI * q / n)) < 1e-12);
    }
}

TEST_CASE("pauli pair is the n=2 clock shift") {
  const ProjectiveRep r = clock_shift_rep(2, 1);
  Eigen::MatrixXcd x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  CHECK((r.q(el(2, 1, 0)) - x).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((r.q(el(2, 0, 1)) - z).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_FALSE(reduce_to_class(r.cocycle).is_trivial());
}

TEST_CASE("cocycle of a rep matches direct matrix ratios") {
  const ProjectiveRep r = clock_shift_rep(3, 2);
  const Cocycle2 nu = cocycle_of_rep(r.group, r.mats);
  for (int g = 0; g < r.group.n; ++g)
    for (int h = 0; h < r.group.n; ++h)
      CHECK(std::abs(nu.value(g, h) - r.cocycle.value(g, h)) < 1e-10);
}

TEST_CASE("twisted regular rep realizes each enumerated class") {
  for (const FiniteGroup& g : {direct_product(cyclic_group(2), cyclic_group(2)),
                               direct_product(cyclic_group(3), cyclic_group(3))}) {
    const H2Result h2 = enumerate_h2(g);
    for (const auto& c : h2.classes) {
      const ProjectiveRep r = twisted_regular_rep(c.representative());
      CHECK(r.dim == g.n);
      const Cocycle2 nu = cocycle_of_rep(g, r.mats);
      CHECK(reduce_to_class(snap_to_roots(nu, g.n).snapped) == c);
    }
  }
}

TEST_CASE("dual rep inverts the class, tensor multiplies it") {
  const ProjectiveRep r1 = clock_shift_rep(3, 1);
  const ProjectiveRep r2 = clock_shift_rep(3, 2);
  const CohomologyClass c1 = reduce_to_class(r1.cocycle);
  const CohomologyClass c2 = reduce_to_class(r2.cocycle);

  const ProjectiveRep d1 = dual_rep(r1);
  CHECK(reduce_to_class(snap_to_roots(cocycle_of_rep(d1.group, d1.mats), 9).snapped) ==
        c1.inverse());

  const ProjectiveRep t = tensor_rep(r1, r1);
  CHECK(reduce_to_class(snap_to_roots(cocycle_of_rep(t.group, t.mats), 9).snapped) ==
        c1.product(c1));
  CHECK(c1.product(c1) == c2);

  const ProjectiveRep killed = tensor_rep(r1, dual_rep(r1));
  CHECK(reduce_to_class(snap_to_roots(cocycle_of_rep(killed.group, killed.mats), 9).snapped)
            .is_trivial());
}

TEST_CASE("irreducibility is detected through the commutant") {
  CHECK(is_irreducible(clock_shift_rep(2, 1)));
  CHECK(is_irreducible(clock_shift_rep(3, 1)));
  CHECK(is_irreducible(trivial_rep(cyclic_group(3))));
  // untwisted regular rep of an abelian group splits into characters
  const FiniteGroup g = direct_product(cyclic_group(2), cyclic_group(2));
  CHECK_FALSE(is_irreducible(twisted_regular_rep(Cocycle2::trivial(g))));
}

TEST_CASE("matrix families that do not close are rejected") {
  const FiniteGroup g = cyclic_group(2);
  Rng rng(5);
  Eigen::MatrixXcd m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = rng.cnormal();
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  Eigen::MatrixXcd u = qr.householderQ();
  std::vector<Eigen::MatrixXcd> mats{Eigen::MatrixXcd::Identity(2, 2), u};
  // u^2 is generically not proportional to the identity
  CHECK_THROWS_AS(cocycle_of_rep(g, mats), Error);
  try {
    cocycle_of_rep(g, mats);
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == errc::not_projective_rep);
  }
}

TEST_CASE("non-unitary input is refused") {
  const FiniteGroup g = cyclic_group(2);
  std::vector<Eigen::MatrixXcd> mats{Eigen::MatrixXcd::Identity(2, 2),
                                     2.0 * Eigen::MatrixXcd::Identity(2, 2)};
  CHECK_THROWS_AS(make_projective_rep(g, mats), Error);
}
