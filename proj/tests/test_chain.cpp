#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "spt/chain.hpp"
#include "spt/diagnostics.hpp"
#include "spt/error.hpp"
#include "spt/mps.hpp"
#include "spt/projective.hpp"

using namespace spt;
using cd = std::complex<double>;

namespace {

SiteSpec pair_spec(const ProjectiveRep& rho, int N) {
  std::vector<Eigen::MatrixXcd> site(rho.group.n);
  for (int g = 0; g < rho.group.n; ++g)
    site[g] = Eigen::kroneckerProduct(rho.q(g), rho.q(g).conjugate()).eval();
  return uniform_site_spec(rho.group, N, rho.dim * rho.dim, site);
}

Eigen::VectorXcd bond_pair_vector(int D) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(D * D);
  for (int m = 0; m < D; ++m) v(m * D + m) = 1.0;
  return v / std::sqrt(double(D));
}

}  // namespace

TEST_CASE("entangled pair ring is exactly invariant") {
  for (int N : {3, 4}) {
    const ProjectiveRep rho = clock_shift_rep(2, 1);
    const DenseState psi = build_eps_dense(rho, N);
    CHECK(std::abs(psi.amp.norm() - 1.0) < 1e-12);
    for (int g = 0; g < rho.group.n; ++g)
      CHECK(std::abs(overlap(psi, apply_symmetry(psi, g)) - cd(1, 0)) < 1e-12);
  }
}

TEST_CASE("pair ring cut spectrum is flat at one over bond dim squared") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  const DenseState psi = build_eps_dense(rho, 4);
  const auto spec = schmidt_spectrum(psi, Arc{0, 2});
  REQUIRE(spec.size() >= 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(spec[i] - 0.25) < 1e-12);
  for (std::size_t i = 4; i < spec.size(); ++i) CHECK(spec[i] < 1e-12);
  CHECK(std::abs(entanglement_entropy(psi, Arc{0, 2}) - 2.0 * std::log(2.0)) < 1e-9);
}

TEST_CASE("pair ring single site is maximally mixed") {
  const ProjectiveRep rho = clock_shift_rep(3, 1);
  const DenseState psi = build_eps_dense(rho, 3);
  const Eigen::MatrixXcd r1 = reduced_density(psi, {1});
  CHECK((r1 - Eigen::MatrixXcd::Identity(9, 9) / 9.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ring contraction of the uniform tensor matches the dense build") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  for (int N : {2, 3, 4}) {
    const DenseState psi = build_eps_dense(rho, N);
    Eigen::VectorXcd raw = contract_umps_ring(build_eps_mps(rho), N);
    raw.normalize();
    CHECK(std::abs(std::abs(psi.amp.dot(raw)) - 1.0) < 1e-12);
  }
}

TEST_CASE("transfer spectrum of the pair tensor collapses to rank one") {
  const TransferSpectrum ts = transfer_spectrum(build_eps_mps(clock_shift_rep(3, 1)));
  CHECK(std::abs(ts.lambda1 - cd(1, 0)) < 1e-12);
  CHECK(std::abs(ts.lambda2) < 1e-12);
  CHECK(ts.gap > 0.99);
  // fixed point proportional to the identity
  Eigen::MatrixXcd fp = ts.fixed_point / ts.fixed_point(0, 0);
  CHECK((fp - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("product of bond-pair vectors reports full invariance") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  const SiteSpec spec = pair_spec(rho, 4);
  ProductReport rep;
  const DenseState psi = build_product_state(
      spec, std::vector<Eigen::VectorXcd>(4, bond_pair_vector(2)), &rep);
  CHECK(rep.max_character_residual < 1e-12);
  for (int g = 0; g < spec.group.n; ++g) {
    CHECK(rep.invariant[g]);
    CHECK(std::abs(overlap(psi, apply_symmetry(psi, g)) - cd(1, 0)) < 1e-12);
  }
}

TEST_CASE("a bare basis vector is not a character vector") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  const SiteSpec spec = pair_spec(rho, 3);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(1) = 1.0;  // e_0 (x) e_1, shuffled by the swap part of the site action
  ProductReport rep;
  build_product_state(spec, std::vector<Eigen::VectorXcd>(3, v), &rep);
  CHECK(rep.max_character_residual > 0.5);
  bool all_char = true;
  for (bool b : rep.site_is_character) all_char = all_char && b;
  CHECK_FALSE(all_char);
}

TEST_CASE("window gather and scatter are mutually inverse") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  const DenseState psi = build_eps_dense(rho, 4);
  for (const std::vector<int>& sites :
       {std::vector<int>{1, 2}, std::vector<int>{3, 0}, std::vector<int>{2}}) {
    const WindowIndexer ix(psi.spec, sites);
    const Eigen::VectorXcd back = scatter(ix, gather(psi, ix));
    CHECK((back - psi.amp).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("partial symmetry application composes to the whole ring") {
  const ProjectiveRep rho = clock_shift_rep(3, 1);
  const DenseState psi = build_eps_dense(rho, 3);
  const int g = 4;
  const DenseState halves =
      apply_symmetry(apply_symmetry(psi, g, Arc{0, 2}), g, Arc{2, 1});
  const DenseState whole = apply_symmetry(psi, g);
  CHECK((halves.amp - whole.amp).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gates must be unitary and preserve the norm") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  const DenseState psi = build_eps_dense(rho, 4);
  const Eigen::MatrixXcd good = Eigen::MatrixXcd::Identity(16, 16);
  CHECK(std::abs(apply_gate(psi, good, Arc{1, 2}).amp.norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(apply_gate(psi, 1.5 * good, Arc{1, 2}), Error);
}

TEST_CASE("cross operator against itself is the reduced density") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  const DenseState psi = build_eps_dense(rho, 4);
  const std::vector<int> win{0, 1};
  const Eigen::MatrixXcd x = cross_operator(psi, psi, win);
  const Eigen::MatrixXcd r = reduced_density(psi, win);
  CHECK((x - r).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("truncation keeps the arc density and pins the far complement") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  const DenseState psi = build_eps_dense(rho, 5);
  const Arc arc{1, 2};
  const DenseState small = truncate_state(psi, arc);
  REQUIRE(small.spec.N == psi.spec.N);
  const Eigen::MatrixXcd a = reduced_density(psi, arc.sites(5));
  const Eigen::MatrixXcd b = reduced_density(small, arc.sites(5));
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(small.amp.norm() - 1.0) < 1e-10);
  // arc rank is 4, ancilla {3} covers it partially, {3,4} fully; site 0 stays pure
  const Eigen::MatrixXcd far = reduced_density(small, {0});
  CHECK(std::abs((far * far).trace().real() - 1.0) < 1e-9);
}

TEST_CASE("states must arrive normalized") {
  const ProjectiveRep rho = clock_shift_rep(2, 1);
  const SiteSpec spec = pair_spec(rho, 2);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(16);
  amp(0) = 2.0;
  CHECK_THROWS_AS(make_dense_state(spec, amp), Error);
}

TEST_CASE("site specs reject non-representations") {
  const FiniteGroup g = cyclic_group(2);
  std::vector<Eigen::MatrixXcd> bad{Eigen::MatrixXcd::Identity(2, 2),
                                    Eigen::MatrixXcd::Identity(2, 2)};
  bad[1](0, 0) = 0.0;  // breaks unitarity
  CHECK_THROWS_AS(uniform_site_spec(g, 2, 2, bad), Error);
}

TEST_CASE("amplitude cap is enforced") {
  const ProjectiveRep rho = clock_shift_rep(4, 1);  // site dim 16
  CHECK_THROWS_AS(build_eps_dense(rho, 12), Error);
  try {
    build_eps_dense(rho, 12);
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == errc::cap_exceeded);
  }
}
