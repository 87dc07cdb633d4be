#include <climits>
#include <vector>

#include "doctest.h"
#include "spt/error.hpp"
#include "spt/smith.hpp"

using namespace spt;

namespace {
IntMat from_rows(int r, int c, std::vector<long long> v) {
  IntMat m(r, c);
  m.a = std::move(v);
  return m;
}
}  // namespace

TEST_CASE("smith form of a 2x2 with known invariant factors") {
  const IntMat m = from_rows(2, 2, {2, 4, 6, 8});
  const SmithResult s = smith_normal_form(m, SmithTrack{true, true, true, true});
  REQUIRE(s.rank == 2);
  CHECK(s.diag == std::vector<long long>{2, 4});
  // u m v = d and the tracked inverses really invert
  const IntMat umv = mat_mul(mat_mul(s.u, m), s.v);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(umv.at(i, j) == s.d.at(i, j));
  const IntMat uu = mat_mul(s.u, s.uinv);
  const IntMat vv = mat_mul(s.v, s.vinv);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(uu.at(i, j) == (i == j ? 1 : 0));
      CHECK(vv.at(i, j) == (i == j ? 1 : 0));
    }
}

TEST_CASE("divisibility chain on a rectangular matrix") {
  const IntMat m = from_rows(3, 2, {2, 0, 0, 6, 4, 4});
  const SmithResult s = smith_normal_form(m);
  REQUIRE(s.rank == 2);
  CHECK(s.diag[0] > 0);
  CHECK(s.diag[1] % s.diag[0] == 0);
}

TEST_CASE("rank deficiency shows as zero factors") {
  const IntMat m = from_rows(2, 2, {1, 2, 2, 4});
  const SmithResult s = smith_normal_form(m);
  CHECK(s.rank == 1);
  CHECK(s.diag == std::vector<long long>{1, 0});
}

TEST_CASE("identity is its own smith form") {
  const SmithResult s = smith_normal_form(IntMat::identity(4));
  CHECK(s.rank == 4);
  CHECK(s.diag == std::vector<long long>{1, 1, 1, 1});
}

TEST_CASE("modular solve finds a witness when one exists") {
  const IntMat a = from_rows(2, 2, {2, 0, 0, 3});
  const auto x = solve_mod(a, {4, 3}, 6);
  REQUIRE(x.has_value());
  for (int r = 0; r < 2; ++r) {
    long long acc = 0;
    for (int c = 0; c < 2; ++c) acc += a.at(r, c) * (*x)[c];
    CHECK(((acc - (r == 0 ? 4 : 3)) % 6 + 6) % 6 == 0);
  }
}

TEST_CASE("modular solve reports the unsolvable case") {
  const IntMat a = from_rows(1, 1, {2});
  CHECK_FALSE(solve_mod(a, {3}, 6).has_value());
  CHECK(solve_mod(a, {4}, 6).has_value());
}

TEST_CASE("inverse mod a prime") {
  CHECK(mod_inverse(3, 7) == 5);
  CHECK(mod_inverse(1, 2) == 1);
}

TEST_CASE("products that cannot fit flag overflow") {
  const IntMat a = from_rows(1, 1, {LLONG_MAX / 2});
  CHECK_THROWS_AS(mat_mul(a, a), Error);
  try {
    mat_mul(a, a);
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == errc::integer_overflow);
  }
}
