#include <algorithm>
#include <vector>

#include "doctest.h"
#include "spt/error.hpp"
#include "spt/group.hpp"

using namespace spt;

TEST_CASE("cyclic groups satisfy the axioms") {
  for (int n = 1; n <= 12; ++n) {
    const FiniteGroup g = cyclic_group(n);
    const GroupCheck ck = validate_group(g);
    CHECK(ck.ok);
    CHECK(g.n == n);
    CHECK(g.identity == 0);
    CHECK(is_abelian(g));
    for (int x = 0; x < n; ++x) CHECK(g.mul(x, g.inv(x)) == 0);
  }
}

TEST_CASE("element orders in Z6") {
  const FiniteGroup g = cyclic_group(6);
  const std::vector<int> want{1, 6, 3, 2, 3, 6};
  for (int x = 0; x < 6; ++x) CHECK(element_order(g, x) == want[x]);
}

TEST_CASE("Z2 x Z3 is cyclic of order 6") {
  const FiniteGroup g = direct_product(cyclic_group(2), cyclic_group(3));
  CHECK(g.n == 6);
  CHECK(validate_group(g).ok);
  int max_order = 0;
  for (int x = 0; x < g.n; ++x) max_order = std::max(max_order, element_order(g, x));
  CHECK(max_order == 6);
}

TEST_CASE("dihedral group of the square") {
  const FiniteGroup g = dihedral_group(4);
  CHECK(g.n == 8);
  CHECK(validate_group(g).ok);
  CHECK_FALSE(is_abelian(g));
  CHECK(element_order(g, 1) == 4);   // r
  CHECK(element_order(g, 4) == 2);   // s
  // s r s = r^{-1}
  const int s = 4, r = 1;
  CHECK(g.mul(g.mul(s, r), s) == g.inv(r));
}

TEST_CASE("finalize rejects a broken table") {
  // order 3, row 1 repeats an element: not a bijection
  std::vector<int> bad{0, 1, 2, 1, 1, 0, 2, 0, 1};
  CHECK_THROWS_AS(finalize_group(3, bad), Error);
  try {
    finalize_group(3, bad);
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == errc::invalid_group);
  }
}

TEST_CASE("validate reports the violated axiom") {
  std::vector<int> bad{0, 1, 1, 0};  // 1*1 = 0 ok, but 0 row fine; make identity wrong
  bad = {1, 0, 0, 1};                // row of claimed identity 0 is not the identity map
  FiniteGroup g;
  g.n = 2;
  g.table = bad;
  g.identity = 0;
  g.inverse = {0, 1};
  const GroupCheck ck = validate_group(g);
  CHECK_FALSE(ck.ok);
  CHECK_FALSE(ck.violation.empty());
}

TEST_CASE("identity can be canonicalized away from slot zero") {
  const FiniteGroup z4 = cyclic_group(4);
  // permute elements: p = (0 2), so old element p(i) sits at new index i
  const std::vector<int> p{2, 1, 0, 3};
  std::vector<int> pinv(4);
  for (int i = 0; i < 4; ++i) pinv[p[i]] = i;
  std::vector<int> table(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) table[i * 4 + j] = pinv[z4.mul(p[i], p[j])];
  const FiniteGroup g = canonicalize_identity(pinv[0], 4, table);
  CHECK(g.identity == 0);
  CHECK(validate_group(g).ok);
  std::vector<int> orders;
  for (int x = 0; x < 4; ++x) orders.push_back(element_order(g, x));
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<int>{1, 2, 4, 4});
}

TEST_CASE("direct product carries labels") {
  FiniteGroup a = cyclic_group(2);
  a.labels = {"e", "x"};
  FiniteGroup b = cyclic_group(2);
  b.labels = {"e", "z"};
  const FiniteGroup g = direct_product(a, b);
  REQUIRE(g.labels.size() == 4);
  CHECK(g.labels[3] == "(x,z)");
}
