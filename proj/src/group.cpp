#include "spt/group.hpp"

#include <algorithm>

#include "spt/error.hpp"

namespace spt {

namespace {

void check_structure(int n, const std::vector<int>& table) {
  if (n <= 0) throw Error(errc::invalid_group, "group order must be positive");
  if (table.size() != static_cast<std::size_t>(n) * n)
    throw Error(errc::invalid_group, "multiplication table has wrong size",
                "expected " + std::to_string(n * n) + " entries, got " + std::to_string(table.size()));
  for (int v : table)
    if (v < 0 || v >= n)
      throw Error(errc::invalid_group, "table entry out of range", "entry " + std::to_string(v));
}

std::string triple(int g, int h, int k) {
  return "(" + std::to_string(g) + "," + std::to_string(h) + "," + std::to_string(k) + ")";
}

}  // namespace

GroupCheck validate_group(const FiniteGroup& g) {
  check_structure(g.n, g.table);
  const int n = g.n;
  const int e = g.identity;
  if (e < 0 || e >= n) throw Error(errc::invalid_group, "identity index out of range");

  for (int x = 0; x < n; ++x) {
    if (g.mul(e, x) != x) return {false, "identity fails on left at element " + std::to_string(x)};
    if (g.mul(x, e) != x) return {false, "identity fails on right at element " + std::to_string(x)};
  }
  // inverses: each row and column of the table must contain the identity
  for (int x = 0; x < n; ++x) {
    bool has_inv = false;
    for (int y = 0; y < n; ++y)
      if (g.mul(x, y) == e && g.mul(y, x) == e) { has_inv = true; break; }
    if (!has_inv) return {false, "no two-sided inverse for element " + std::to_string(x)};
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          return {false, "associativity fails at " + triple(a, b, c)};
  return {true, {}};
}

FiniteGroup finalize_group(int n, std::vector<int> table, std::vector<std::string> labels) {
  check_structure(n, table);
  FiniteGroup g;
  g.n = n;
  g.table = std::move(table);
  g.identity = 0;
  g.labels = std::move(labels);
  if (!g.labels.empty() && g.labels.size() != static_cast<std::size_t>(n))
    throw Error(errc::invalid_group, "labels size mismatch");
  GroupCheck chk = validate_group(g);
  if (!chk.ok) throw Error(errc::invalid_group, "group axioms fail: " + chk.violation);
  g.inverse.assign(n, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (g.mul(x, y) == 0 && g.mul(y, x) == 0) { g.inverse[x] = y; break; }
  return g;
}

FiniteGroup cyclic_group(int n) {
  if (n <= 0) throw Error(errc::invalid_group, "cyclic group order must be positive");
  std::vector<int> t(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
  return finalize_group(n, std::move(t));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int n = a.n * b.n;
  std::vector<int> t(static_cast<std::size_t>(n) * n);
  for (int x1 = 0; x1 < a.n; ++x1)
    for (int y1 = 0; y1 < b.n; ++y1)
      for (int x2 = 0; x2 < a.n; ++x2)
        for (int y2 = 0; y2 < b.n; ++y2) {
          const int u = x1 * b.n + y1, v = x2 * b.n + y2;
          t[static_cast<std::size_t>(u) * n + v] = a.mul(x1, x2) * b.n + b.mul(y1, y2);
        }
  std::vector<std::string> labels;
  if (!a.labels.empty() && !b.labels.empty()) {
    labels.reserve(n);
    for (int x = 0; x < a.n; ++x)
      for (int y = 0; y < b.n; ++y) labels.push_back("(" + a.labels[x] + "," + b.labels[y] + ")");
  }
  return finalize_group(n, std::move(t), std::move(labels));
}

FiniteGroup dihedral_group(int m) {
  if (m < 1) throw Error(errc::invalid_group, "dihedral parameter must be >= 1");
  const int n = 2 * m;
  // element (i, j) = r^i s^j, j in {0,1}; s r = r^{-1} s
  auto idx = [m](int i, int j) { return ((i % m) + m) % m + m * j; };
  std::vector<int> t(static_cast<std::size_t>(n) * n);
  for (int i1 = 0; i1 < m; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < m; ++i2)
        for (int j2 = 0; j2 < 2; ++j2) {
          const int i = j1 == 0 ? i1 + i2 : i1 - i2;
          t[static_cast<std::size_t>(idx(i1, j1)) * n + idx(i2, j2)] = idx(i, (j1 + j2) % 2);
        }
  return finalize_group(n, std::move(t));
}

bool is_abelian(const FiniteGroup& g) {
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

int element_order(const FiniteGroup& g, int x) {
  int y = x, k = 1;
  while (y != g.identity) {
    y = g.mul(y, x);
    ++k;
    if (k > g.n) throw Error(errc::invalid_group, "element order exceeds group order");
  }
  return k;
}

FiniteGroup canonicalize_identity(int claimed_identity, int n, const std::vector<int>& table,
                                  std::vector<std::string> labels) {
  check_structure(n, table);
  if (claimed_identity < 0 || claimed_identity >= n)
    throw Error(errc::invalid_group, "identity index out of range");
  auto pi = [&](int x) {
    if (x == claimed_identity) return 0;
    if (x == 0) return claimed_identity;
    return x;
  };
  std::vector<int> t(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      t[static_cast<std::size_t>(pi(a)) * n + pi(b)] = pi(table[static_cast<std::size_t>(a) * n + b]);
  std::vector<std::string> lab;
  if (!labels.empty()) {
    lab.resize(n);
    for (int a = 0; a < n; ++a) lab[pi(a)] = labels[a];
  }
  return finalize_group(n, std::move(t), std::move(lab));
}

}  // namespace spt
