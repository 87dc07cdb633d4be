#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spt {

// Finite group as an explicit multiplication table. Elements are 0..n-1,
// identity is element 0 after canonicalization. Immutable by convention:
// construct through the factories below or the JSON loader.
struct FiniteGroup {
  int n = 0;
  std::vector<int> table;  // n*n row-major, table[g*n+h] = g*h
  int identity = 0;
  std::vector<int> inverse;
  std::vector<std::string> labels;  // optional, size n when present

  int mul(int g, int h) const { return table[static_cast<std::size_t>(g) * n + h]; }
  int inv(int g) const { return inverse[g]; }

  bool operator==(const FiniteGroup& o) const {
    return n == o.n && identity == o.identity && table == o.table;
  }
};

struct GroupCheck {
  bool ok = false;
  std::string violation;  // empty when ok; names the first failed axiom and triple
};

// Axiom scan over all triples. Structural problems (bad sizes, out-of-range
// entries) throw Error{invalid_group}; axiom failures are reported in-band.
GroupCheck validate_group(const FiniteGroup& g);

// Fills inverse[] (and identity) from the table; throws if axioms fail.
FiniteGroup finalize_group(int n, std::vector<int> table, std::vector<std::string> labels = {});

FiniteGroup cyclic_group(int n);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);  // (x,y) -> x*b.n + y
FiniteGroup dihedral_group(int m);  // order 2m; index r^i s^j -> i + m*j

bool is_abelian(const FiniteGroup& g);
int element_order(const FiniteGroup& g, int x);

// Relabels elements so that the identity sits at index 0 (swap permutation).
FiniteGroup canonicalize_identity(int claimed_identity, int n, const std::vector<int>& table,
                                  std::vector<std::string> labels = {});

}  // namespace spt
