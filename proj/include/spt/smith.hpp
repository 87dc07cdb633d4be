#pragma once

#include <optional>
#include <vector>

namespace spt {

// Dense row-major int64 matrix. Sized for the cohomology computations in
// this project (thousands of rows, hundreds of columns), not general use.
struct IntMat {
  int rows = 0, cols = 0;
  std::vector<long long> a;

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
  static IntMat identity(int n);

  long long& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  long long at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

IntMat mat_mul(const IntMat& x, const IntMat& y);
std::vector<long long> mat_apply(const IntMat& x, const std::vector<long long>& v);

// Which unimodular transforms to accumulate. The cocycle-condition matrix
// has n^3 rows; skipping its row transforms keeps memory sane.
struct SmithTrack {
  bool u = false, uinv = false, v = false, vinv = false;
};

// u * input * v = d with d diagonal, entries >= 0, d[i] divides d[i+1].
struct SmithResult {
  IntMat d;
  IntMat u, uinv, v, vinv;      // empty unless tracked
  std::vector<long long> diag;  // length min(rows, cols)
  int rank = 0;                 // nonzero diagonal count
};

// Throws Error{integer_overflow} if an intermediate leaves int64 range.
SmithResult smith_normal_form(IntMat m, SmithTrack track = {});

// One solution x with entries in [0, mod) of a*x = b (mod mod), if any.
std::optional<std::vector<long long>> solve_mod(const IntMat& a, const std::vector<long long>& b,
                                                long long mod);

// Inverse of a modulo m; requires gcd(a, m) = 1.
long long mod_inverse(long long a, long long m);

}  // namespace spt
