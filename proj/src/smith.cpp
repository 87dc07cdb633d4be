#include "spt/smith.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "spt/error.hpp"

namespace spt {

namespace {

long long ck_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(errc::integer_overflow, "int64 overflow in exact linear algebra");
  return r;
}

long long ck_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(errc::integer_overflow, "int64 overflow in exact linear algebra");
  return r;
}

// Elementary row/column operations on m with mirrored updates of the
// tracked transforms. Invariant throughout: u*input*v = m, uinv = u^-1,
// vinv = v^-1.
struct Ops {
  IntMat& m;
  SmithResult& r;
  SmithTrack tr;

  void row_swap(int i, int j) {
    if (i == j) return;
    swap_rows(m, i, j);
    if (tr.u) swap_rows(r.u, i, j);
    if (tr.uinv) swap_cols(r.uinv, i, j);
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    swap_cols(m, i, j);
    if (tr.v) swap_cols(r.v, i, j);
    if (tr.vinv) swap_rows(r.vinv, i, j);
  }
  void row_negate(int i) {
    negate_row(m, i);
    if (tr.u) negate_row(r.u, i);
    if (tr.uinv) negate_col(r.uinv, i);
  }
  void col_negate(int j) {
    negate_col(m, j);
    if (tr.v) negate_col(r.v, j);
    if (tr.vinv) negate_row(r.vinv, j);
  }
  // row dst += k * row src
  void row_axpy(int dst, int src, long long k) {
    if (k == 0) return;
    axpy_row(m, dst, src, k);
    if (tr.u) axpy_row(r.u, dst, src, k);
    if (tr.uinv) axpy_col(r.uinv, src, dst, -k);  // col src -= k * col dst
  }
  // col dst += k * col src
  void col_axpy(int dst, int src, long long k) {
    if (k == 0) return;
    axpy_col(m, dst, src, k);
    if (tr.v) axpy_col(r.v, dst, src, k);
    if (tr.vinv) axpy_row(r.vinv, src, dst, -k);  // row src -= k * row dst
  }

  static void swap_rows(IntMat& x, int i, int j) {
    for (int c = 0; c < x.cols; ++c) std::swap(x.at(i, c), x.at(j, c));
  }
  static void swap_cols(IntMat& x, int i, int j) {
    for (int rr = 0; rr < x.rows; ++rr) std::swap(x.at(rr, i), x.at(rr, j));
  }
  static void negate_row(IntMat& x, int i) {
    for (int c = 0; c < x.cols; ++c) x.at(i, c) = -x.at(i, c);
  }
  static void negate_col(IntMat& x, int j) {
    for (int rr = 0; rr < x.rows; ++rr) x.at(rr, j) = -x.at(rr, j);
  }
  static void axpy_row(IntMat& x, int dst, int src, long long k) {
    for (int c = 0; c < x.cols; ++c) x.at(dst, c) = ck_add(x.at(dst, c), ck_mul(k, x.at(src, c)));
  }
  static void axpy_col(IntMat& x, int dst, int src, long long k) {
    for (int rr = 0; rr < x.rows; ++rr) x.at(rr, dst) = ck_add(x.at(rr, dst), ck_mul(k, x.at(rr, src)));
  }
};

}  // namespace

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMat mat_mul(const IntMat& x, const IntMat& y) {
  if (x.cols != y.rows) throw Error(errc::dimension_mismatch, "matrix product shape mismatch");
  IntMat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const long long v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) = ck_add(z.at(i, j), ck_mul(v, y.at(k, j)));
    }
  return z;
}

std::vector<long long> mat_apply(const IntMat& x, const std::vector<long long>& v) {
  if (x.cols != static_cast<int>(v.size()))
    throw Error(errc::dimension_mismatch, "matrix-vector shape mismatch");
  std::vector<long long> out(x.rows, 0);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) out[i] = ck_add(out[i], ck_mul(x.at(i, j), v[j]));
  return out;
}

SmithResult smith_normal_form(IntMat m, SmithTrack track) {
  SmithResult res;
  const int R = m.rows, C = m.cols;
  if (track.u) res.u = IntMat::identity(R);
  if (track.uinv) res.uinv = IntMat::identity(R);
  if (track.v) res.v = IntMat::identity(C);
  if (track.vinv) res.vinv = IntMat::identity(C);
  Ops ops{m, res, track};

  const int tmax = std::min(R, C);
  for (int t = 0; t < tmax; ++t) {
    // smallest-magnitude pivot in the trailing submatrix
    int pi = -1, pj = -1;
    long long best = 0;
    for (int i = t; i < R; ++i)
      for (int j = t; j < C; ++j) {
        const long long v = std::llabs(m.at(i, j));
        if (v != 0 && (pi < 0 || v < best)) { pi = i; pj = j; best = v; }
      }
    if (pi < 0) break;
    ops.row_swap(t, pi);
    ops.col_swap(t, pj);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = t + 1; i < R; ++i) {
        while (m.at(i, t) != 0) {
          const long long q = m.at(i, t) / m.at(t, t);
          ops.row_axpy(i, t, -q);
          if (m.at(i, t) != 0) ops.row_swap(t, i);  // Euclid step, pivot shrinks
        }
      }
      for (int j = t + 1; j < C; ++j) {
        while (m.at(t, j) != 0) {
          const long long q = m.at(t, j) / m.at(t, t);
          ops.col_axpy(j, t, -q);
          if (m.at(t, j) != 0) { ops.col_swap(t, j); dirty = true; }
        }
      }
      if (!dirty) {
        // pivot must divide the rest of the submatrix for the chain property
        const long long p = m.at(t, t);
        for (int i = t + 1; i < R && !dirty; ++i)
          for (int j = t + 1; j < C; ++j)
            if (m.at(i, j) % p != 0) {
              ops.row_axpy(t, i, 1);
              dirty = true;
              break;
            }
      }
    }
    if (m.at(t, t) < 0) ops.col_negate(t);
  }

  res.diag.resize(tmax);
  res.rank = 0;
  for (int i = 0; i < tmax; ++i) {
    res.diag[i] = m.at(i, i);
    if (res.diag[i] != 0) ++res.rank;
  }
  res.d = std::move(m);
  return res;
}

long long mod_inverse(long long a, long long m) {
  long long r0 = m, r1 = ((a % m) + m) % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const long long q = r0 / r1;
    r0 -= q * r1; std::swap(r0, r1);
    s0 -= q * s1; std::swap(s0, s1);
  }
  if (r0 != 1) throw Error(errc::integer_overflow, "not invertible modulo m");
  return ((s0 % m) + m) % m;
}

std::optional<std::vector<long long>> solve_mod(const IntMat& a, const std::vector<long long>& b,
                                                long long mod) {
  if (a.rows != static_cast<int>(b.size()))
    throw Error(errc::dimension_mismatch, "solve_mod shape mismatch");
  SmithResult s = smith_normal_form(a, SmithTrack{true, false, true, false});
  std::vector<long long> c = mat_apply(s.u, b);
  const int tmax = static_cast<int>(s.diag.size());
  std::vector<long long> y(a.cols, 0);
  auto residue = [mod](long long x) { return ((x % mod) + mod) % mod; };
  for (int i = 0; i < a.rows; ++i) {
    const long long ci = residue(c[i]);
    if (i >= tmax || s.diag[i] == 0) {
      if (ci != 0) return std::nullopt;
      continue;
    }
    const long long d = s.diag[i];
    const long long g = std::gcd(d, mod);
    if (ci % g != 0) return std::nullopt;
    const long long m2 = mod / g;
    y[i] = ck_mul(ci / g, mod_inverse(d / g, m2)) % m2;
  }
  std::vector<long long> x = mat_apply(s.v, y);
  for (auto& xi : x) xi = residue(xi);
  return x;
}

}  // namespace spt
