#include "spt/cocycle.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>

#include "spt/error.hpp"
#include "spt/smith.hpp"

namespace spt {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

long long residue(long long x, long long m) { return ((x % m) + m) % m; }

long long ck_mul_ll(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(errc::integer_overflow, "int64 overflow in cocycle arithmetic");
  return r;
}

long long lcm_ll(long long a, long long b) {
  return ck_mul_ll(a / std::gcd(a, b), b);
}

// rows are triples (g,h,k), columns pairs (g,h); kernel mod M = cocycles
IntMat cocycle_matrix(const FiniteGroup& G) {
  const int n = G.n, nn = n * n;
  IntMat z(n * nn, nn);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        const int r = (g * n + h) * n + k;
        z.at(r, g * n + h) += 1;
        z.at(r, G.mul(g, h) * n + k) += 1;
        z.at(r, h * n + k) -= 1;
        z.at(r, g * n + G.mul(h, k)) -= 1;
      }
  return z;
}

// (D mu)(g,h) = mu(g) + mu(h) - mu(gh)
IntMat coboundary_matrix(const FiniteGroup& G) {
  const int n = G.n;
  IntMat d(n * n, n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const int r = g * n + h;
      d.at(r, g) += 1;
      d.at(r, h) += 1;
      d.at(r, G.mul(g, h)) -= 1;
    }
  return d;
}

// Everything needed to classify cocycles valued in M-th roots of unity up
// to U(1) coboundaries. The coboundary lattice lives at denominator M^2:
// if d(mu) takes values in M-th roots then mu can be chosen in M^2-th roots
// (mu^M is a character, and exp(G) divides M by construction).
struct H2Context {
  FiniteGroup group;
  long long M = 1;
  int n = 0, nn = 0;
  SmithResult sz;               // of the cocycle matrix, v/vinv tracked
  std::vector<long long> tvec;  // cocycle lattice = sz.v * diag(tvec)
  SmithResult sq;               // of the quotient matrix, u/uinv tracked
  std::vector<long long> dq;    // invariant factors of H^2, chain order
  std::vector<int> nontrivial;  // positions with dq > 1
};

std::shared_ptr<const H2Context> build_context(const FiniteGroup& G, long long M) {
  auto ctx = std::make_shared<H2Context>();
  ctx->group = G;
  ctx->M = M;
  const int n = G.n, nn = n * n;
  ctx->n = n;
  ctx->nn = nn;
  const long long M2 = ck_mul_ll(M, M);

  ctx->sz = smith_normal_form(cocycle_matrix(G), SmithTrack{false, false, true, true});
  ctx->tvec.resize(nn);
  for (int j = 0; j < nn; ++j) {
    const long long s = j < static_cast<int>(ctx->sz.diag.size()) ? ctx->sz.diag[j] : 0;
    ctx->tvec[j] = M / std::gcd(s, M);
  }

  IntMat d = coboundary_matrix(G);
  SmithResult sd = smith_normal_form(d, SmithTrack{false, false, true, false});
  // bu spans {mu : d(mu) = 0 mod M}; its coboundaries, plus full shifts,
  // exhaust the trivial directions at denominator M^2
  IntMat bu = sd.v;
  for (int j = 0; j < n; ++j) {
    const long long s = j < static_cast<int>(sd.diag.size()) ? sd.diag[j] : 0;
    const long long tj = M / std::gcd(s, M);
    for (int i = 0; i < n; ++i) bu.at(i, j) = ck_mul_ll(bu.at(i, j), tj);
  }
  IntMat w = mat_mul(d, bu);

  IntMat e(nn, n + nn);
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < n; ++j) e.at(i, j) = w.at(i, j);
    e.at(i, n + i) = M2;
  }
  // coordinates of the trivial lattice in the cocycle-lattice basis M*v*diag(t)
  IntMat f = mat_mul(ctx->sz.vinv, e);
  for (int i = 0; i < nn; ++i) {
    const long long div = ck_mul_ll(M, ctx->tvec[i]);
    for (int j = 0; j < n + nn; ++j) {
      if (f.at(i, j) % div != 0)
        throw Error(errc::invalid_cocycle, "internal: trivial lattice escapes cocycle lattice");
      f.at(i, j) /= div;
    }
  }
  ctx->sq = smith_normal_form(std::move(f), SmithTrack{true, true, false, false});
  ctx->dq.resize(nn);
  for (int i = 0; i < nn; ++i) {
    const long long di = i < static_cast<int>(ctx->sq.diag.size()) ? ctx->sq.diag[i] : 0;
    if (di < 1) throw Error(errc::invalid_cocycle, "internal: quotient not finite");
    ctx->dq[i] = di;
    if (di > 1) ctx->nontrivial.push_back(i);
  }
  return ctx;
}

std::shared_ptr<const H2Context> context_for(const FiniteGroup& G, long long M) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<int>, long long>, std::shared_ptr<const H2Context>> cache;
  const std::pair<std::vector<int>, long long> key{G.table, M};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto ctx = build_context(G, M);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, ctx).first->second;
}

// class coordinates of a cocycle given by numerators at denominator ctx.M
std::vector<long long> coords_of(const H2Context& ctx, const std::vector<long long>& r) {
  std::vector<long long> x = mat_apply(ctx.sz.vinv, r);
  for (int i = 0; i < ctx.nn; ++i) {
    if (x[i] % ctx.tvec[i] != 0)
      throw Error(errc::invalid_cocycle, "table is not a cocycle at the classification modulus");
    x[i] /= ctx.tvec[i];
  }
  std::vector<long long> cf = mat_apply(ctx.sq.u, x);
  std::vector<long long> out;
  out.reserve(ctx.nontrivial.size());
  for (int idx : ctx.nontrivial) out.push_back(residue(cf[idx], ctx.dq[idx]));
  return out;
}

std::vector<long long> rep_of(const H2Context& ctx, const std::vector<long long>& coords) {
  std::vector<long long> cfull(ctx.nn, 0);
  for (std::size_t i = 0; i < ctx.nontrivial.size(); ++i) cfull[ctx.nontrivial[i]] = coords[i];
  std::vector<long long> z = mat_apply(ctx.sq.uinv, cfull);
  for (int i = 0; i < ctx.nn; ++i) z[i] = ck_mul_ll(z[i], ctx.tvec[i]);
  std::vector<long long> r = mat_apply(ctx.sz.v, z);
  for (auto& v : r) v = residue(v, ctx.M);
  return r;
}

void require_same_group(const FiniteGroup& a, const FiniteGroup& b, const char* what) {
  if (!(a == b)) throw Error(errc::group_mismatch, std::string(what) + " needs matching groups");
}

std::vector<long long> rescale_numerators(const std::vector<long long>& num, long long den,
                                          long long target) {
  if (target % den != 0) throw Error(errc::invalid_cocycle, "denominator does not divide target");
  const long long f = target / den;
  std::vector<long long> out(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) out[i] = residue(ck_mul_ll(num[i], f), target);
  return out;
}

}  // namespace

std::complex<double> Cocycle2::value(int g, int h) const {
  if (mode == PhaseMode::Exact)
    return std::polar(1.0, kTwoPi * static_cast<double>(num_at(g, h)) / static_cast<double>(den));
  return vals(g, h);
}

Cocycle2 Cocycle2::trivial(const FiniteGroup& g) {
  Cocycle2 c;
  c.group = g;
  c.mode = PhaseMode::Exact;
  c.den = 1;
  c.num.assign(static_cast<std::size_t>(g.n) * g.n, 0);
  return c;
}

Cocycle2 Cocycle2::exact(FiniteGroup g, long long den, std::vector<long long> num) {
  if (den < 1) throw Error(errc::invalid_cocycle, "denominator must be positive");
  if (num.size() != static_cast<std::size_t>(g.n) * g.n)
    throw Error(errc::invalid_cocycle, "numerator table has wrong size");
  Cocycle2 c;
  c.group = std::move(g);
  c.mode = PhaseMode::Exact;
  c.den = den;
  for (auto& k : num) k = residue(k, den);
  c.num = std::move(num);
  return c;
}

Cocycle2 Cocycle2::from_floats(FiniteGroup g, Eigen::MatrixXcd v) {
  if (v.rows() != g.n || v.cols() != g.n)
    throw Error(errc::invalid_cocycle, "value table has wrong shape");
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (std::abs(std::abs(v(i, j)) - 1.0) > 1e-12)
        throw Error(errc::invalid_cocycle, "entry is not unit modulus",
                    "(" + std::to_string(i) + "," + std::to_string(j) + ")");
  Cocycle2 c;
  c.group = std::move(g);
  c.mode = PhaseMode::Float;
  c.vals = std::move(v);
  return c;
}

Cocycle2 Cocycle2::to_float() const {
  if (mode == PhaseMode::Float) return *this;
  Eigen::MatrixXcd v(group.n, group.n);
  for (int g = 0; g < group.n; ++g)
    for (int h = 0; h < group.n; ++h) v(g, h) = value(g, h);
  return from_floats(group, std::move(v));
}

std::complex<double> Cochain1::value(int g) const {
  if (mode == PhaseMode::Exact)
    return std::polar(1.0, kTwoPi * static_cast<double>(num[g]) / static_cast<double>(den));
  return vals(g);
}

Cochain1 Cochain1::exact(FiniteGroup g, long long den, std::vector<long long> num) {
  if (den < 1) throw Error(errc::invalid_cocycle, "denominator must be positive");
  if (num.size() != static_cast<std::size_t>(g.n))
    throw Error(errc::invalid_cocycle, "cochain table has wrong size");
  Cochain1 c;
  c.group = std::move(g);
  c.mode = PhaseMode::Exact;
  c.den = den;
  for (auto& k : num) k = residue(k, den);
  c.num = std::move(num);
  return c;
}

Cochain1 Cochain1::from_floats(FiniteGroup g, Eigen::VectorXcd v) {
  if (v.size() != g.n) throw Error(errc::invalid_cocycle, "cochain table has wrong size");
  for (int i = 0; i < g.n; ++i)
    if (std::abs(std::abs(v(i)) - 1.0) > 1e-12)
      throw Error(errc::invalid_cocycle, "entry is not unit modulus", std::to_string(i));
  Cochain1 c;
  c.group = std::move(g);
  c.mode = PhaseMode::Float;
  c.vals = std::move(v);
  return c;
}

CocycleCheck check_cocycle(const Cocycle2& nu, double tol) {
  const FiniteGroup& G = nu.group;
  const int n = G.n;
  CocycleCheck out;
  out.ok = true;
  if (nu.mode == PhaseMode::Exact) {
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k) {
          const long long delta =
              residue(nu.num_at(g, h) + nu.num_at(G.mul(g, h), k) - nu.num_at(h, k) -
                          nu.num_at(g, G.mul(h, k)),
                      nu.den);
          if (delta != 0) {
            const double r = std::abs(std::polar(1.0, kTwoPi * delta / nu.den) - 1.0);
            if (r > out.residual) {
              out.residual = r;
              out.worst = {g, h, k};
            }
            out.ok = false;
          }
        }
    return out;
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        const double r = std::abs(nu.value(g, h) * nu.value(G.mul(g, h), k) -
                                  nu.value(h, k) * nu.value(g, G.mul(h, k)));
        if (r > out.residual) {
          out.residual = r;
          out.worst = {g, h, k};
        }
      }
  out.ok = out.residual <= tol;
  return out;
}

Cocycle2 normalize_gauge(const Cocycle2& nu) {
  const int n = nu.group.n;
  const int e = nu.group.identity;
  Cocycle2 out = nu;
  if (nu.mode == PhaseMode::Exact) {
    const long long c = nu.num_at(e, e);
    for (auto& k : out.num) k = residue(k - c, out.den);
    return out;
  }
  const std::complex<double> c = nu.vals(e, e);
  out.vals /= c;
  for (int g = 0; g < n; ++g) {
    out.vals(e, g) = 1.0;
    out.vals(g, e) = 1.0;
  }
  return out;
}

Cocycle2 stack(const Cocycle2& a, const Cocycle2& b) {
  require_same_group(a.group, b.group, "stack");
  if (a.mode == PhaseMode::Exact && b.mode == PhaseMode::Exact) {
    const long long L = lcm_ll(a.den, b.den);
    std::vector<long long> num(a.num.size());
    const long long fa = L / a.den, fb = L / b.den;
    for (std::size_t i = 0; i < num.size(); ++i)
      num[i] = residue(ck_mul_ll(a.num[i], fa) + ck_mul_ll(b.num[i], fb), L);
    return Cocycle2::exact(a.group, L, std::move(num));
  }
  const Cocycle2 fa = a.to_float(), fb = b.to_float();
  return Cocycle2::from_floats(a.group, fa.vals.cwiseProduct(fb.vals));
}

Cocycle2 inverse_cocycle(const Cocycle2& nu) {
  Cocycle2 out = nu;
  if (nu.mode == PhaseMode::Exact) {
    for (auto& k : out.num) k = residue(-k, out.den);
    return out;
  }
  out.vals = nu.vals.conjugate();
  return out;
}

Cocycle2 coboundary(const Cochain1& mu) {
  const FiniteGroup& G = mu.group;
  const int n = G.n;
  if (mu.mode == PhaseMode::Exact) {
    std::vector<long long> num(static_cast<std::size_t>(n) * n);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        num[static_cast<std::size_t>(g) * n + h] =
            residue(mu.num[g] + mu.num[h] - mu.num[G.mul(g, h)], mu.den);
    return Cocycle2::exact(G, mu.den, std::move(num));
  }
  Eigen::MatrixXcd v(n, n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) v(g, h) = mu.value(g) * mu.value(h) * std::conj(mu.value(G.mul(g, h)));
  return Cocycle2::from_floats(G, std::move(v));
}

CoboundaryResult is_coboundary(const Cocycle2& nu_in) {
  Cocycle2 nu = nu_in.mode == PhaseMode::Float
                    ? snap_to_roots(nu_in, nu_in.group.n).snapped
                    : nu_in;
  const CocycleCheck chk = check_cocycle(nu);
  if (!chk.ok)
    throw Error(errc::invalid_cocycle, "coboundary test requires a cocycle",
                "worst triple (" + std::to_string(chk.worst[0]) + "," + std::to_string(chk.worst[1]) +
                    "," + std::to_string(chk.worst[2]) + ")");
  const FiniteGroup& G = nu.group;
  const long long M = lcm_ll(nu.den, G.n);
  const long long M2 = ck_mul_ll(M, M);
  // d(mu) = nu with mu at denominator M^2; always enough once exp(G) | M
  std::vector<long long> b = rescale_numerators(nu.num, nu.den, M);
  for (auto& x : b) x = ck_mul_ll(x, M);
  auto sol = solve_mod(coboundary_matrix(G), b, M2);
  CoboundaryResult out;
  out.yes = sol.has_value();
  if (sol) {
    Cochain1 w = Cochain1::exact(G, M2, *sol);
    // paranoid verification, cheap at these sizes
    const Cocycle2 back = coboundary(w);
    for (int g = 0; g < G.n; ++g)
      for (int h = 0; h < G.n; ++h)
        if (residue(back.num_at(g, h) - ck_mul_ll(nu.num_at(g, h), M2 / nu.den), M2) != 0)
          throw Error(errc::invalid_cocycle, "internal: coboundary witness fails to reproduce input");
    out.witness = std::move(w);
  }
  return out;
}

bool CohomologyClass::is_trivial() const {
  for (long long c : coords)
    if (c != 0) return false;
  return true;
}

Cocycle2 CohomologyClass::representative() const { return Cocycle2::exact(group, den, rep); }

CohomologyClass CohomologyClass::product(const CohomologyClass& o) const {
  require_same_group(group, o.group, "class product");
  return reduce_to_class(stack(representative(), o.representative()));
}

CohomologyClass CohomologyClass::inverse() const {
  return reduce_to_class(inverse_cocycle(representative()));
}

bool CohomologyClass::operator==(const CohomologyClass& o) const {
  if (!(group == o.group)) return false;
  if (den == o.den && rep == o.rep) return true;
  return is_coboundary(stack(representative(), inverse_cocycle(o.representative()))).yes;
}

std::string CohomologyClass::label() const {
  if (coords.empty() || is_trivial()) return "1";
  std::string s = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coords[i]);
  }
  return s + ")";
}

CohomologyClass reduce_to_class(const Cocycle2& nu_in) {
  Cocycle2 nu = nu_in.mode == PhaseMode::Float
                    ? snap_to_roots(nu_in, nu_in.group.n).snapped
                    : nu_in;
  const CocycleCheck chk = check_cocycle(nu);
  if (!chk.ok) throw Error(errc::invalid_cocycle, "classification requires a cocycle");
  nu = normalize_gauge(nu);
  const FiniteGroup& G = nu.group;
  const long long M = lcm_ll(nu.den, G.n);
  auto ctx = context_for(G, M);
  const std::vector<long long> r = rescale_numerators(nu.num, nu.den, M);

  CohomologyClass cls;
  cls.group = G;
  cls.den = M;
  cls.coords = coords_of(*ctx, r);
  for (int idx : ctx->nontrivial) cls.invariants.push_back(ctx->dq[idx]);
  // canonical representative of the class, not the input table
  const Cocycle2 rep = normalize_gauge(Cocycle2::exact(G, M, rep_of(*ctx, cls.coords)));
  cls.rep = rep.num;
  if (is_abelian(G)) {
    const int n = G.n;
    cls.beta.assign(static_cast<std::size_t>(n) * n, 0);
    long long g = M;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const long long v = residue(rep.num_at(a, b) - rep.num_at(b, a), M);
        cls.beta[static_cast<std::size_t>(a) * n + b] = v;
        g = std::gcd(g, v);
      }
    if (g > 1) {
      for (auto& v : cls.beta) v /= g;
      cls.beta_den = M / g;
    } else {
      cls.beta_den = M;
    }
  }
  return cls;
}

long long H2Result::order() const {
  long long o = 1;
  for (long long d : invariants) o = ck_mul_ll(o, d);
  return o;
}

H2Result enumerate_h2(const FiniteGroup& g, int order_bound) {
  if (g.n > order_bound)
    throw Error(errc::bound_exceeded, "group order exceeds enumeration bound",
                std::to_string(g.n) + " > " + std::to_string(order_bound));
  const long long M = g.n;
  auto ctx = context_for(g, M);
  H2Result res;
  res.group = g;
  res.modulus = M;
  for (int idx : ctx->nontrivial) res.invariants.push_back(ctx->dq[idx]);

  std::vector<long long> coords(res.invariants.size(), 0);
  bool done = false;
  while (!done) {
    Cocycle2 rep = normalize_gauge(Cocycle2::exact(g, M, rep_of(*ctx, coords)));
    const CocycleCheck chk = check_cocycle(rep);
    if (!chk.ok) throw Error(errc::invalid_cocycle, "internal: enumerated representative not a cocycle");
    res.classes.push_back(reduce_to_class(rep));
    if (res.classes.back().coords != coords)
      throw Error(errc::invalid_cocycle, "internal: class coordinates not reproduced");
    res.representatives.push_back(std::move(rep));
    // odometer over the invariant-factor box
    done = true;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (++coords[i] < res.invariants[i]) {
        done = false;
        break;
      }
      coords[i] = 0;
    }
    if (coords.empty()) done = true;
  }
  return res;
}

SnapResult snap_to_roots(const Cocycle2& nu, long long M, double tol) {
  if (M < 1) throw Error(errc::snap_failed, "root order must be positive");
  const Cocycle2 f = normalize_gauge(nu.to_float());
  const int n = f.group.n;
  SnapResult out;
  std::vector<long long> num(static_cast<std::size_t>(n) * n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const double phase = std::arg(f.vals(g, h));
      const long long k = residue(std::llround(phase * static_cast<double>(M) / kTwoPi), M);
      const double err = std::abs(f.vals(g, h) - std::polar(1.0, kTwoPi * k / M));
      if (err > tol)
        throw Error(errc::snap_failed, "entry too far from every root of unity",
                    "entry (" + std::to_string(g) + "," + std::to_string(h) + ") error " +
                        std::to_string(err) + " with M = " + std::to_string(M));
      num[static_cast<std::size_t>(g) * n + h] = k;
      out.max_error = std::max(out.max_error, err);
    }
  out.snapped = Cocycle2::exact(f.group, M, std::move(num));
  const CocycleCheck chk = check_cocycle(out.snapped);
  if (!chk.ok)
    throw Error(errc::snap_failed, "snapped table violates the cocycle identity",
                "worst triple (" + std::to_string(chk.worst[0]) + "," + std::to_string(chk.worst[1]) +
                    "," + std::to_string(chk.worst[2]) + ")");
  return out;
}

}  // namespace spt
