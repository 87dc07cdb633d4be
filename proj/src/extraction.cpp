#include "spt/extraction.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <unsupported/Eigen/KroneckerProduct>

#include "spt/error.hpp"
#include "spt/linalg.hpp"
#include "spt/rng.hpp"

namespace spt {

namespace {

std::string elem(const FiniteGroup& g, int x) {
  if (static_cast<int>(g.labels.size()) == g.n) return g.labels[x];
  return std::to_string(x);
}

void require_ordinary_rep(const FiniteGroup& g, const std::vector<Eigen::MatrixXcd>& rep,
                          int d) {
  if (static_cast<int>(rep.size()) != g.n)
    throw Error(errc::dimension_mismatch, "rep must cover every group element");
  for (int x = 0; x < g.n; ++x) {
    if (rep[x].rows() != d || rep[x].cols() != d)
      throw Error(errc::dimension_mismatch, "rep matrix shape mismatch");
    if ((rep[x].adjoint() * rep[x] - Eigen::MatrixXcd::Identity(d, d)).norm() > 1e-10)
      throw Error(errc::non_unitary, "rep matrix is not unitary");
  }
  if ((rep[g.identity] - Eigen::MatrixXcd::Identity(d, d)).norm() > 1e-10)
    throw Error(errc::not_projective_rep, "rep must send the identity to I");
  for (int x = 0; x < g.n; ++x)
    for (int y = 0; y < g.n; ++y)
      if ((rep[x] * rep[y] - rep[g.mul(x, y)]).norm() > 1e-10)
        throw Error(errc::not_projective_rep, "not an ordinary representation");
}

// first column-major entry made real positive
void fix_phase(Eigen::MatrixXcd& m) {
  for (long long c = 0; c < m.cols(); ++c)
    for (long long r = 0; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > 1e-9) {
        m *= std::conj(m(r, c)) / std::abs(m(r, c));
        return;
      }
}

struct Classified {
  Cocycle2 exact;
  CohomologyClass cls;
  bool via_beta = false;
  double snap_error = 0.0;
};

bool same_angle(long long a, long long da, long long b, long long db) {
  const long long m = da * db;
  long long r = (a % da) * db - (b % db) * da;
  r %= m;
  if (r < 0) r += m;
  return r == 0;
}

// Direct entrywise snap first. The measured table carries an arbitrary
// coboundary from the per-element phase gauge of the extracted unitaries,
// which can push entries off the root lattice; in that case the
// antisymmetrized table (gauge invariant, and a complete class invariant
// for abelian G) identifies the class instead.
Classified classify_float(const Cocycle2& nu, double snap_tol) {
  const FiniteGroup& g = nu.group;
  const long long M = g.n;
  try {
    SnapResult s = snap_to_roots(nu, M, snap_tol);
    Classified out;
    out.exact = s.snapped;
    out.cls = reduce_to_class(out.exact);
    out.snap_error = s.max_error;
    return out;
  } catch (const Error& e) {
    if (e.code() != errc::snap_failed || !is_abelian(g)) throw;
  }

  const int n = g.n;
  std::vector<long long> beta_num(static_cast<std::size_t>(n) * n, 0);
  double worst = 0.0;
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const std::complex<double> b = nu.value(x, y) * std::conj(nu.value(y, x));
      long long k = std::llround(std::arg(b) * M / two_pi) % M;
      if (k < 0) k += M;
      const double err = std::abs(b - std::polar(1.0, two_pi * k / M));
      worst = std::max(worst, err);
      if (err > 2 * snap_tol)
        throw Error(errc::snap_failed, "antisymmetrized table is off the root lattice",
                    "(" + elem(g, x) + "," + elem(g, y) + ") error " + std::to_string(err));
      beta_num[static_cast<std::size_t>(x) * n + y] = k;
    }

  const H2Result h2 = enumerate_h2(g, g.n);
  for (const CohomologyClass& c : h2.classes) {
    bool match = true;
    for (int x = 0; x < n && match; ++x)
      for (int y = 0; y < n && match; ++y)
        match = same_angle(beta_num[static_cast<std::size_t>(x) * n + y], M,
                           c.beta[static_cast<std::size_t>(x) * n + y], c.beta_den);
    if (match) {
      Classified out;
      out.cls = c;
      out.exact = c.representative();
      out.via_beta = true;
      out.snap_error = worst;
      return out;
    }
  }
  throw Error(errc::snap_failed, "no class matches the antisymmetrized table");
}

}  // namespace

VirtualAction extract_virtual_action(const FiniteGroup& g, const UniformMPS& mps,
                                     const std::vector<Eigen::MatrixXcd>& site_rep,
                                     const VirtualOptions& opt) {
  const int d = mps.d, D = mps.D;
  if (d < 1 || D < 1 || static_cast<int>(mps.A.size()) != d)
    throw Error(errc::dimension_mismatch, "malformed uniform MPS");
  require_ordinary_rep(g, site_rep, d);
  const long long DD = static_cast<long long>(D) * D;
  if (DD > 256)
    throw Error(errc::cap_exceeded, "bond dimension too large for the virtual route");

  TransferSpectrum ts = transfer_spectrum(mps);
  if (std::abs(ts.lambda1) < 1e-14)
    throw Error(errc::degenerate_transfer, "transfer map has no dominant eigenvalue");
  UniformMPS m = mps;
  const double scale = 1.0 / std::sqrt(std::abs(ts.lambda1));
  for (auto& a : m.A) a *= scale;
  const double gap = 1.0 - std::abs(ts.lambda2) / std::abs(ts.lambda1);
  if (DD > 1 && gap < opt.gap_tol)
    throw Error(errc::degenerate_transfer, "transfer map is not injective",
                "gap " + std::to_string(gap));

  VirtualAction va;
  va.group = g;
  va.D = D;
  va.transfer_gap = DD > 1 ? gap : 1.0;
  va.V.assign(g.n, Eigen::MatrixXcd::Identity(D, D));
  va.theta.assign(g.n, 0.0);
  va.lambda_modulus.assign(g.n, 1.0);
  va.relation_residual.assign(g.n, 0.0);

  for (int x = 0; x < g.n; ++x) {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(DD, DD);
    for (int i = 0; i < d; ++i)
      for (int ip = 0; ip < d; ++ip) {
        const std::complex<double> r = site_rep[x](i, ip);
        if (std::abs(r) > 1e-15)
          t += r * Eigen::kroneckerProduct(m.A[i].conjugate(), m.A[ip]);
      }
    Eigen::MatrixXcd p;
    std::complex<double> lam;
    if (DD == 1) {
      lam = t(0, 0);
      va.lambda_modulus[x] = std::abs(lam);
      p = Eigen::MatrixXcd::Ones(1, 1);
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(t);
      long long hi = 0;
      double best = -1.0, second = -1.0;
      for (long long i = 0; i < DD; ++i) {
        const double a = std::abs(eig.eigenvalues()(i));
        if (a > best) {
          second = best;
          best = a;
          hi = i;
        } else if (a > second) {
          second = a;
        }
      }
      lam = eig.eigenvalues()(hi);
      va.lambda_modulus[x] = best;
      if (std::abs(best - 1.0) <= opt.invariance_tol && best - second < opt.gap_tol)
        throw Error(errc::degenerate_transfer, "twisted transfer eigenvalue is degenerate",
                    "element " + elem(g, x));
      Eigen::VectorXcd v1 = eig.eigenvectors().col(hi);
      Eigen::MatrixXcd w = Eigen::Map<Eigen::MatrixXcd>(v1.data(), D, D);
      p = polar_unitary(w);
      fix_phase(p);
    }
    if (std::abs(va.lambda_modulus[x] - 1.0) > opt.invariance_tol)
      throw Error(errc::not_invariant, "state is not invariant under the symmetry",
                  "element " + elem(g, x) + ", |lambda| " +
                      std::to_string(va.lambda_modulus[x]));
    double theta = std::arg(lam);
    if (x == g.identity) {
      p = Eigen::MatrixXcd::Identity(D, D);
      theta = 0.0;
    }
    // residual of sum_i' R(g)_{i i'} A^{i'} = e^{i theta} P A^i P+
    const std::complex<double> ph = std::polar(1.0, theta);
    double res = 0.0;
    for (int i = 0; i < d; ++i) {
      Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Zero(D, D);
      for (int ip = 0; ip < d; ++ip) lhs += site_rep[x](i, ip) * m.A[ip];
      res = std::max(res, (lhs - ph * p * m.A[i] * p.adjoint()).norm());
    }
    va.theta[x] = theta;
    va.relation_residual[x] = res;
    va.V[x] = p.transpose();
  }
  return va;
}

Cocycle2 cocycle_from_virtual(const VirtualAction& va, double tol, double* max_defect) {
  const int n = va.group.n;
  Eigen::MatrixXcd vals(n, n);
  double defect = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int xy = va.group.mul(x, y);
      std::complex<double> nu = (va.V[xy].adjoint() * va.V[x] * va.V[y]).trace() /
                                static_cast<double>(va.D);
      if (std::abs(nu) < 0.5)
        throw Error(errc::extraction_inconsistent, "virtual composition trace collapsed",
                    "(" + elem(va.group, x) + "," + elem(va.group, y) + ")");
      nu /= std::abs(nu);
      const double dd = (va.V[x] * va.V[y] - nu * va.V[xy]).norm();
      defect = std::max(defect, dd);
      if (dd > tol)
        throw Error(errc::extraction_inconsistent, "virtual unitaries do not compose",
                    "(" + elem(va.group, x) + "," + elem(va.group, y) + ") defect " +
                        std::to_string(dd));
      vals(x, y) = nu;
    }
  if (max_defect) *max_defect = defect;
  return Cocycle2::from_floats(va.group, std::move(vals));
}

WallExtraction extract_walls(const DenseState& psi, const Arc& arc, int w,
                             const WindowOptions& opt) {
  const int N = psi.spec.N;
  const FiniteGroup& g = psi.spec.group;
  if (w < 1) throw Error(errc::dimension_mismatch, "window halfwidth must be positive");
  if (arc.len < 2 * w + 1 || N - arc.len < 2 * w + 1)
    throw Error(errc::arc_separation, "arc and complement must each exceed the window pair",
                "len " + std::to_string(arc.len) + ", N " + std::to_string(N) + ", w " +
                    std::to_string(w));

  WallExtraction out;
  for (int i = -w; i < w; ++i) {
    out.left_sites.push_back(((arc.start + i) % N + N) % N);
    out.right_sites.push_back(((arc.start + arc.len + i) % N + N) % N);
  }
  std::vector<int> both = out.left_sites;
  both.insert(both.end(), out.right_sites.begin(), out.right_sites.end());
  WindowIndexer ix(psi.spec, both);
  long long dL = 1, dR = 1;
  for (int s : out.left_sites) dL *= psi.spec.dims[s];
  for (int s : out.right_sites) dR *= psi.spec.dims[s];

  const Eigen::MatrixXcd gp = gather(psi, ix);  // (dL*dR) x comp, window index l*dR + r
  const long long comp = ix.comp_dim;

  out.VL.assign(g.n, Eigen::MatrixXcd::Identity(dL, dL));
  out.VR.assign(g.n, Eigen::MatrixXcd::Identity(dR, dR));
  out.residual.assign(g.n, 0.0);
  out.condition.assign(g.n, 1.0);
  out.iterations.assign(g.n, 0);

  // Column c viewed column-major as (dR x dL) is the transposed slice; the
  // whole buffer reinterpreted as dR x (dL*comp) lays those slices side by
  // side, so the per-component contractions batch into single products. The
  // tall form stacks the same blocks vertically for contractions over (r,c).
  const auto wide = [&](const Eigen::MatrixXcd& m) {
    return Eigen::Map<const Eigen::MatrixXcd>(m.data(), dR, dL * comp);
  };
  const auto to_tall = [&](const Eigen::Ref<const Eigen::MatrixXcd>& w,
                           Eigen::MatrixXcd& t) {
    for (long long c = 0; c < comp; ++c)
      t.middleRows(c * dR, dR) = w.middleCols(c * dL, dL);
  };
  const auto to_wide = [&](const Eigen::MatrixXcd& t, Eigen::MatrixXcd& w) {
    for (long long c = 0; c < comp; ++c)
      w.middleCols(c * dL, dL) = t.middleRows(c * dR, dR);
  };

  Eigen::MatrixXcd ypw(dR, dL * comp), ypt(dR * comp, dL);
  Eigen::MatrixXcd fxt(dR * comp, dL), fxw(dR, dL * comp);
  Eigen::MatrixXcd tf(dR * comp, dL);

  for (int x = 0; x < g.n; ++x) {
    if (x == g.identity) continue;
    const DenseState phi = apply_symmetry(psi, x, arc);
    const Eigen::MatrixXcd gf = gather(phi, ix);
    const auto wp = wide(gp);
    to_tall(wide(gf), tf);

    // The rearranged cross tensor S[(l,l'),(r,r')] = sum_c conj(phi) psi is
    // rank one up to the wall leakage, so a two-sided power iteration finds
    // the factors in a handful of sweeps.
    Eigen::MatrixXcd X(dL, dL), Y(dR, dR);
    double sy = 0.0;
    bool settled = false;
    for (int attempt = 0; attempt < opt.attempts && !settled; ++attempt) {
      Rng rng(Rng::mix(opt.seed, static_cast<std::uint64_t>(x), 0xa11eu + attempt));
      Eigen::MatrixXcd gsn(dR, dR);
      for (long long i = 0; i < dR; ++i)
        for (long long j = 0; j < dR; ++j) gsn(i, j) = rng.cnormal();
      Y = Eigen::MatrixXcd::Identity(dR, dR) / std::sqrt(static_cast<double>(dR)) +
          0.1 * gsn / gsn.norm();
      Y /= Y.norm();
      double best_delta = std::numeric_limits<double>::infinity();
      int best_it = 0;
      for (int it = 0; it < opt.max_iter; ++it) {
        ypw.noalias() = Y * wp;
        to_tall(ypw, ypt);
        X.noalias() = tf.adjoint() * ypt;  // sum_c Fc+ Y Pc
        const double sx = X.norm();
        if (sx < 1e-14) break;
        X /= sx;
        fxt.noalias() = tf * X;
        to_wide(fxt, fxw);
        Eigen::MatrixXcd yn(dR, dR);
        yn.noalias() = fxw * wp.adjoint();  // sum_c Fc X Pc+
        sy = yn.norm();
        if (sy < 1e-14) break;
        yn /= sy;
        std::complex<double> z = (Y.conjugate().cwiseProduct(yn)).sum();
        if (std::abs(z) > 0) z /= std::abs(z);
        const double delta = (yn - Y * z).norm();
        Y = std::move(yn);
        out.iterations[x] = it + 1;
        if (delta < opt.iter_tol) {
          settled = true;
          break;
        }
        if (delta < 0.5 * best_delta) {
          best_delta = delta;
          best_it = it;
        } else if (it - best_it > 30) {
          break;  // stagnant; the factorization residual downstream decides
        }
      }
      if (sy < 1e-14) settled = false;
    }
    if (sy < 1e-14)
      throw Error(errc::degenerate_transfer, "window split found no signal",
                  "element " + elem(g, x));

    double cond = 1.0;
    out.VL[x] = polar_unitary_cond(X.conjugate(), &cond);
    out.VR[x] = polar_unitary(Y);
    out.condition[x] = std::min(cond, 1e18);

    ypw.noalias() = out.VR[x] * wp;
    to_tall(ypw, ypt);
    fxt.noalias() = ypt * out.VL[x].transpose();  // blocks VR Pc VL^T
    const std::complex<double> cg = tf.conjugate().cwiseProduct(fxt).sum();
    // defect as an explicit difference norm; 2(1 - |cg|) is the same number in
    // exact arithmetic but cancels catastrophically near zero
    const std::complex<double> z = std::abs(cg) > 0 ? cg / std::abs(cg) : 1.0;
    const double r = std::sqrt((tf - z * fxt).squaredNorm());
    out.residual[x] = r;
    if (r > opt.guard)
      throw Error(errc::window_too_small, "wall leaks out of the window",
                  "element " + elem(g, x) + ", residual " + std::to_string(r) + ", w " +
                      std::to_string(w));
  }
  return out;
}

ExtractionReport extract_virtual_index(const FiniteGroup& g, const UniformMPS& mps,
                                       const std::vector<Eigen::MatrixXcd>& site_rep,
                                       const VirtualOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  VirtualAction va = extract_virtual_action(g, mps, site_rep, opt);
  ExtractionReport rep;
  rep.route = "virtual";
  rep.nu_raw = cocycle_from_virtual(va, opt.defect_tol, &rep.worst_defect);
  rep.cocycle_residual = check_cocycle(rep.nu_raw).residual;
  Classified c = classify_float(rep.nu_raw, opt.snap_tol);
  rep.nu_exact = std::move(c.exact);
  rep.cls = std::move(c.cls);
  rep.beta_fallback = c.via_beta;
  rep.snap_error = c.snap_error;
  rep.worst_residual =
      *std::max_element(va.relation_residual.begin(), va.relation_residual.end());
  rep.tolerances = {{"gap", opt.gap_tol},
                    {"invariance", opt.invariance_tol},
                    {"defect", opt.defect_tol},
                    {"snap", opt.snap_tol}};
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

ExtractionReport extract_window_index(const DenseState& psi, const Arc& arc, int w,
                                      const WindowOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const FiniteGroup& g = psi.spec.group;
  for (int x = 0; x < g.n; ++x) {
    const double ov = std::abs(overlap(psi, apply_symmetry(psi, x)));
    if (std::abs(ov - 1.0) > opt.invariance_tol)
      throw Error(errc::not_invariant, "state is not invariant under the symmetry",
                  "element " + elem(g, x) + ", |overlap| " + std::to_string(ov));
  }
  WallExtraction walls = extract_walls(psi, arc, w, opt);

  const Eigen::MatrixXcd rho = reduced_density(psi, walls.left_sites);
  // the twist is the arc action cut down to the window: identity on the sites
  // left of the arc, site rep on the arc half
  std::vector<Eigen::MatrixXcd> rwin(g.n);
  for (int x = 0; x < g.n; ++x) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Ones(1, 1);
    for (std::size_t i = 0; i < walls.left_sites.size(); ++i) {
      const int s = walls.left_sites[i];
      const long long d = psi.spec.dims[s];
      if (i < static_cast<std::size_t>(w))
        r = Eigen::kroneckerProduct(r, Eigen::MatrixXcd::Identity(d, d)).eval();
      else
        r = Eigen::kroneckerProduct(r, psi.spec.rep(s, x)).eval();
    }
    rwin[x] = std::move(r);
  }

  ExtractionReport rep;
  rep.route = "window";
  rep.window = w;
  const int n = g.n;
  Eigen::MatrixXcd vals(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int xy = g.mul(x, y);
      const Eigen::MatrixXcd m = walls.VL[xy].adjoint() * rwin[x] * walls.VL[y] *
                                 rwin[x].adjoint() * walls.VL[x];
      const std::complex<double> val = (m * rho).trace();
      if (std::abs(val) < 1e-6)
        throw Error(errc::extraction_inconsistent, "window formula value vanished",
                    "(" + elem(g, x) + "," + elem(g, y) + ")");
      rep.worst_defect = std::max(rep.worst_defect, std::abs(1.0 - std::abs(val)));
      vals(x, y) = val / std::abs(val);
    }
  rep.nu_raw = Cocycle2::from_floats(g, std::move(vals));
  rep.cocycle_residual = check_cocycle(rep.nu_raw).residual;
  Classified c = classify_float(rep.nu_raw, opt.snap_tol);
  rep.nu_exact = std::move(c.exact);
  rep.cls = std::move(c.cls);
  rep.beta_fallback = c.via_beta;
  rep.snap_error = c.snap_error;
  for (int x = 0; x < n; ++x) {
    rep.worst_residual = std::max(rep.worst_residual, walls.residual[x]);
    if (x != g.identity) rep.split_condition = std::max(rep.split_condition, walls.condition[x]);
  }
  rep.arc = arc;
  rep.tolerances = {{"invariance", opt.invariance_tol},
                    {"guard", opt.guard},
                    {"snap", opt.snap_tol},
                    {"iteration", opt.iter_tol}};
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

ExtractionReport stacked_virtual_index(const FiniteGroup& g, const UniformMPS& a,
                                       const std::vector<Eigen::MatrixXcd>& rep_a,
                                       const UniformMPS& b,
                                       const std::vector<Eigen::MatrixXcd>& rep_b,
                                       const VirtualOptions& opt) {
  require_ordinary_rep(g, rep_a, a.d);
  require_ordinary_rep(g, rep_b, b.d);
  std::vector<Eigen::MatrixXcd> rep(g.n);
  for (int x = 0; x < g.n; ++x)
    rep[x] = Eigen::kroneckerProduct(rep_a[x], rep_b[x]).eval();
  return extract_virtual_index(g, tensor_umps(a, b), rep, opt);
}

RouteComparison compare_routes(const ExtractionReport& a, const ExtractionReport& b) {
  if (!(a.nu_exact.group == b.nu_exact.group))
    throw Error(errc::group_mismatch, "routes ran on different groups");
  RouteComparison out;
  CoboundaryResult r = is_coboundary(stack(a.nu_exact, inverse_cocycle(b.nu_exact)));
  out.same_class = r.yes;
  out.witness = std::move(r.witness);
  return out;
}

}  // namespace spt
