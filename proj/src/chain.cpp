#include "spt/chain.hpp"

#include <algorithm>
#include <cstdlib>
#include <unsupported/Eigen/KroneckerProduct>

#include "spt/error.hpp"

namespace spt {

namespace {

std::vector<long long> site_strides(const SiteSpec& spec) {
  std::vector<long long> s(spec.N, 1);
  for (int j = spec.N - 2; j >= 0; --j) s[j] = s[j + 1] * spec.dims[j + 1];
  return s;
}

void require_valid_sites(const SiteSpec& spec, const std::vector<int>& sites) {
  std::vector<bool> seen(spec.N, false);
  for (int s : sites) {
    if (s < 0 || s >= spec.N) throw Error(errc::dimension_mismatch, "site index out of range");
    if (seen[s]) throw Error(errc::dimension_mismatch, "repeated site in region");
    seen[s] = true;
  }
}

constexpr long long kDensityDimCap = 1 << 11;  // region density matrices stay < 70 MB

}  // namespace

long long dense_cap() {
  if (const char* e = std::getenv("SPT_DENSE_CAP")) {
    const long long v = std::strtoll(e, nullptr, 10);
    if (v > 0) return v;
  }
  return 1LL << 20;
}

long long SiteSpec::total_dim() const {
  long long t = 1;
  for (int d : dims) {
    if (__builtin_mul_overflow(t, static_cast<long long>(d), &t))
      throw Error(errc::cap_exceeded, "total dimension overflows int64");
  }
  return t;
}

SiteSpec make_site_spec(FiniteGroup g, std::vector<int> dims,
                        std::vector<std::vector<Eigen::MatrixXcd>> site_rep) {
  SiteSpec spec;
  spec.N = static_cast<int>(dims.size());
  if (spec.N < 1) throw Error(errc::dimension_mismatch, "ring needs at least one site");
  if (site_rep.size() != dims.size())
    throw Error(errc::dimension_mismatch, "one site rep per site required");
  for (int j = 0; j < spec.N; ++j) {
    const int d = dims[j];
    if (d < 1) throw Error(errc::dimension_mismatch, "site dimension must be positive");
    if (static_cast<int>(site_rep[j].size()) != g.n)
      throw Error(errc::dimension_mismatch, "site rep must cover every group element");
    for (int x = 0; x < g.n; ++x) {
      const Eigen::MatrixXcd& m = site_rep[j][x];
      if (m.rows() != d || m.cols() != d)
        throw Error(errc::dimension_mismatch, "site rep matrix shape mismatch");
      if ((m.adjoint() * m - Eigen::MatrixXcd::Identity(d, d)).norm() > 1e-10)
        throw Error(errc::non_unitary, "site rep matrix is not unitary");
    }
    if ((site_rep[j][g.identity] - Eigen::MatrixXcd::Identity(d, d)).norm() > 1e-10)
      throw Error(errc::not_projective_rep, "site rep must send the identity to I");
    for (int x = 0; x < g.n; ++x)
      for (int y = 0; y < g.n; ++y)
        if ((site_rep[j][x] * site_rep[j][y] - site_rep[j][g.mul(x, y)]).norm() > 1e-10)
          throw Error(errc::not_projective_rep, "site rep is not an ordinary representation",
                      "site " + std::to_string(j));
  }
  spec.group = std::move(g);
  spec.dims = std::move(dims);
  spec.site_rep = std::move(site_rep);
  if (spec.total_dim() > dense_cap())
    throw Error(errc::cap_exceeded, "total dimension exceeds the dense amplitude cap",
                std::to_string(spec.total_dim()) + " > " + std::to_string(dense_cap()));
  return spec;
}

SiteSpec uniform_site_spec(const FiniteGroup& g, int N, int d,
                           const std::vector<Eigen::MatrixXcd>& rep) {
  return make_site_spec(g, std::vector<int>(N, d),
                        std::vector<std::vector<Eigen::MatrixXcd>>(N, rep));
}

std::vector<int> Arc::sites(int N) const {
  if (len < 0 || len > N || start < 0 || start >= N)
    throw Error(errc::dimension_mismatch, "arc out of range");
  std::vector<int> out(len);
  for (int i = 0; i < len; ++i) out[i] = (start + i) % N;
  return out;
}

Arc Arc::complement(int N) const { return Arc{(start + len) % N, N - len}; }

DenseState make_dense_state(SiteSpec spec, Eigen::VectorXcd amp) {
  if (amp.size() != spec.total_dim())
    throw Error(errc::dimension_mismatch, "amplitude count does not match the site spec");
  const double n = amp.norm();
  if (std::abs(n - 1.0) > 1e-10)
    throw Error(errc::dimension_mismatch, "state is not normalized", "norm " + std::to_string(n));
  return DenseState{std::move(spec), std::move(amp)};
}

WindowIndexer::WindowIndexer(const SiteSpec& spec, const std::vector<int>& sites) {
  require_valid_sites(spec, sites);
  const std::vector<long long> strides = site_strides(spec);
  std::vector<bool> in_win(spec.N, false);
  for (int s : sites) in_win[s] = true;

  win_off = {0};
  for (int s : sites) {
    std::vector<long long> next;
    next.reserve(win_off.size() * spec.dims[s]);
    for (long long base : win_off)
      for (int k = 0; k < spec.dims[s]; ++k) next.push_back(base + k * strides[s]);
    win_off = std::move(next);
  }
  comp_off = {0};
  for (int s = 0; s < spec.N; ++s) {
    if (in_win[s]) continue;
    std::vector<long long> next;
    next.reserve(comp_off.size() * spec.dims[s]);
    for (long long base : comp_off)
      for (int k = 0; k < spec.dims[s]; ++k) next.push_back(base + k * strides[s]);
    comp_off = std::move(next);
  }
  win_dim = static_cast<long long>(win_off.size());
  comp_dim = static_cast<long long>(comp_off.size());
}

Eigen::MatrixXcd gather(const DenseState& psi, const WindowIndexer& ix) {
  Eigen::MatrixXcd a(ix.win_dim, ix.comp_dim);
  for (long long c = 0; c < ix.comp_dim; ++c) {
    const long long co = ix.comp_off[c];
    for (long long w = 0; w < ix.win_dim; ++w) a(w, c) = psi.amp(ix.win_off[w] + co);
  }
  return a;
}

Eigen::VectorXcd scatter(const WindowIndexer& ix, const Eigen::MatrixXcd& block) {
  Eigen::VectorXcd amp(ix.win_dim * ix.comp_dim);
  for (long long c = 0; c < ix.comp_dim; ++c) {
    const long long co = ix.comp_off[c];
    for (long long w = 0; w < ix.win_dim; ++w) amp(ix.win_off[w] + co) = block(w, c);
  }
  return amp;
}

DenseState build_eps_dense(const ProjectiveRep& rho, int N) {
  if (N < 2) throw Error(errc::dimension_mismatch, "entangled-pair ring needs N >= 2");
  const int D = rho.dim;
  std::vector<Eigen::MatrixXcd> site(rho.group.n);
  for (int g = 0; g < rho.group.n; ++g)
    site[g] = Eigen::kroneckerProduct(rho.q(g), rho.q(g).conjugate()).eval();
  SiteSpec spec = uniform_site_spec(rho.group, N, D * D, site);

  const std::vector<long long> strides = site_strides(spec);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(spec.total_dim());
  const double w = std::pow(static_cast<double>(D), -0.5 * N);
  // bond j pairs the W* slot of site j with the W slot of site j+1
  std::vector<int> m(N, 0);
  while (true) {
    long long idx = 0;
    for (int j = 0; j < N; ++j) idx += static_cast<long long>(m[j] * D + m[(j + 1) % N]) * strides[j];
    amp(idx) = w;
    int j = N - 1;
    while (j >= 0 && ++m[j] == D) m[j--] = 0;
    if (j < 0) break;
  }
  return make_dense_state(std::move(spec), std::move(amp));
}

DenseState build_product_state(const SiteSpec& spec, const std::vector<Eigen::VectorXcd>& vectors,
                               ProductReport* report) {
  if (static_cast<int>(vectors.size()) != spec.N)
    throw Error(errc::dimension_mismatch, "one vector per site required");
  Eigen::VectorXcd amp(1);
  amp(0) = 1.0;
  for (int j = 0; j < spec.N; ++j) {
    const Eigen::VectorXcd& v = vectors[j];
    if (v.size() != spec.dims[j])
      throw Error(errc::dimension_mismatch, "site vector dimension mismatch");
    if (std::abs(v.norm() - 1.0) > 1e-10)
      throw Error(errc::dimension_mismatch, "site vector is not normalized",
                  "site " + std::to_string(j));
    Eigen::VectorXcd next(amp.size() * v.size());
    for (long long a = 0; a < amp.size(); ++a)
      for (int k = 0; k < v.size(); ++k) next(a * v.size() + k) = amp(a) * v(k);
    amp = std::move(next);
  }
  if (report) {
    const int n = spec.group.n;
    report->site_is_character.assign(spec.N, true);
    report->max_character_residual = 0.0;
    report->invariant.assign(n, true);
    report->characters = Eigen::MatrixXcd::Zero(n, spec.N);
    for (int j = 0; j < spec.N; ++j)
      for (int g = 0; g < n; ++g) {
        const Eigen::VectorXcd w = spec.rep(j, g) * vectors[j];
        const std::complex<double> chi = vectors[j].dot(w);
        const double res = (w - chi * vectors[j]).norm();
        report->characters(g, j) = chi;
        report->max_character_residual = std::max(report->max_character_residual, res);
        if (res > 1e-9) report->site_is_character[j] = false;
      }
    for (int g = 0; g < n; ++g) {
      std::complex<double> total = 1.0;
      for (int j = 0; j < spec.N; ++j) total *= report->characters(g, j);
      bool ok = std::abs(total - 1.0) <= 1e-9;
      for (int j = 0; j < spec.N; ++j) ok = ok && report->site_is_character[j];
      report->invariant[g] = ok;
    }
  }
  return make_dense_state(spec, std::move(amp));
}

DenseState apply_site_op(const DenseState& psi, int site, const Eigen::MatrixXcd& op) {
  const int d = psi.spec.dims[site];
  if (op.rows() != d || op.cols() != d)
    throw Error(errc::dimension_mismatch, "site operator shape mismatch");
  const std::vector<long long> strides = site_strides(psi.spec);
  const long long s = strides[site];
  const long long total = psi.amp.size();
  const long long outer = total / (d * s);
  Eigen::VectorXcd out(total);
  Eigen::VectorXcd v(d), y(d);
  for (long long o = 0; o < outer; ++o) {
    const long long base = o * d * s;
    for (long long i = 0; i < s; ++i) {
      for (int k = 0; k < d; ++k) v(k) = psi.amp(base + k * s + i);
      y.noalias() = op * v;
      for (int k = 0; k < d; ++k) out(base + k * s + i) = y(k);
    }
  }
  DenseState r = psi;
  r.amp = std::move(out);
  return r;
}

DenseState apply_symmetry(const DenseState& psi, int g, const Arc& arc) {
  DenseState r = psi;
  for (int s : arc.sites(psi.spec.N)) r = apply_site_op(r, s, psi.spec.rep(s, g));
  return r;
}

DenseState apply_symmetry(const DenseState& psi, int g) {
  return apply_symmetry(psi, g, Arc{0, psi.spec.N});
}

DenseState apply_gate(const DenseState& psi, const Eigen::MatrixXcd& gate, const Arc& window) {
  const std::vector<int> sites = window.sites(psi.spec.N);
  WindowIndexer ix(psi.spec, sites);
  if (gate.rows() != ix.win_dim || gate.cols() != ix.win_dim)
    throw Error(errc::dimension_mismatch, "gate dimension does not match the window");
  if ((gate.adjoint() * gate - Eigen::MatrixXcd::Identity(ix.win_dim, ix.win_dim)).norm() > 1e-10)
    throw Error(errc::non_unitary, "gate fails the unitarity check");
  Eigen::MatrixXcd block = gather(psi, ix);
  block = gate * block;
  DenseState r = psi;
  r.amp = scatter(ix, block);
  return r;
}

Eigen::MatrixXcd reduced_density(const DenseState& psi, const std::vector<int>& region) {
  WindowIndexer ix(psi.spec, region);
  if (ix.win_dim > kDensityDimCap)
    throw Error(errc::cap_exceeded, "region too large for a dense density matrix",
                std::to_string(ix.win_dim));
  const Eigen::MatrixXcd a = gather(psi, ix);
  return a * a.adjoint();
}

std::vector<double> schmidt_spectrum(const DenseState& psi, const Arc& side) {
  Arc small = side;
  const Arc other = side.complement(psi.spec.N);
  {
    long long ds = 1, dc = 1;
    for (int s : side.sites(psi.spec.N)) ds *= psi.spec.dims[s];
    for (int s : other.sites(psi.spec.N)) dc *= psi.spec.dims[s];
    if (dc < ds) small = other;
  }
  Eigen::MatrixXcd rho = reduced_density(psi, small.sites(psi.spec.N));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
  std::vector<double> out(eig.eigenvalues().size());
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    out[i] = std::max(0.0, eig.eigenvalues()(eig.eigenvalues().size() - 1 - i));
  return out;
}

Eigen::MatrixXcd cross_operator(const DenseState& phi, const DenseState& psi,
                                const std::vector<int>& window) {
  if (phi.spec.dims != psi.spec.dims)
    throw Error(errc::dimension_mismatch, "states live on different rings");
  WindowIndexer ix(phi.spec, window);
  if (ix.win_dim > kDensityDimCap)
    throw Error(errc::cap_exceeded, "window too large for a dense cross operator",
                std::to_string(ix.win_dim));
  return gather(phi, ix) * gather(psi, ix).adjoint();
}

DenseState truncate_state(const DenseState& psi, const Arc& arc) {
  const int N = psi.spec.N;
  const std::vector<int> arc_sites = arc.sites(N);
  Eigen::MatrixXcd rho = reduced_density(psi, arc_sites);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  const long long adim = rho.rows();
  int rank = 0;
  for (long long i = 0; i < adim; ++i)
    if (eig.eigenvalues()(i) > 1e-12) ++rank;

  // ancilla sites taken greedily from the arc end, walking away
  std::vector<int> anc;
  long long anc_dim = 1;
  for (int i = 0; i < N - arc.len && anc_dim < rank; ++i) {
    const int s = (arc.start + arc.len + i) % N;
    anc.push_back(s);
    anc_dim *= psi.spec.dims[s];
  }
  if (anc_dim < rank)
    throw Error(errc::cap_exceeded, "purification rank exceeds the complement dimension",
                "rank " + std::to_string(rank));

  WindowIndexer arc_ix(psi.spec, arc_sites);
  WindowIndexer anc_ix(psi.spec, anc);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(psi.amp.size());
  double total = 0.0;
  for (int i = 0; i < rank; ++i) total += eig.eigenvalues()(adim - 1 - i);
  for (int i = 0; i < rank; ++i) {
    const double lam = eig.eigenvalues()(adim - 1 - i);
    const double coef = std::sqrt(std::max(0.0, lam) / total);
    const auto u = eig.eigenvectors().col(adim - 1 - i);
    const long long aoff = anc_ix.win_off[i];
    for (long long w = 0; w < arc_ix.win_dim; ++w) amp(arc_ix.win_off[w] + aoff) += coef * u(w);
  }
  return make_dense_state(psi.spec, std::move(amp));
}

std::complex<double> overlap(const DenseState& a, const DenseState& b) {
  if (a.amp.size() != b.amp.size())
    throw Error(errc::dimension_mismatch, "states live on different rings");
  return a.amp.dot(b.amp);
}

}  // namespace spt
