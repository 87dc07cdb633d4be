#include "spt/circuits.hpp"

#include <algorithm>
#include <unsupported/Eigen/KroneckerProduct>

#include "spt/error.hpp"
#include "spt/linalg.hpp"
#include "spt/rng.hpp"

namespace spt {

namespace {

Eigen::MatrixXcd window_rep(const SiteSpec& spec, const std::vector<int>& sites, int g) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Ones(1, 1);
  for (int s : sites) r = Eigen::kroneckerProduct(r, spec.rep(s, g)).eval();
  return r;
}

// unitary rotating unit vector a onto unit vector b inside span{a,b},
// identity on the orthogonal complement
Eigen::MatrixXcd plane_rotation(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const long long n = a.size();
  const std::complex<double> c = a.dot(b);
  Eigen::VectorXcd e2 = b - c * a;
  const double s = e2.norm();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  if (s < 1e-12) {
    // already aligned up to phase
    return u + (c - 1.0) * (a * a.adjoint());
  }
  e2 /= s;
  u -= a * a.adjoint() + e2 * e2.adjoint();
  u += (c * a + s * e2) * a.adjoint();
  u += (-s * a + std::conj(c) * e2) * e2.adjoint();
  return u;
}

}  // namespace

double equivariance_residual(const SiteSpec& spec, const Arc& window,
                             const Eigen::MatrixXcd& u) {
  const std::vector<int> sites = window.sites(spec.N);
  double worst = 0.0;
  for (int g = 0; g < spec.group.n; ++g) {
    const Eigen::MatrixXcd r = window_rep(spec, sites, g);
    worst = std::max(worst, (u * r - r * u).norm());
  }
  return worst;
}

EquivariantGate sample_equivariant_gate(const SiteSpec& spec, const Arc& window,
                                        std::uint64_t seed) {
  const std::vector<int> sites = window.sites(spec.N);
  long long dw = 1;
  for (int s : sites) dw *= spec.dims[s];
  if (dw > (1 << 12))
    throw Error(errc::cap_exceeded, "gate window too large", std::to_string(dw));

  for (int attempt = 0; attempt < 3; ++attempt) {
    Rng rng(Rng::mix(seed, 0x9e3779b9u, attempt));
    Eigen::MatrixXcd m(dw, dw);
    for (long long i = 0; i < dw; ++i)
      for (long long j = 0; j < dw; ++j) m(i, j) = rng.cnormal();
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dw, dw);
    for (int g = 0; g < spec.group.n; ++g) {
      const Eigen::MatrixXcd r = window_rep(spec, sites, g);
      t += r * m * r.adjoint();
    }
    t /= static_cast<double>(spec.group.n);
    EquivariantGate gate;
    gate.window = window;
    gate.u = polar_unitary(t);
    gate.residual = equivariance_residual(spec, window, gate.u);
    if (gate.residual <= 1e-9) return gate;
  }
  throw Error(errc::equivariance_violated, "twirled gate failed the commutation check");
}

BrickworkCircuit build_brickwork(const SiteSpec& spec, int depth, std::uint64_t seed) {
  if (spec.N % 2 != 0)
    throw Error(errc::dimension_mismatch, "brickwork needs an even ring");
  if (depth < 0) throw Error(errc::dimension_mismatch, "negative circuit depth");
  BrickworkCircuit c;
  c.depth = depth;
  c.layers.resize(depth);
  for (int l = 0; l < depth; ++l) {
    for (int k = 0; k < spec.N / 2; ++k) {
      const Arc win{(2 * k + (l % 2)) % spec.N, 2};
      c.layers[l].push_back(sample_equivariant_gate(
          spec, win, Rng::mix(seed, static_cast<std::uint64_t>(l), k)));
    }
  }
  return c;
}

DenseState apply_circuit(const DenseState& psi, const BrickworkCircuit& c) {
  DenseState out = psi;
  for (const auto& layer : c.layers)
    for (const auto& gate : layer) out = apply_gate(out, gate.u, gate.window);
  return out;
}

DenseState apply_circuit_inverse(const DenseState& psi, const BrickworkCircuit& c) {
  DenseState out = psi;
  for (auto layer = c.layers.rbegin(); layer != c.layers.rend(); ++layer)
    for (const auto& gate : *layer) out = apply_gate(out, gate.u.adjoint(), gate.window);
  return out;
}

std::vector<double> wall_leakage_profile(const DenseState& psi, const Arc& arc, int wmax,
                                         WindowOptions opt) {
  opt.guard = std::numeric_limits<double>::infinity();
  std::vector<double> profile;
  for (int w = 1; w <= wmax; ++w) {
    const WallExtraction walls = extract_walls(psi, arc, w, opt);
    profile.push_back(*std::max_element(walls.residual.begin(), walls.residual.end()));
  }
  return profile;
}

SwindleResult swindle_disentangler(const ProjectiveRep& linear, int N,
                                   std::optional<Eigen::VectorXcd> target) {
  const FiniteGroup& g = linear.group;
  const int D = linear.dim;
  if (N < 4 || N % 2 != 0)
    throw Error(errc::dimension_mismatch, "swindle ring must be even and at least 4");
  {
    const Cocycle2 nu = normalize_gauge(linear.cocycle);
    for (int x = 0; x < g.n; ++x)
      for (int y = 0; y < g.n; ++y)
        if (std::abs(nu.value(x, y) - 1.0) > 1e-12)
          throw Error(errc::invalid_cocycle, "swindle needs an honestly linear rep");
  }

  // rep-invariant unit vector, the rotation target on each bond slot pair
  Eigen::VectorXcd v0;
  if (target) {
    v0 = *target;
    if (v0.size() != D || std::abs(v0.norm() - 1.0) > 1e-10)
      throw Error(errc::dimension_mismatch, "target vector has the wrong shape");
    for (int x = 0; x < g.n; ++x)
      if ((linear.q(x) * v0 - v0).norm() > 1e-10)
        throw Error(errc::not_character_vector, "target vector is not rep-invariant");
  } else {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(D, D);
    for (int x = 0; x < g.n; ++x) proj += linear.q(x);
    proj /= static_cast<double>(g.n);
    long long best = 0;
    proj.colwise().norm().maxCoeff(&best);
    if (proj.col(best).norm() < 1e-12)
      throw Error(errc::not_character_vector, "rep has no invariant vector");
    v0 = proj.col(best).normalized();
  }

  DenseState psi = build_eps_dense(linear, N);

  // bond pair (V*_j, V_{j+1}) carries conj(L) (x) L; rotate the entangled
  // pair onto conj(v0) (x) v0, identity on the outer slots
  Eigen::VectorXcd pair = Eigen::VectorXcd::Zero(static_cast<long long>(D) * D);
  for (int m = 0; m < D; ++m) pair(static_cast<long long>(m) * D + m) = 1.0;
  pair /= pair.norm();
  Eigen::VectorXcd tgt(static_cast<long long>(D) * D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      tgt(static_cast<long long>(m) * D + n) = std::conj(v0(m)) * v0(n);
  const Eigen::MatrixXcd rot = plane_rotation(pair, tgt);
  const Eigen::MatrixXcd id(Eigen::MatrixXcd::Identity(D, D));
  const Eigen::MatrixXcd gate_u =
      Eigen::kroneckerProduct(id, Eigen::kroneckerProduct(rot, id).eval()).eval();

  SwindleResult out;
  out.circuit.depth = 2;
  out.circuit.layers.resize(2);
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < N / 2; ++k) {
      EquivariantGate gate;
      gate.window = Arc{(2 * k + l) % N, 2};
      gate.u = gate_u;
      gate.residual = equivariance_residual(psi.spec, gate.window, gate.u);
      if (gate.residual > 1e-9)
        throw Error(errc::equivariance_violated, "swindle gate fails the commutation check");
      out.circuit.layers[l].push_back(std::move(gate));
    }

  out.output = apply_circuit(psi, out.circuit);
  out.site_purity.resize(N);
  for (int j = 0; j < N; ++j) {
    const Eigen::MatrixXcd rho = reduced_density(out.output, {j});
    out.site_purity[j] = (rho * rho).trace().real();
  }
  for (int x = 0; x < g.n; ++x)
    out.invariance_residual =
        std::max(out.invariance_residual,
                 std::abs(overlap(out.output, apply_symmetry(out.output, x)) - 1.0));
  return out;
}

}  // namespace spt
