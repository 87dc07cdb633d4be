#include "spt/projective.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "spt/error.hpp"

namespace spt {

namespace {

void require_unitary(const Eigen::MatrixXcd& m, const std::string& who, double tol = 1e-10) {
  const int d = static_cast<int>(m.rows());
  if (m.cols() != d) throw Error(errc::non_unitary, who + " is not square");
  const double r = (m.adjoint() * m - Eigen::MatrixXcd::Identity(d, d)).norm();
  if (r > tol)
    throw Error(errc::non_unitary, who + " fails the unitarity check",
                "residual " + std::to_string(r));
}

}  // namespace

Cocycle2 cocycle_of_rep(const FiniteGroup& g, const std::vector<Eigen::MatrixXcd>& mats,
                        double tol) {
  const int n = g.n;
  if (static_cast<int>(mats.size()) != n)
    throw Error(errc::not_projective_rep, "one matrix per group element required");
  const int d = static_cast<int>(mats[0].rows());
  for (int x = 0; x < n; ++x) require_unitary(mats[x], "Q(" + std::to_string(x) + ")");

  Eigen::MatrixXcd vals(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Eigen::MatrixXcd p = mats[g.mul(a, b)].adjoint() * mats[a] * mats[b];
      std::complex<double> nu = p.trace() / static_cast<double>(d);
      const double defect = (p - nu * Eigen::MatrixXcd::Identity(d, d)).norm();
      if (defect > tol)
        throw Error(errc::not_projective_rep, "Q(g)Q(h)Q(gh)^-1 is not scalar",
                    "pair (" + std::to_string(a) + "," + std::to_string(b) + ") defect " +
                        std::to_string(defect));
      vals(a, b) = nu / std::abs(nu);
    }
  return Cocycle2::from_floats(g, std::move(vals));
}

ProjectiveRep make_projective_rep(FiniteGroup g, std::vector<Eigen::MatrixXcd> mats,
                                  std::optional<Cocycle2> cocycle) {
  ProjectiveRep r;
  r.dim = mats.empty() ? 0 : static_cast<int>(mats[0].rows());
  if (cocycle) {
    if (!(cocycle->group == g)) throw Error(errc::group_mismatch, "cocycle group differs");
    for (int x = 0; x < g.n; ++x) require_unitary(mats[x], "Q(" + std::to_string(x) + ")");
    for (int a = 0; a < g.n; ++a)
      for (int b = 0; b < g.n; ++b) {
        const double res = (mats[a] * mats[b] - cocycle->value(a, b) * mats[g.mul(a, b)]).norm();
        if (res > 1e-9)
          throw Error(errc::not_projective_rep, "matrices do not realize the declared cocycle",
                      "pair (" + std::to_string(a) + "," + std::to_string(b) + ") residual " +
                          std::to_string(res));
      }
    r.cocycle = std::move(*cocycle);
  } else {
    r.cocycle = cocycle_of_rep(g, mats);
  }
  r.group = std::move(g);
  r.mats = std::move(mats);
  return r;
}

ProjectiveRep clock_shift_rep(int n, int q) {
  if (n < 2) throw Error(errc::invalid_group, "clock-shift needs n >= 2");
  const FiniteGroup zn = cyclic_group(n);
  FiniteGroup g = direct_product(zn, zn);
  const int order = g.n;

  std::vector<Eigen::MatrixXcd> mats(order);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      // Q((j,k)) = shift^j clock^(qk): column c holds omega^(q k c) at row c+j
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
      for (int c = 0; c < n; ++c) {
        const long long e = (static_cast<long long>(q) * k * c) % n;
        m((c + j) % n, c) = std::polar(1.0, 2.0 * M_PI * static_cast<double>(((e % n) + n) % n) / n);
      }
      mats[j * n + k] = std::move(m);
    }

  // exact cocycle omega^(q k j') for ((j,k),(j',k'))
  std::vector<long long> num(static_cast<std::size_t>(order) * order);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int j2 = 0; j2 < n; ++j2)
        for (int k2 = 0; k2 < n; ++k2) {
          const int a = j * n + k, b = j2 * n + k2;
          num[static_cast<std::size_t>(a) * order + b] =
              ((static_cast<long long>(q) * k * j2) % n + n) % n;
        }
  Cocycle2 nu = Cocycle2::exact(g, n, std::move(num));
  return make_projective_rep(std::move(g), std::move(mats), std::move(nu));
}

ProjectiveRep twisted_regular_rep(const Cocycle2& nu) {
  if (nu.mode != PhaseMode::Exact)
    throw Error(errc::mode_mismatch, "twisted regular rep needs an exact cocycle");
  const FiniteGroup& G = nu.group;
  const int n = G.n, e = G.identity;
  for (int x = 0; x < n; ++x)
    if (nu.num_at(e, x) != 0 || nu.num_at(x, e) != 0)
      throw Error(errc::unnormalized_cocycle, "twisted regular rep needs normalized gauge");
  std::vector<Eigen::MatrixXcd> mats(n);
  for (int g = 0; g < n; ++g) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int hp = 0; hp < n; ++hp) m(G.mul(g, hp), hp) = nu.value(g, hp);
    mats[g] = std::move(m);
  }
  return make_projective_rep(G, std::move(mats), nu);
}

ProjectiveRep dual_rep(const ProjectiveRep& r) {
  std::vector<Eigen::MatrixXcd> mats(r.mats.size());
  for (std::size_t i = 0; i < r.mats.size(); ++i) mats[i] = r.mats[i].conjugate();
  return make_projective_rep(r.group, std::move(mats), inverse_cocycle(r.cocycle));
}

ProjectiveRep tensor_rep(const ProjectiveRep& a, const ProjectiveRep& b) {
  if (!(a.group == b.group)) throw Error(errc::group_mismatch, "tensor_rep needs matching groups");
  std::vector<Eigen::MatrixXcd> mats(a.mats.size());
  for (std::size_t i = 0; i < a.mats.size(); ++i)
    mats[i] = Eigen::kroneckerProduct(a.mats[i], b.mats[i]).eval();
  return make_projective_rep(a.group, std::move(mats), stack(a.cocycle, b.cocycle));
}

ProjectiveRep trivial_rep(const FiniteGroup& g, int dim) {
  std::vector<Eigen::MatrixXcd> mats(g.n, Eigen::MatrixXcd::Identity(dim, dim));
  return make_projective_rep(g, std::move(mats), Cocycle2::trivial(g));
}

bool is_irreducible(const ProjectiveRep& r) {
  const int d = r.dim, n = r.group.n;
  // commutant: M with Q(g) M Q(g)^dag = M for all g; stack the conditions
  Eigen::MatrixXcd sys(static_cast<long>(n) * d * d, d * d);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d * d, d * d);
  for (int g = 0; g < n; ++g)
    sys.block(static_cast<long>(g) * d * d, 0, d * d, d * d) =
        Eigen::kroneckerProduct(r.q(g).conjugate(), r.q(g)) - id;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys);
  int nullity = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < 1e-8) ++nullity;
  nullity += d * d - static_cast<int>(svd.singularValues().size());
  return nullity == 1;
}

}  // namespace spt
