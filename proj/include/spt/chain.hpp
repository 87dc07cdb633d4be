#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spt/group.hpp"
#include "spt/projective.hpp"

namespace spt {

// Amplitude-count cap for dense states; SPT_DENSE_CAP overrides the 2^20
// default.
long long dense_cap();

// Ring of N sites with per-site ordinary G-reps R_j(g).
struct SiteSpec {
  FiniteGroup group;
  int N = 0;
  std::vector<int> dims;
  std::vector<std::vector<Eigen::MatrixXcd>> site_rep;  // [site][element]

  long long total_dim() const;
  const Eigen::MatrixXcd& rep(int site, int g) const { return site_rep[site][g]; }
};

// Validates each site rep as an ordinary rep (R(g)R(h) = R(gh) to 1e-10,
// R(e) = I) and the amplitude cap.
SiteSpec make_site_spec(FiniteGroup g, std::vector<int> dims,
                        std::vector<std::vector<Eigen::MatrixXcd>> site_rep);
// same dimension and rep on every site
SiteSpec uniform_site_spec(const FiniteGroup& g, int N, int d,
                           const std::vector<Eigen::MatrixXcd>& rep);

// Contiguous run of `len` sites starting at `start`, wrapping on the ring.
struct Arc {
  int start = 0;
  int len = 0;
  std::vector<int> sites(int N) const;
  Arc complement(int N) const;
};

// Amplitudes are site-major: site 0 varies slowest.
struct DenseState {
  SiteSpec spec;
  Eigen::VectorXcd amp;
};

DenseState make_dense_state(SiteSpec spec, Eigen::VectorXcd amp);  // norm 1 to 1e-10

// Splits the amplitude index into (ordered site subset) x (complement in
// ascending site order): amp[win_off[w] + comp_off[c]].
struct WindowIndexer {
  long long win_dim = 1, comp_dim = 1;
  std::vector<long long> win_off, comp_off;
  WindowIndexer(const SiteSpec& spec, const std::vector<int>& sites);
};

Eigen::MatrixXcd gather(const DenseState& psi, const WindowIndexer& ix);
Eigen::VectorXcd scatter(const WindowIndexer& ix, const Eigen::MatrixXcd& block);

// Periodic entangled-pair state of the rep: site space W (x) W*, site rep
// Q(g) (x) conj(Q(g)), every bond maximally entangled. Exactly G-invariant.
DenseState build_eps_dense(const ProjectiveRep& rho, int N);

struct ProductReport {
  std::vector<bool> site_is_character;   // v_j spans a 1-dim subrep
  double max_character_residual = 0.0;   // worst ||R_j(g) v_j - chi v_j||
  std::vector<bool> invariant;           // per element: global phase equals 1
  Eigen::MatrixXcd characters;           // (element, site) -> chi_j(g)
};

DenseState build_product_state(const SiteSpec& spec, const std::vector<Eigen::VectorXcd>& vectors,
                               ProductReport* report = nullptr);

DenseState apply_site_op(const DenseState& psi, int site, const Eigen::MatrixXcd& op);
DenseState apply_symmetry(const DenseState& psi, int g, const Arc& arc);
DenseState apply_symmetry(const DenseState& psi, int g);  // whole ring
// gate acts on the contiguous window, window-site-major basis ordering
DenseState apply_gate(const DenseState& psi, const Eigen::MatrixXcd& gate, const Arc& window);

Eigen::MatrixXcd reduced_density(const DenseState& psi, const std::vector<int>& region);
// descending eigenvalues of the reduced density on the given side
std::vector<double> schmidt_spectrum(const DenseState& psi, const Arc& side);

// partial trace of |phi><psi| over the window complement
Eigen::MatrixXcd cross_operator(const DenseState& phi, const DenseState& psi,
                                const std::vector<int>& window);

// State agreeing with psi on the arc, purified onto the fewest complement
// sites adjacent to the arc end, product (first basis vector) elsewhere.
DenseState truncate_state(const DenseState& psi, const Arc& arc);

std::complex<double> overlap(const DenseState& a, const DenseState& b);  // <a|b>

}  // namespace spt
