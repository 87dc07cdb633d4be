// Acceptance gate: one pass/fail line per criterion, exit 0 only when all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "spt/chain.hpp"
#include "spt/circuits.hpp"
#include "spt/cocycle.hpp"
#include "spt/diagnostics.hpp"
#include "spt/error.hpp"
#include "spt/extraction.hpp"
#include "spt/group.hpp"
#include "spt/json_io.hpp"
#include "spt/linalg.hpp"
#include "spt/mps.hpp"
#include "spt/projective.hpp"
#include "spt/rng.hpp"

using namespace spt;
using cd = std::complex<double>;
using clock_t_ = std::chrono::steady_clock;

namespace {

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", x);
  return buf;
}

double seconds_since(clock_t_::time_point t0) {
  return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

std::vector<Eigen::MatrixXcd> pair_site_rep(const ProjectiveRep& rho) {
  std::vector<Eigen::MatrixXcd> site(rho.group.n);
  for (int g = 0; g < rho.group.n; ++g)
    site[g] = Eigen::kroneckerProduct(rho.q(g), rho.q(g).conjugate()).eval();
  return site;
}

SiteSpec pair_spec(const ProjectiveRep& rho, int N) {
  return uniform_site_spec(rho.group, N, rho.dim * rho.dim, pair_site_rep(rho));
}

Eigen::VectorXcd bond_pair_vector(int D) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(D * D);
  for (int m = 0; m < D; ++m) v(m * D + m) = 1.0;
  return v / std::sqrt(double(D));
}

DenseState invariant_product(const ProjectiveRep& rho, int N) {
  return build_product_state(pair_spec(rho, N),
                             std::vector<Eigen::VectorXcd>(N, bond_pair_vector(rho.dim)));
}

double state_invariance_residual(const DenseState& psi) {
  double worst = 0.0;
  for (int g = 0; g < psi.spec.group.n; ++g)
    worst = std::max(worst,
                     std::abs(overlap(psi, apply_symmetry(psi, g)) - cd(1, 0)));
  return worst;
}

int run_all() {
  int failures = 0;
  std::vector<std::string> notes;
  auto criterion = [&](int id, const std::string& name,
                       const std::function<std::string()>& body) {
    const auto t0 = clock_t_::now();
    try {
      const std::string stat = body();
      std::printf("[PASS] %d %-22s %s (%.1fs)\n", id, name.c_str(), stat.c_str(),
                  seconds_since(t0));
    } catch (const Failure& f) {
      ++failures;
      std::printf("[FAIL] %d %-22s %s (%.1fs)\n", id, name.c_str(), f.what.c_str(),
                  seconds_since(t0));
    } catch (const Error& e) {
      ++failures;
      std::printf("[FAIL] %d %-22s unexpected error %s: %s (%.1fs)\n", id, name.c_str(),
                  e.code().c_str(), e.what(), seconds_since(t0));
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] %d %-22s unexpected exception: %s (%.1fs)\n", id, name.c_str(),
                  e.what(), seconds_since(t0));
    }
    std::fflush(stdout);
  };

  const ProjectiveRep pauli = clock_shift_rep(2, 1);
  const ProjectiveRep clock1 = clock_shift_rep(3, 1);
  const ProjectiveRep clock2 = clock_shift_rep(3, 2);

  criterion(1, "cohomology engine", [&] {
    const auto t0 = clock_t_::now();
    for (int n = 1; n <= 12; ++n)
      require(enumerate_h2(cyclic_group(n)).order() == 1,
              "cyclic group of order " + std::to_string(n) + " not trivial");
    for (int m = 1; m <= 4; ++m)
      for (int n = 1; n <= 4; ++n) {
        const long long got =
            enumerate_h2(direct_product(cyclic_group(m), cyclic_group(n)), 16).order();
        require(got == std::gcd(m, n),
                "Z" + std::to_string(m) + "xZ" + std::to_string(n) + " gave " +
                    std::to_string(got) + " classes, want gcd");
      }
    const double dt = seconds_since(t0);
    require(dt < 5.0, "enumeration took " + fmt(dt) + "s, budget 5s");
    return "cyclic n<=12 trivial, products match gcd(m,n)";
  });

  criterion(2, "pair-state class, virtual route", [&] {
    const ExtractionReport p =
        extract_virtual_index(pauli.group, build_eps_mps(pauli), pair_site_rep(pauli));
    require(!p.cls.is_trivial(), "pauli ring came out trivial");
    require(p.cls == reduce_to_class(pauli.cocycle), "pauli ring class mismatch");
    require(p.worst_residual < 1e-10,
            "pauli residual " + fmt(p.worst_residual) + " above 1e-10");
    require(p.seconds < 1.0, "pauli extraction took " + fmt(p.seconds) + "s, budget 1s");
    const ExtractionReport c1 =
        extract_virtual_index(clock1.group, build_eps_mps(clock1), pair_site_rep(clock1));
    const ExtractionReport c2 =
        extract_virtual_index(clock2.group, build_eps_mps(clock2), pair_site_rep(clock2));
    require(!c1.cls.is_trivial() && !c2.cls.is_trivial(), "clock ring class trivial");
    require(!(c1.cls == c2.cls), "clock q=1 and q=2 classes collide");
    require(c1.cls == reduce_to_class(clock1.cocycle), "clock q=1 class mismatch");
    require(c2.cls == reduce_to_class(clock2.cocycle), "clock q=2 class mismatch");
    require(c1.worst_residual < 1e-10 && c2.worst_residual < 1e-10,
            "clock residual above 1e-10");
    require(c1.seconds < 1.0 && c2.seconds < 1.0, "clock extraction over 1s");
    return "pauli nontrivial, clock q=1,2 distinct; residuals " + fmt(p.worst_residual) +
           ", " + fmt(std::max(c1.worst_residual, c2.worst_residual));
  });

  criterion(3, "window route matrix", [&] {
    const auto t0 = clock_t_::now();
    double worst = 0.0;
    int cells = 0;
    auto run_cell = [&](const DenseState& psi, int w, const CohomologyClass& want,
                        const std::string& tag) {
      const ExtractionReport rep = extract_window_index(psi, Arc{0, psi.spec.N / 2}, w);
      require(rep.cls == want, tag + ": class " + rep.cls.label() + " want " + want.label());
      require(rep.worst_residual < 1e-8,
              tag + ": factorization residual " + fmt(rep.worst_residual));
      worst = std::max(worst, rep.worst_residual);
      ++cells;
    };
    const CohomologyClass pauli_cls = reduce_to_class(pauli.cocycle);
    for (int N : {6, 7, 8}) run_cell(build_eps_dense(pauli, N), 1, pauli_cls, "pauli pair");
    run_cell(build_eps_dense(clock1, 6), 1, reduce_to_class(clock1.cocycle), "clock q=1");
    run_cell(build_eps_dense(clock2, 6), 1, reduce_to_class(clock2.cocycle), "clock q=2");
    const CohomologyClass triv2 = reduce_to_class(Cocycle2::trivial(pauli.group));
    const CohomologyClass triv3 = reduce_to_class(Cocycle2::trivial(clock1.group));
    run_cell(invariant_product(pauli, 6), 1, triv2, "pauli product");
    run_cell(invariant_product(clock1, 6), 1, triv3, "clock product");
    // w=2 with arc N/2 needs N >= 10; the smallest admissible ring stands in for
    // the w=2 column of the matrix
    run_cell(build_eps_dense(pauli, 10), 2, pauli_cls, "pauli pair w=2");
    const double dt = seconds_since(t0);
    require(dt < 30.0, "matrix took " + fmt(dt) + "s, budget 30s");
    return std::to_string(cells) + " cells agree with the virtual route, worst residual " +
           fmt(worst);
  });

  criterion(4, "product-state triviality", [&] {
    double worst = 0.0;
    for (const ProjectiveRep* rho : {&pauli, &clock1}) {
      const ExtractionReport v = extract_virtual_index(
          rho->group, product_umps(bond_pair_vector(rho->dim)), pair_site_rep(*rho));
      require(v.cls.is_trivial(), "virtual route on a product ring not trivial");
      require(v.worst_residual < 1e-10, "virtual residual " + fmt(v.worst_residual));
      const ExtractionReport w =
          extract_window_index(invariant_product(*rho, 6), Arc{0, 3}, 1);
      require(w.cls.is_trivial(), "window route on a product ring not trivial");
      require(w.worst_residual < 1e-10, "window residual " + fmt(w.worst_residual));
      worst = std::max({worst, v.worst_residual, w.worst_residual});
    }
    return "both routes trivial on invariant product rings, worst residual " + fmt(worst);
  });

  criterion(5, "circuit invariance", [&] {
    // invariance and gate quality across fixtures x depths x seeds
    double worst_inv = 0.0, worst_gate = 0.0;
    const std::vector<std::pair<const ProjectiveRep*, bool>> fixtures{
        {&pauli, true}, {&clock1, true}, {&pauli, false}};
    for (const auto& [rho, eps] : fixtures) {
      const SiteSpec spec = pair_spec(*rho, 6);
      const DenseState base =
          eps ? build_eps_dense(*rho, 6) : invariant_product(*rho, 6);
      for (int depth = 0; depth <= 3; ++depth)
        for (int seed = 1; seed <= 5; ++seed) {
          const BrickworkCircuit c =
              build_brickwork(spec, depth, 100 * depth + seed);
          for (const auto& layer : c.layers)
            for (const auto& gate : layer) worst_gate = std::max(worst_gate, gate.residual);
          worst_inv = std::max(worst_inv,
                               state_invariance_residual(apply_circuit(base, c)));
        }
    }
    require(worst_gate <= 1e-9, "gate residual " + fmt(worst_gate));
    require(worst_inv <= 1e-9, "invariance drifted to " + fmt(worst_inv));

    // certified class preservation: depth-1 walls fit in w=2 on the smallest
    // ring whose arcs admit that window
    const CohomologyClass want = reduce_to_class(pauli.cocycle);
    const SiteSpec spec10 = pair_spec(pauli, 10);
    const DenseState eps10 = build_eps_dense(pauli, 10);
    for (int seed = 1; seed <= 5; ++seed) {
      const DenseState dressed =
          apply_circuit(eps10, build_brickwork(spec10, 1, 7000 + seed));
      const ExtractionReport rep = extract_window_index(dressed, Arc{0, 5}, 2);
      require(rep.cls == want, "dressed ring seed " + std::to_string(seed) + " class " +
                                   rep.cls.label() + " want " + want.label());
      require(rep.worst_residual < 1e-8,
              "dressed ring residual " + fmt(rep.worst_residual));
    }
    // deeper circuits leak out of every window this ring admits; record the
    // relaxed-guard outcome without letting it gate the criterion
    for (int depth : {2, 3}) {
      const DenseState dressed =
          apply_circuit(eps10, build_brickwork(spec10, depth, 8000 + depth));
      WindowOptions relaxed;
      relaxed.guard = 1.0;
      relaxed.snap_tol = 1e-2;
      relaxed.max_iter = 80;
      relaxed.attempts = 1;
      std::string note = "  note: depth " + std::to_string(depth) + " at w=2 (uncertified) ";
      try {
        const ExtractionReport rep = extract_window_index(dressed, Arc{0, 5}, 2, relaxed);
        note += "class " + rep.cls.label() + ", leak " + fmt(rep.worst_residual) +
                (rep.cls == want ? " (matches)" : " (MISMATCH)");
      } catch (const Error& e) {
        note += std::string("unresolved: ") + e.code();
      }
      notes.push_back(note);
    }

    // negative control: an unaveraged gate must be caught by the residual check
    const SiteSpec spec6 = pair_spec(pauli, 6);
    Rng rng(424242);
    Eigen::MatrixXcd m(16, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) m(i, j) = rng.cnormal();
    const double rogue = equivariance_residual(spec6, Arc{0, 2}, polar_unitary(m));
    require(rogue > 1e-3, "rogue gate slipped under the residual check: " + fmt(rogue));
    return "60 dressed rings invariant, 5 certified re-extractions match; rogue gate "
           "residual " +
           fmt(rogue);
  });

  criterion(6, "stacking and inverse", [&] {
    struct Pair {
      const ProjectiveRep *a, *b;
    };
    const auto cls = [&](const ProjectiveRep& r) { return reduce_to_class(r.cocycle); };
    for (const Pair& p : {Pair{&pauli, &pauli}, Pair{&clock1, &clock1},
                          Pair{&clock1, &clock2}, Pair{&clock2, &clock2}}) {
      const ExtractionReport rep = stacked_virtual_index(
          p.a->group, build_eps_mps(*p.a), pair_site_rep(*p.a), build_eps_mps(*p.b),
          pair_site_rep(*p.b));
      require(rep.cls == cls(*p.a).product(cls(*p.b)),
              "stacked class is not the product of the layers");
    }
    for (const ProjectiveRep* r : {&pauli, &clock1, &clock2}) {
      const ProjectiveRep dual = dual_rep(*r);
      const ExtractionReport rep =
          stacked_virtual_index(r->group, build_eps_mps(*r), pair_site_rep(*r),
                                build_eps_mps(dual), pair_site_rep(dual));
      require(rep.cls.is_trivial(), "ring stacked with its dual is not trivial");
    }
    return "4 stacked pairs follow the product law; all dual pairings trivial";
  });

  criterion(7, "entropy and decay analogs", [&] {
    // light cone: depth-d dressing of a product ring keeps interval entropy
    // below 2 d log(dmax) and schmidt rank below dmax^(2d), any interval
    const SiteSpec spec = pair_spec(pauli, 8);
    const DenseState prod = invariant_product(pauli, 8);
    const double logd = std::log(4.0);
    for (int depth = 0; depth <= 3; ++depth) {
      const DenseState dressed =
          apply_circuit(prod, build_brickwork(spec, depth, 31 + depth));
      for (int len = 1; len <= 4; ++len)
        for (int start : {0, 3}) {
          const auto spectrum = schmidt_spectrum(dressed, Arc{start, len});
          const double s = spectrum_entropy(spectrum);
          require(s <= 2.0 * depth * logd + 1e-9,
                  "entropy " + fmt(s) + " above the light-cone bound at depth " +
                      std::to_string(depth) + " len " + std::to_string(len));
          const long long rank =
              std::count_if(spectrum.begin(), spectrum.end(),
                            [](double l) { return l > 1e-12; });
          const double rank_bound = std::pow(4.0, 2.0 * depth);
          require(static_cast<double>(rank) <= rank_bound + 0.5,
                  "schmidt rank " + std::to_string(rank) + " above the bound");
        }
    }
    // pair rings: every proper interval carries exactly two cut pairs
    for (int len : {2, 3})
      require(std::abs(entanglement_entropy(build_eps_dense(pauli, 6), Arc{0, len}) -
                       2.0 * std::log(2.0)) < 1e-9,
              "pauli pair-ring interval entropy off 2 log 2");
    require(std::abs(entanglement_entropy(build_eps_dense(clock1, 6), Arc{0, 3}) -
                     2.0 * std::log(3.0)) < 1e-9,
            "clock pair-ring interval entropy off 2 log 3");
    // correlation bound against mutual information on all fixtures; the clock
    // ring uses single-site regions to keep the joint density dense-tractable
    const auto check_bound = [&](const DenseState& psi, const std::vector<int>& a,
                                 const std::vector<int>& b) {
      const CorrelationBound cb = correlation_bound_check(psi, a, b);
      require(cb.ok, "correlation bound violated: distance " + fmt(cb.distance) +
                         " bound " + fmt(cb.bound));
    };
    check_bound(build_eps_dense(pauli, 6), {0, 1}, {3, 4});
    check_bound(build_eps_dense(clock1, 6), {0}, {3});
    check_bound(invariant_product(pauli, 6), {0, 1}, {3, 4});
    return "light-cone entropy and rank bounds hold to depth 3; pair-ring entropies "
           "exact; correlation bounds hold";
  });

  criterion(8, "swindle demo", [&] {
    const ProjectiveRep doubled = tensor_rep(pauli, dual_rep(pauli));
    const SwindleResult sw = swindle_disentangler(doubled, 4);
    require(sw.circuit.depth == 2, "disentangler depth changed");
    double worst_purity = 0.0, worst_gate = 0.0;
    for (double p : sw.site_purity) worst_purity = std::max(worst_purity, std::abs(p - 1.0));
    for (const auto& layer : sw.circuit.layers)
      for (const auto& gate : layer) worst_gate = std::max(worst_gate, gate.residual);
    require(worst_purity < 1e-9, "site purity defect " + fmt(worst_purity));
    require(sw.invariance_residual < 1e-9,
            "output invariance " + fmt(sw.invariance_residual));
    require(worst_gate <= 1e-9, "gate residual " + fmt(worst_gate));
    return "doubled pauli ring flattened to invariant site vectors, purity defect " +
           fmt(worst_purity);
  });

  criterion(9, "determinism", [&] {
    const DenseState psi = build_eps_dense(pauli, 6);
    WindowOptions opt;
    opt.seed = 11;
    const std::string w1 = report_to_json(extract_window_index(psi, Arc{0, 3}, 1, opt), false).dump();
    const std::string w2 = report_to_json(extract_window_index(psi, Arc{0, 3}, 1, opt), false).dump();
    require(w1 == w2, "window route reports differ across identical runs");
    const std::string v1 =
        report_to_json(extract_virtual_index(pauli.group, build_eps_mps(pauli),
                                             pair_site_rep(pauli)),
                       false)
            .dump();
    const std::string v2 =
        report_to_json(extract_virtual_index(pauli.group, build_eps_mps(pauli),
                                             pair_site_rep(pauli)),
                       false)
            .dump();
    require(v1 == v2, "virtual route reports differ across identical runs");
    const SiteSpec spec = pair_spec(pauli, 6);
    const json c1 = circuit_to_json(build_brickwork(spec, 2, 77));
    const json c2 = circuit_to_json(build_brickwork(spec, 2, 77));
    require(c1.dump() == c2.dump(), "circuit sampling is not reproducible");
    return "window, virtual, and circuit outputs are bit-stable for fixed seeds";
  });

  for (const std::string& n : notes) std::printf("%s\n", n.c_str());
  if (failures == 0)
    std::printf("all 9 criteria hold\n");
  else
    std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main() {
  try {
    return run_all();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"code\":\"internal\",\"message\":\"%s\"}\n", e.what());
    return 1;
  }
}
