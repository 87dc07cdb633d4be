#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "CLI11.hpp"
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

namespace {

using spt::json;

// "z6", "z2xz2", "d4", or a path to a group json file
spt::FiniteGroup parse_group(const std::string& s) {
  auto parse_factor = [](const std::string& t) -> std::optional<spt::FiniteGroup> {
    if (t.size() >= 2 && (t[0] == 'z' || t[0] == 'Z')) {
      const int n = std::atoi(t.c_str() + 1);
      if (n >= 1) return spt::cyclic_group(n);
    }
    if (t.size() >= 2 && (t[0] == 'd' || t[0] == 'D')) {
      const int m = std::atoi(t.c_str() + 1);
      if (m >= 1) return spt::dihedral_group(m);
    }
    return std::nullopt;
  };
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t x = s.find('x', pos);
    parts.push_back(s.substr(pos, x == std::string::npos ? x : x - pos));
    if (x == std::string::npos) break;
    pos = x + 1;
  }
  std::optional<spt::FiniteGroup> acc;
  for (const std::string& p : parts) {
    auto f = parse_factor(p);
    if (!f) {
      acc.reset();
      break;
    }
    acc = acc ? spt::direct_product(*acc, *f) : *f;
  }
  if (acc) return *acc;
  return spt::group_from_json(spt::read_json_file(s));
}

// "pauli", "clock:n:q", or a path to a rep json file
spt::ProjectiveRep parse_rep(const std::string& s) {
  if (s == "pauli") return spt::clock_shift_rep(2, 1);
  if (s.rfind("clock:", 0) == 0) {
    int n = 0, q = 0;
    if (std::sscanf(s.c_str(), "clock:%d:%d", &n, &q) == 2) return spt::clock_shift_rep(n, q);
    throw spt::Error(spt::errc::io_error, "rep spec must look like clock:n:q", s);
  }
  return spt::rep_from_json(spt::read_json_file(s));
}

std::vector<int> parse_sites(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

// site rep of the pair chain: Q (x) conj(Q) on every site
spt::SiteSpec eps_spec(const spt::ProjectiveRep& rep, int N) {
  std::vector<Eigen::MatrixXcd> site(rep.group.n);
  for (int g = 0; g < rep.group.n; ++g)
    site[g] = Eigen::kroneckerProduct(rep.q(g), rep.q(g).conjugate()).eval();
  return spt::uniform_site_spec(rep.group, N, rep.dim * rep.dim, site);
}

std::vector<Eigen::MatrixXcd> eps_site_rep(const spt::ProjectiveRep& rep) {
  std::vector<Eigen::MatrixXcd> site(rep.group.n);
  for (int g = 0; g < rep.group.n; ++g)
    site[g] = Eigen::kroneckerProduct(rep.q(g), rep.q(g).conjugate()).eval();
  return site;
}

// every report leaves with the tool version and the tolerance set in force
void emit(const json& in) {
  json j = in;
  if (j.is_object()) {
    if (!j.contains("tool_version")) j["tool_version"] = spt::kToolVersion;
    if (!j.contains("tolerances"))
      j["tolerances"] = json{{"cocycle_residual", 1e-9},
                             {"snap", 1e-6},
                             {"unitarity", 1e-8},
                             {"invariance", 1e-8}};
  }
  std::cout << j.dump(2) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"G-invariant ring states: build, dress, and classify"};
  app.require_subcommand(1);
  bool no_timing = false;
  app.add_flag("--no-timing", no_timing, "omit wall-clock fields from reports");

  // group
  auto* grp = app.add_subcommand("group", "group construction and checks");
  grp->require_subcommand(1);
  std::string g_spec, g_a, g_b, g_out;
  auto* g_validate = grp->add_subcommand("validate", "axiom scan and summary");
  g_validate->add_option("--group", g_spec)->required();
  auto* g_product = grp->add_subcommand("product", "direct product of two groups");
  g_product->add_option("--a", g_a)->required();
  g_product->add_option("--b", g_b)->required();
  g_product->add_option("-o,--out", g_out);
  int g_n = 0;
  auto* g_cyclic = grp->add_subcommand("cyclic", "cyclic group of order n");
  g_cyclic->add_option("--n", g_n)->required();
  g_cyclic->add_option("-o,--out", g_out);

  // cohomology
  auto* coh = app.add_subcommand("cohomology", "second cohomology over the circle group");
  coh->require_subcommand(1);
  std::string c_group, c_a, c_b;
  int c_bound = 12;
  auto* c_enum = coh->add_subcommand("enumerate", "classes and invariant factors");
  std::string c_rep_out;
  int c_rep_of = -1;
  c_enum->add_option("--group", c_group)->required();
  c_enum->add_option("--bound", c_bound, "largest group order accepted");
  c_enum->add_option("--rep-of", c_rep_of, "write the representative cocycle of this class index");
  c_enum->add_option("-o,--out", c_rep_out, "file for --rep-of");
  auto* c_cmp = coh->add_subcommand("compare", "same-class test for two cocycle files");
  c_cmp->add_option("--a", c_a)->required();
  c_cmp->add_option("--b", c_b)->required();

  // rep
  auto* rep = app.add_subcommand("rep", "projective representations");
  rep->require_subcommand(1);
  int r_n = 0, r_q = 0;
  std::string r_out, r_cocycle, r_rep;
  auto* r_clock = rep->add_subcommand("clock-shift", "clock and shift rep of Z_n x Z_n");
  r_clock->add_option("--n", r_n)->required();
  r_clock->add_option("--q", r_q)->required();
  r_clock->add_option("-o,--out", r_out);
  auto* r_regular = rep->add_subcommand("regular", "twisted regular rep of a cocycle");
  r_regular->add_option("--cocycle", r_cocycle)->required();
  r_regular->add_option("-o,--out", r_out);
  auto* r_of = rep->add_subcommand("cocycle-of", "cocycle realized by a rep file");
  r_of->add_option("--rep", r_rep)->required();

  // state
  auto* st = app.add_subcommand("state", "dense ring states");
  st->require_subcommand(1);
  std::string s_rep, s_out, s_state, s_vector = "invariant";
  int s_sites = 0;
  auto* s_eps = st->add_subcommand("build-eps", "entangled-pair state of a rep");
  s_eps->add_option("--rep", s_rep)->required();
  s_eps->add_option("--sites", s_sites)->required();
  s_eps->add_option("--out", s_out)->required();
  auto* s_prod = st->add_subcommand("build-product", "site-product state on the pair chain");
  s_prod->add_option("--rep", s_rep)->required();
  s_prod->add_option("--sites", s_sites)->required();
  s_prod->add_option("--out", s_out)->required();
  s_prod->add_option("--vector", s_vector, "'invariant' or e:<basis index>");
  auto* s_info = st->add_subcommand("info", "norm, invariance, and shape");
  s_info->add_option("--state", s_state)->required();

  // index
  auto* ix = app.add_subcommand("index", "cohomology class extraction");
  ix->require_subcommand(1);
  std::string i_rep, i_rep_b, i_state;
  int i_arc_start = 0, i_arc_len = 0, i_window = 1;
  double i_guard = 1e-3, i_snap = 1e-6;
  std::uint64_t i_seed = 1;
  auto* i_mps = ix->add_subcommand("extract-mps", "virtual action route on the pair state");
  i_mps->add_option("--rep", i_rep)->required();
  i_mps->add_option("--snap-tol", i_snap);
  auto* i_win = ix->add_subcommand("extract-window", "windowed wall route on a dense state");
  i_win->add_option("--state", i_state)->required();
  i_win->add_option("--arc-start", i_arc_start)->required();
  i_win->add_option("--arc-len", i_arc_len)->required();
  i_win->add_option("--window", i_window)->required();
  i_win->add_option("--guard", i_guard);
  i_win->add_option("--snap-tol", i_snap);
  i_win->add_option("--seed", i_seed);
  auto* i_cmp = ix->add_subcommand("compare", "run both routes and test class equality");
  i_cmp->add_option("--state", i_state)->required();
  i_cmp->add_option("--rep", i_rep)->required();
  i_cmp->add_option("--arc-start", i_arc_start)->required();
  i_cmp->add_option("--arc-len", i_arc_len)->required();
  i_cmp->add_option("--window", i_window)->required();
  i_cmp->add_option("--guard", i_guard);
  i_cmp->add_option("--snap-tol", i_snap);
  i_cmp->add_option("--seed", i_seed);
  auto* i_stack = ix->add_subcommand("stack", "class of the stacked pair chains");
  i_stack->add_option("--rep-a", i_rep)->required();
  i_stack->add_option("--rep-b", i_rep_b)->required();

  // circuit
  auto* cc = app.add_subcommand("circuit", "equivariant brickwork circuits");
  cc->require_subcommand(1);
  std::string cc_rep, cc_out, cc_state, cc_circuit;
  int cc_sites = 0, cc_depth = 1, cc_seeds = 3, cc_window = 0;
  std::uint64_t cc_seed = 1;
  bool cc_inject = false;
  auto* cc_sample = cc->add_subcommand("sample", "draw a brickwork circuit");
  cc_sample->add_option("--rep", cc_rep)->required();
  cc_sample->add_option("--sites", cc_sites)->required();
  cc_sample->add_option("--depth", cc_depth)->required();
  cc_sample->add_option("--seed", cc_seed);
  cc_sample->add_option("--out", cc_out)->required();
  auto* cc_apply = cc->add_subcommand("apply", "apply a circuit file to a state");
  cc_apply->add_option("--state", cc_state)->required();
  cc_apply->add_option("--circuit", cc_circuit)->required();
  cc_apply->add_option("--out", cc_out)->required();
  auto* cc_suite = cc->add_subcommand("invariance-suite",
                                      "dress the pair state over seeds and re-extract");
  cc_suite->add_option("--rep", cc_rep)->required();
  cc_suite->add_option("--sites", cc_sites)->required();
  cc_suite->add_option("--depth", cc_depth)->required();
  cc_suite->add_option("--seeds", cc_seeds);
  cc_suite->add_option("--window", cc_window, "re-extract through this window if > 0");
  cc_suite->add_flag("--inject-defect", cc_inject, "swap in a non-equivariant gate");

  // diag
  auto* dg = app.add_subcommand("diag", "entanglement diagnostics");
  dg->require_subcommand(1);
  std::string d_state, d_ra, d_rb;
  int d_start = 0, d_len = 0, d_tail = 1;
  bool d_csv = false;
  auto* d_entropy = dg->add_subcommand("entropy", "cut entropy and tail weights");
  d_entropy->add_option("--state", d_state)->required();
  d_entropy->add_option("--cut-start", d_start)->required();
  d_entropy->add_option("--cut-len", d_len)->required();
  d_entropy->add_option("--tail", d_tail);
  auto* d_schmidt = dg->add_subcommand("schmidt", "cut spectrum");
  d_schmidt->add_option("--state", d_state)->required();
  d_schmidt->add_option("--cut-start", d_start)->required();
  d_schmidt->add_option("--cut-len", d_len)->required();
  d_schmidt->add_flag("--csv", d_csv);
  auto* d_mi = dg->add_subcommand("mutual-info", "two-region correlation bound");
  d_mi->add_option("--state", d_state)->required();
  d_mi->add_option("--region-a", d_ra)->required();
  d_mi->add_option("--region-b", d_rb)->required();

  // demo
  auto* dm = app.add_subcommand("demo", "worked demonstrations");
  dm->require_subcommand(1);
  std::string dm_rep;
  int dm_sites = 4;
  auto* dm_swindle = dm->add_subcommand(
      "swindle", "disentangle rep (x) dual pair state with a depth-2 circuit");
  dm_swindle->add_option("--rep", dm_rep)->required();
  dm_swindle->add_option("--sites", dm_sites);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (g_validate->parsed()) {
    const spt::FiniteGroup g = parse_group(g_spec);
    const spt::GroupCheck ck = spt::validate_group(g);
    json orders = json::array();
    for (int x = 0; x < g.n; ++x) orders.push_back(spt::element_order(g, x));
    emit(json{{"order", g.n},
              {"ok", ck.ok},
              {"violation", ck.violation},
              {"abelian", spt::is_abelian(g)},
              {"element_orders", std::move(orders)}});
  } else if (g_product->parsed()) {
    const json j = spt::group_to_json(spt::direct_product(parse_group(g_a), parse_group(g_b)));
    if (g_out.empty()) emit(j); else spt::write_json_file(g_out, j);
  } else if (g_cyclic->parsed()) {
    const json j = spt::group_to_json(spt::cyclic_group(g_n));
    if (g_out.empty()) emit(j); else spt::write_json_file(g_out, j);
  } else if (c_enum->parsed()) {
    const spt::H2Result h2 = spt::enumerate_h2(parse_group(c_group), c_bound);
    if (c_rep_of >= 0) {
      if (c_rep_of >= static_cast<int>(h2.classes.size()))
        throw spt::Error(spt::errc::bound_exceeded, "class index out of range",
                         std::to_string(c_rep_of) + " of " + std::to_string(h2.classes.size()));
      const json j = spt::cocycle_to_json(h2.classes[c_rep_of].representative());
      if (c_rep_out.empty()) emit(j); else spt::write_json_file(c_rep_out, j);
    } else {
      json classes = json::array();
      for (const auto& c : h2.classes) classes.push_back(spt::class_to_json(c));
      emit(json{{"order", h2.order()},
                {"modulus", h2.modulus},
                {"invariants", h2.invariants},
                {"classes", std::move(classes)}});
    }
  } else if (c_cmp->parsed()) {
    const spt::Cocycle2 a = spt::cocycle_from_json(spt::read_json_file(c_a));
    const spt::Cocycle2 b = spt::cocycle_from_json(spt::read_json_file(c_b));
    const spt::CohomologyClass ca = spt::reduce_to_class(a), cb = spt::reduce_to_class(b);
    const spt::CoboundaryResult r = spt::is_coboundary(spt::stack(a, spt::inverse_cocycle(b)));
    json j{{"a", ca.label()}, {"b", cb.label()}, {"same_class", r.yes}};
    if (r.witness) {
      json w{{"denominator", r.witness->den}, {"numerators", r.witness->num}};
      j["witness"] = std::move(w);
    }
    emit(j);
  } else if (r_clock->parsed()) {
    const json j = spt::rep_to_json(spt::clock_shift_rep(r_n, r_q));
    if (r_out.empty()) emit(j); else spt::write_json_file(r_out, j);
  } else if (r_regular->parsed()) {
    const spt::Cocycle2 nu =
        spt::normalize_gauge(spt::cocycle_from_json(spt::read_json_file(r_cocycle)));
    const json j = spt::rep_to_json(spt::twisted_regular_rep(nu));
    if (r_out.empty()) emit(j); else spt::write_json_file(r_out, j);
  } else if (r_of->parsed()) {
    const spt::ProjectiveRep r = parse_rep(r_rep);
    const spt::Cocycle2 nu = spt::cocycle_of_rep(r.group, r.mats);
    json j{{"cocycle", spt::cocycle_to_json(nu)},
           {"irreducible", spt::is_irreducible(r)},
           {"class", nullptr}};
    try {
      const spt::SnapResult snap = spt::snap_to_roots(nu, r.group.n);
      j["class"] = spt::reduce_to_class(snap.snapped).label();
      j["snap_error"] = snap.max_error;
    } catch (const spt::Error&) {
      // cocycle sits in an off-root gauge; class left null
    }
    emit(j);
  } else if (s_eps->parsed()) {
    const spt::ProjectiveRep r = parse_rep(s_rep);
    spt::save_state(spt::build_eps_dense(r, s_sites), s_out);
    emit(json{{"written", s_out}, {"sites", s_sites}, {"site_dim", r.dim * r.dim}});
  } else if (s_prod->parsed()) {
    const spt::ProjectiveRep r = parse_rep(s_rep);
    const spt::SiteSpec spec = eps_spec(r, s_sites);
    const int d = r.dim * r.dim;
    Eigen::VectorXcd v;
    if (s_vector == "invariant") {
      v = Eigen::VectorXcd::Zero(d);
      for (int m = 0; m < r.dim; ++m) v(m * r.dim + m) = 1.0;
      v.normalize();
    } else if (s_vector.rfind("e:", 0) == 0) {
      const int k = std::atoi(s_vector.c_str() + 2);
      if (k < 0 || k >= d)
        throw spt::Error(spt::errc::dimension_mismatch, "basis index out of range", s_vector);
      v = Eigen::VectorXcd::Zero(d);
      v(k) = 1.0;
    } else {
      throw spt::Error(spt::errc::io_error, "vector must be 'invariant' or e:<k>", s_vector);
    }
    spt::ProductReport prep;
    const spt::DenseState psi =
        spt::build_product_state(spec, std::vector<Eigen::VectorXcd>(s_sites, v), &prep);
    spt::save_state(psi, s_out);
    json inv = json::array();
    for (bool b : prep.invariant) inv.push_back(b);
    emit(json{{"written", s_out},
              {"invariant", std::move(inv)},
              {"max_character_residual", prep.max_character_residual}});
  } else if (s_info->parsed()) {
    const spt::DenseState psi = spt::load_state(s_state);
    json ov = json::array();
    for (int x = 0; x < psi.spec.group.n; ++x)
      ov.push_back(std::abs(spt::overlap(psi, spt::apply_symmetry(psi, x))));
    emit(json{{"sites", psi.spec.N},
              {"dims", psi.spec.dims},
              {"group_order", psi.spec.group.n},
              {"norm", psi.amp.norm()},
              {"invariance_overlap", std::move(ov)}});
  } else if (i_mps->parsed()) {
    const spt::ProjectiveRep r = parse_rep(i_rep);
    spt::VirtualOptions opt;
    opt.snap_tol = i_snap;
    const spt::ExtractionReport rep_out =
        spt::extract_virtual_index(r.group, spt::build_eps_mps(r), eps_site_rep(r), opt);
    emit(spt::report_to_json(rep_out, !no_timing));
  } else if (i_win->parsed()) {
    const spt::DenseState psi = spt::load_state(i_state);
    spt::WindowOptions opt;
    opt.guard = i_guard;
    opt.snap_tol = i_snap;
    opt.seed = i_seed;
    const spt::ExtractionReport rep_out =
        spt::extract_window_index(psi, spt::Arc{i_arc_start, i_arc_len}, i_window, opt);
    emit(spt::report_to_json(rep_out, !no_timing));
  } else if (i_cmp->parsed()) {
    const spt::DenseState psi = spt::load_state(i_state);
    const spt::ProjectiveRep r = parse_rep(i_rep);
    spt::WindowOptions wopt;
    wopt.guard = i_guard;
    wopt.snap_tol = i_snap;
    wopt.seed = i_seed;
    const spt::ExtractionReport wrep =
        spt::extract_window_index(psi, spt::Arc{i_arc_start, i_arc_len}, i_window, wopt);
    const spt::ExtractionReport vrep =
        spt::extract_virtual_index(r.group, spt::build_eps_mps(r), eps_site_rep(r), {});
    const spt::RouteComparison cmp = spt::compare_routes(wrep, vrep);
    json j{{"window", spt::report_to_json(wrep, !no_timing)},
           {"virtual", spt::report_to_json(vrep, !no_timing)},
           {"same_class", cmp.same_class}};
    if (cmp.witness) {
      j["witness"] =
          json{{"denominator", cmp.witness->den}, {"numerators", cmp.witness->num}};
    }
    emit(j);
  } else if (i_stack->parsed()) {
    const spt::ProjectiveRep ra = parse_rep(i_rep), rb = parse_rep(i_rep_b);
    if (!(ra.group == rb.group))
      throw spt::Error(spt::errc::group_mismatch, "stacked reps must share the group");
    const spt::ExtractionReport rep_a =
        spt::extract_virtual_index(ra.group, spt::build_eps_mps(ra), eps_site_rep(ra), {});
    const spt::ExtractionReport rep_b =
        spt::extract_virtual_index(rb.group, spt::build_eps_mps(rb), eps_site_rep(rb), {});
    const spt::ExtractionReport rep_ab = spt::stacked_virtual_index(
        ra.group, spt::build_eps_mps(ra), eps_site_rep(ra), spt::build_eps_mps(rb),
        eps_site_rep(rb), {});
    const bool product_matches = rep_ab.cls == rep_a.cls.product(rep_b.cls);
    emit(json{{"a", spt::report_to_json(rep_a, !no_timing)},
              {"b", spt::report_to_json(rep_b, !no_timing)},
              {"stacked", spt::report_to_json(rep_ab, !no_timing)},
              {"product_matches", product_matches}});
  } else if (cc_sample->parsed()) {
    const spt::ProjectiveRep r = parse_rep(cc_rep);
    const spt::BrickworkCircuit c = spt::build_brickwork(eps_spec(r, cc_sites), cc_depth, cc_seed);
    spt::write_json_file(cc_out, spt::circuit_to_json(c));
    double worst = 0.0;
    for (const auto& layer : c.layers)
      for (const auto& gate : layer) worst = std::max(worst, gate.residual);
    emit(json{{"written", cc_out}, {"depth", c.depth}, {"worst_gate_residual", worst}});
  } else if (cc_apply->parsed()) {
    const spt::DenseState psi = spt::load_state(cc_state);
    const spt::BrickworkCircuit c = spt::circuit_from_json(spt::read_json_file(cc_circuit));
    spt::save_state(spt::apply_circuit(psi, c), cc_out);
    emit(json{{"written", cc_out}});
  } else if (cc_suite->parsed()) {
    const spt::ProjectiveRep r = parse_rep(cc_rep);
    const spt::SiteSpec spec = eps_spec(r, cc_sites);
    const spt::DenseState eps = spt::build_eps_dense(r, cc_sites);
    const spt::ExtractionReport pristine =
        spt::extract_virtual_index(r.group, spt::build_eps_mps(r), eps_site_rep(r), {});
    json runs = json::array();
    bool all_ok = true;
    for (int s = 0; s < cc_seeds; ++s) {
      spt::BrickworkCircuit c = spt::build_brickwork(spec, cc_depth, 1000 + s);
      double worst_gate = 0.0;
      for (const auto& layer : c.layers)
        for (const auto& gate : layer) worst_gate = std::max(worst_gate, gate.residual);
      bool defect_detected = false;
      if (cc_inject) {
        // non-equivariant replacement: polar of a raw Ginibre draw
        spt::Rng rng(999 + s);
        const spt::Arc win = c.layers[0][0].window;
        long long dw = 1;
        for (int site : win.sites(spec.N)) dw *= spec.dims[site];
        Eigen::MatrixXcd m(dw, dw);
        for (long long a = 0; a < dw; ++a)
          for (long long b = 0; b < dw; ++b) m(a, b) = rng.cnormal();
        c.layers[0][0].u = spt::polar_unitary(m);
        c.layers[0][0].residual = spt::equivariance_residual(spec, win, c.layers[0][0].u);
        defect_detected = c.layers[0][0].residual > 1e-6;
        worst_gate = std::max(worst_gate, c.layers[0][0].residual);
      }
      const spt::DenseState dressed = spt::apply_circuit(eps, c);
      double inv_residual = 0.0;
      for (int x = 0; x < spec.group.n; ++x)
        inv_residual = std::max(
            inv_residual,
            std::abs(1.0 - std::abs(spt::overlap(dressed, spt::apply_symmetry(dressed, x)))));
      json run{{"seed", 1000 + s},
               {"worst_gate_residual", worst_gate},
               {"invariance_residual", inv_residual}};
      if (cc_inject) run["defect_detected"] = defect_detected;
      if (cc_window > 0 && !cc_inject) {
        const spt::ExtractionReport wrep = spt::extract_window_index(
            dressed, spt::Arc{0, cc_sites / 2}, cc_window, spt::WindowOptions{});
        run["class"] = wrep.cls.label();
        run["matches_pristine"] = wrep.cls == pristine.cls;
        all_ok = all_ok && (wrep.cls == pristine.cls);
      }
      all_ok = all_ok && (cc_inject ? defect_detected : inv_residual < 1e-8);
      runs.push_back(std::move(run));
    }
    emit(json{{"pristine_class", pristine.cls.label()},
              {"runs", std::move(runs)},
              {"all_ok", all_ok}});
  } else if (d_entropy->parsed()) {
    const spt::DenseState psi = spt::load_state(d_state);
    const auto spectrum = spt::schmidt_spectrum(psi, spt::Arc{d_start, d_len});
    emit(json{{"entropy", spt::spectrum_entropy(spectrum)},
              {"tail_index", d_tail},
              {"tail", spt::schmidt_tail(spectrum, d_tail)},
              {"rank", static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(),
                                                      [](double l) { return l > 1e-12; }))}});
  } else if (d_schmidt->parsed()) {
    const spt::DenseState psi = spt::load_state(d_state);
    const auto spectrum = spt::schmidt_spectrum(psi, spt::Arc{d_start, d_len});
    if (d_csv) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < spectrum.size(); ++i)
        rows.push_back({static_cast<double>(i), spectrum[i]});
      std::cout << spt::to_csv({"index", "weight"}, rows);
    } else {
      emit(json{{"spectrum", spectrum}});
    }
  } else if (d_mi->parsed()) {
    const spt::DenseState psi = spt::load_state(d_state);
    const spt::CorrelationBound cb =
        spt::correlation_bound_check(psi, parse_sites(d_ra), parse_sites(d_rb));
    emit(json{{"mutual_info", cb.mutual_info},
              {"distance", cb.distance},
              {"bound", cb.bound},
              {"ok", cb.ok}});
  } else if (dm_swindle->parsed()) {
    const spt::ProjectiveRep r = parse_rep(dm_rep);
    const spt::ProjectiveRep doubled = spt::tensor_rep(r, spt::dual_rep(r));
    const spt::DenseState before = spt::build_eps_dense(doubled, dm_sites);
    const double entropy_before =
        spt::entanglement_entropy(before, spt::Arc{0, dm_sites / 2});
    const spt::SwindleResult sw = spt::swindle_disentangler(doubled, dm_sites);
    const double entropy_after =
        spt::entanglement_entropy(sw.output, spt::Arc{0, dm_sites / 2});
    double worst_gate = 0.0;
    for (const auto& layer : sw.circuit.layers)
      for (const auto& gate : layer) worst_gate = std::max(worst_gate, gate.residual);
    emit(json{{"entropy_before", entropy_before},
              {"entropy_after", entropy_after},
              {"site_purity", sw.site_purity},
              {"invariance_residual", sw.invariance_residual},
              {"worst_gate_residual", worst_gate}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const spt::Error& e) {
    json j{{"code", e.code()}, {"message", e.what()}};
    if (!e.context().empty()) j["context"] = e.context();
    std::cerr << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"code", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
