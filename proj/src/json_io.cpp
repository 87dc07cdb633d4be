#include "spt/json_io.hpp"

#include <bit>
#include <fstream>

#include "spt/error.hpp"

namespace spt {

namespace {

constexpr int kFormatVersion = 1;

json mat_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (long long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long long c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(errc::io_error, "matrix must be a nested array");
  const long long rows = static_cast<long long>(j.size());
  const long long cols = static_cast<long long>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    if (static_cast<long long>(j[r].size()) != cols)
      throw Error(errc::io_error, "ragged matrix rows");
    for (long long c = 0; c < cols; ++c)
      m(r, c) = {j[r][c][0].get<double>(), j[r][c][1].get<double>()};
  }
  return m;
}

json spec_to_json(const SiteSpec& spec) {
  json sites = json::array();
  for (int s = 0; s < spec.N; ++s) {
    json reps = json::array();
    for (int g = 0; g < spec.group.n; ++g) reps.push_back(mat_to_json(spec.rep(s, g)));
    sites.push_back(std::move(reps));
  }
  return json{{"group", group_to_json(spec.group)},
              {"dims", spec.dims},
              {"site_rep", std::move(sites)}};
}

SiteSpec spec_from_json(const json& j) {
  FiniteGroup g = group_from_json(j.at("group"));
  std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  std::vector<std::vector<Eigen::MatrixXcd>> site_rep;
  for (const json& site : j.at("site_rep")) {
    std::vector<Eigen::MatrixXcd> reps;
    for (const json& m : site) reps.push_back(mat_from_json(m));
    site_rep.push_back(std::move(reps));
  }
  return make_site_spec(std::move(g), std::move(dims), std::move(site_rep));
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, "cannot open file", path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw Error(errc::io_error, std::string("json parse failed: ") + e.what(), path);
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(errc::io_error, "cannot open file for writing", path);
  out << j.dump(2) << "\n";
  if (!out) throw Error(errc::io_error, "write failed", path);
}

json group_to_json(const FiniteGroup& g) {
  json j{{"version", kFormatVersion},
         {"order", g.n},
         {"identity", g.identity},
         {"table", g.table}};
  if (static_cast<int>(g.labels.size()) == g.n) j["labels"] = g.labels;
  return j;
}

FiniteGroup group_from_json(const json& j) {
  try {
    const int n = j.at("order").get<int>();
    std::vector<int> table = j.at("table").get<std::vector<int>>();
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    const int identity = j.value("identity", 0);
    return canonicalize_identity(identity, n, table, std::move(labels));
  } catch (const json::exception& e) {
    throw Error(errc::io_error, std::string("bad group json: ") + e.what());
  }
}

json cocycle_to_json(const Cocycle2& nu) {
  json j{{"version", kFormatVersion}, {"group", group_to_json(nu.group)}};
  if (nu.mode == PhaseMode::Exact) {
    j["mode"] = "exact";
    j["denominator"] = nu.den;
    j["numerators"] = nu.num;
  } else {
    j["mode"] = "float";
    j["values"] = mat_to_json(nu.vals);
  }
  return j;
}

Cocycle2 cocycle_from_json(const json& j) {
  try {
    FiniteGroup g = group_from_json(j.at("group"));
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "exact")
      return Cocycle2::exact(std::move(g), j.at("denominator").get<long long>(),
                             j.at("numerators").get<std::vector<long long>>());
    if (mode == "float") return Cocycle2::from_floats(std::move(g), mat_from_json(j.at("values")));
    throw Error(errc::io_error, "unknown cocycle mode", mode);
  } catch (const json::exception& e) {
    throw Error(errc::io_error, std::string("bad cocycle json: ") + e.what());
  }
}

json rep_to_json(const ProjectiveRep& r) {
  json mats = json::array();
  for (const auto& m : r.mats) mats.push_back(mat_to_json(m));
  return json{{"version", kFormatVersion},
              {"group", group_to_json(r.group)},
              {"dim", r.dim},
              {"mats", std::move(mats)},
              {"cocycle", cocycle_to_json(r.cocycle)}};
}

ProjectiveRep rep_from_json(const json& j) {
  try {
    FiniteGroup g = group_from_json(j.at("group"));
    std::vector<Eigen::MatrixXcd> mats;
    for (const json& m : j.at("mats")) mats.push_back(mat_from_json(m));
    std::optional<Cocycle2> nu;
    if (j.contains("cocycle")) nu = cocycle_from_json(j.at("cocycle"));
    return make_projective_rep(std::move(g), std::move(mats), std::move(nu));
  } catch (const json::exception& e) {
    throw Error(errc::io_error, std::string("bad rep json: ") + e.what());
  }
}

json class_to_json(const CohomologyClass& c) {
  json j{{"label", c.label()},
         {"invariants", c.invariants},
         {"coords", c.coords},
         {"denominator", c.den},
         {"representative", c.rep},
         {"trivial", c.is_trivial()}};
  if (!c.beta.empty()) {
    j["beta_denominator"] = c.beta_den;
    j["beta"] = c.beta;
  }
  return j;
}

void save_state(const DenseState& psi, const std::string& base) {
  static_assert(std::endian::native == std::endian::little,
                "state payloads are written little-endian");
  json header{{"version", kFormatVersion},
              {"encoding", "complex128-le"},
              {"count", psi.amp.size()},
              {"spec", spec_to_json(psi.spec)}};
  write_json_file(base + ".json", header);
  std::ofstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw Error(errc::io_error, "cannot open file for writing", base + ".bin");
  bin.write(reinterpret_cast<const char*>(psi.amp.data()),
            static_cast<std::streamsize>(sizeof(std::complex<double>) * psi.amp.size()));
  if (!bin) throw Error(errc::io_error, "write failed", base + ".bin");
}

DenseState load_state(const std::string& base) {
  const json header = read_json_file(base + ".json");
  try {
    if (header.at("encoding").get<std::string>() != "complex128-le")
      throw Error(errc::io_error, "unknown state encoding");
    SiteSpec spec = spec_from_json(header.at("spec"));
    const long long count = header.at("count").get<long long>();
    if (count != spec.total_dim())
      throw Error(errc::io_error, "state header count does not match the site dims");
    Eigen::VectorXcd amp(count);
    std::ifstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw Error(errc::io_error, "cannot open file", base + ".bin");
    bin.read(reinterpret_cast<char*>(amp.data()),
             static_cast<std::streamsize>(sizeof(std::complex<double>) * count));
    if (bin.gcount() != static_cast<std::streamsize>(sizeof(std::complex<double>) * count))
      throw Error(errc::io_error, "state payload is truncated", base + ".bin");
    return make_dense_state(std::move(spec), std::move(amp));
  } catch (const json::exception& e) {
    throw Error(errc::io_error, std::string("bad state header: ") + e.what());
  }
}

json circuit_to_json(const BrickworkCircuit& c) {
  json layers = json::array();
  for (const auto& layer : c.layers) {
    json gates = json::array();
    for (const auto& gate : layer)
      gates.push_back(json{{"start", gate.window.start},
                           {"len", gate.window.len},
                           {"matrix", mat_to_json(gate.u)},
                           {"residual", gate.residual}});
    layers.push_back(std::move(gates));
  }
  return json{{"version", kFormatVersion}, {"depth", c.depth}, {"layers", std::move(layers)}};
}

BrickworkCircuit circuit_from_json(const json& j) {
  try {
    BrickworkCircuit c;
    c.depth = j.at("depth").get<int>();
    for (const json& layer : j.at("layers")) {
      std::vector<EquivariantGate> gates;
      for (const json& jg : layer) {
        EquivariantGate gate;
        gate.window = Arc{jg.at("start").get<int>(), jg.at("len").get<int>()};
        gate.u = mat_from_json(jg.at("matrix"));
        gate.residual = jg.value("residual", 0.0);
        gates.push_back(std::move(gate));
      }
      c.layers.push_back(std::move(gates));
    }
    if (c.depth != static_cast<int>(c.layers.size()))
      throw Error(errc::io_error, "circuit depth does not match the layer count");
    return c;
  } catch (const json::exception& e) {
    throw Error(errc::io_error, std::string("bad circuit json: ") + e.what());
  }
}

json report_to_json(const ExtractionReport& r, bool with_timing) {
  json j{{"version", kFormatVersion},
         {"tool_version", kToolVersion},
         {"route", r.route},
         {"class", class_to_json(r.cls)},
         {"measured", cocycle_to_json(r.nu_raw)},
         {"exact_table", cocycle_to_json(r.nu_exact)},
         {"beta_fallback", r.beta_fallback},
         {"snap_error", r.snap_error},
         {"cocycle_residual", r.cocycle_residual},
         {"worst_defect", r.worst_defect},
         {"worst_residual", r.worst_residual},
         {"tolerances", r.tolerances}};
  if (r.route == "window") {
    j["split_condition"] = r.split_condition;
    j["window"] = r.window;
    j["arc"] = json{{"start", r.arc.start}, {"len", r.arc.len}};
  }
  if (with_timing) j["seconds"] = r.seconds;
  return j;
}

}  // namespace spt
