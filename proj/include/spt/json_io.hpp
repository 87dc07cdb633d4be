#pragma once

#include <string>

#include "../../vendor/json.hpp"
#include "spt/chain.hpp"
#include "spt/circuits.hpp"
#include "spt/cocycle.hpp"
#include "spt/extraction.hpp"
#include "spt/group.hpp"
#include "spt/projective.hpp"

namespace spt {

using json = nlohmann::json;

// Semantic version of the tool; stamped on every report for provenance.
inline constexpr const char* kToolVersion = "0.3.0";

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// {order, identity, table, labels?}; the loader relabels so the identity
// lands at index 0.
json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const json& j);

json cocycle_to_json(const Cocycle2& nu);
Cocycle2 cocycle_from_json(const json& j);

json rep_to_json(const ProjectiveRep& r);
ProjectiveRep rep_from_json(const json& j);

json class_to_json(const CohomologyClass& c);

// Dense states split into a JSON header and a raw little-endian complex128
// payload, site-major: writes <base>.json and <base>.bin.
void save_state(const DenseState& psi, const std::string& base);
DenseState load_state(const std::string& base);

json circuit_to_json(const BrickworkCircuit& c);
BrickworkCircuit circuit_from_json(const json& j);

// with_timing=false drops wall-clock fields so reruns are byte-identical
json report_to_json(const ExtractionReport& r, bool with_timing = true);

}  // namespace spt
