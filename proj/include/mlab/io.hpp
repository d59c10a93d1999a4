#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mlab/fpg_module.hpp"
#include "mlab/mackey.hpp"
#include "mlab/pgroup.hpp"
#include "mlab/tower.hpp"

namespace mlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "mackey-lab/1";

struct IoCaps {
    std::size_t order_cap = kDefaultOrderCap;
    std::size_t degree_cap = 8;
    std::size_t axiom_budget = kDefaultAxiomBudget;
    std::uint64_t seed = 0;
};

/// Reads a file ("-" = stdin). Throws SchemaError on parse failures, with the
/// source name in the message.
Json load_json(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);
std::string read_file_bytes(const std::string& path);

/// Group descriptions: {"schema":..., "p":q, "kind":"perm", "degree":d,
/// "generators":[[...],...]} or {"kind":"family","family":...,"params":{...}}.
PGroupPtr parse_group(const Json& j, const IoCaps& caps);

/// {"group": path-or-inline, "dim": d, "action": {"g0": [[...]...], ...}} or
/// the builtin shorthand {"group":..., "builtin": "trivial"|"regular"}.
/// base_dir resolves a relative group path.
FpGModule parse_module(const Json& j, const IoCaps& caps, const std::string& base_dir = ".");

/// Subgroup from a JSON array of element indices (closure is validated).
Subgroup parse_subgroup(const Json& j, const PGroupPtr& g);

/// {"stages":[group,...], "projections":[{"g0":"word", ...}, ...],
///  "tau": optional per-stage generator images, "sigma": optional words}.
Tower parse_tower(const Json& j, const IoCaps& caps);
bool tower_has_witness(const Json& j);
DirectionWitnessData parse_witness(const Json& j, const Tower& t);

/// Word in the generators of g: "g0*g1^2*g0^-1"; "" or "e" is the identity.
unsigned eval_word(const PGroupPtr& g, const std::string& word);

/// Functor descriptions:
///   {"kind":"T"|"upsilon","n":1,"group":...,"system":"all"|"normal"}
///   {"kind":"h0"|"h-lower","module":...,"k":...,"cap":...}
///   {"kind":"el","group":...}
///   {"kind":"induced","flavor":"T"|"upsilon","group":...,"subgroup":[...]}
///   {"kind":"dual","of":{...}}
///   {"kind":"cmf", ...}  (the serialized form below)
Cmf parse_functor(const Json& j, const IoCaps& caps, const std::string& base_dir = ".");

Json cmf_to_json(const Cmf& x);
Cmf cmf_from_json(const Json& j, const IoCaps& caps);

Json matrix_to_json(const FpMatrix& m);
FpMatrix matrix_from_json(const Json& j, std::uint32_t p);

/// Deterministic report envelope: schema, tool version, input digests, the
/// exact parameters, then results.
Json report_envelope(const std::string& command, const Json& inputs, const Json& params);

}  // namespace mlab
