/*
 * JSON (and a small TOML subset) parsing of group, G-set, span, coefficient
 * system, module, and complex specs, plus stable serialization helpers for
 * the command line reports.
 */
#pragma once

#include "equik/coeff.hpp"
#include "equik/gcw.hpp"
#include "equik/module.hpp"
#include "equik/span.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace equik {

using Json = nlohmann::ordered_json;

struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// read a .json or .toml file into a json value (TOML subset: tables,
// integers, strings, booleans, arrays)
Json load_spec_file(const std::string& path);
Json toml_to_json(const std::string& text);

bool groups_isomorphic(const FiniteGroup& a, const FiniteGroup& b);
// catalog name when isomorphic to a catalog group, otherwise "G<order>"
std::string group_label(const FiniteGroup& g);
// one label per conjugacy class, e.g. "e", "C2", "C2#2", "S3"
std::vector<std::string> class_labels(const SubgroupLattice& lat);
// class index from a label (or a subgroup given as an element array)
int parse_class(const SubgroupLattice& lat, const Json& spec);
// subgroup index: label resolves to the class representative
int parse_subgroup(const SubgroupLattice& lat, const Json& spec);

// {"catalog": "S3"} | {"perm_generators": [[...]]} | "S3"
GroupPtr parse_group(const Json& spec);
// {"elements": n, "action": [[..]]} | {"orbit_of": "C2"} | {"orbits_of": [..]}
GSet parse_gset(LatticePtr lat, const Json& spec);
// {"H": .., "K": .., "middle": gset, "r": [..], "t": [..]} | {"unit": "H"}
// | {"transfer": ["H","K"]} | {"restriction": ["H","K"]}
Span parse_span(LatticePtr lat, const Json& spec);
// {"constant": true} | {"free_on": gset} | {"ranks": [..], "maps": [{...}]}
CoefficientSystem parse_system(LatticePtr lat, const Json& spec);
// complete a generating set of structure maps by composition, then validate
CoefficientSystem system_from_generators(LatticePtr lat, std::vector<int> ranks,
                                         std::map<MorKey, IMat> generators);
// {"vertices": gset, "simplices": [[..]]} | {"builtin": "octahedron_c2"}
GSimplicialComplex parse_complex(LatticePtr lat, const Json& spec);
// {"ring": "constant", "gset": .., "idempotent": [level matrices]}
ProjectiveModule parse_module(LatticePtr lat, const Json& spec);

Json json_of_matrix(const IMat& m);
IMat matrix_of_json(const Json& j);
Json json_of_marks_table(const SubgroupLattice& lat, const TableOfMarks& t);
Json json_of_burnside(const SubgroupLattice& lat, const BurnsideElement& b);
Json json_of_system(const SubgroupLattice& lat, const CoefficientSystem& m);
Json json_of_k0(const SubgroupLattice& lat, const K0ClassVector& v);

}  // namespace equik
