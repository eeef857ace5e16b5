#include "equik/jsonio.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace equik {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// parse one TOML value (integer, string, boolean, possibly nested array)
Json toml_value(const std::string& text, size_t& at) {
    while (at < text.size() && (text[at] == ' ' || text[at] == '\t')) ++at;
    if (at >= text.size()) throw SpecError("toml: missing value");
    char c = text[at];
    if (c == '[') {
        ++at;
        Json arr = Json::array();
        for (;;) {
            while (at < text.size() && (text[at] == ' ' || text[at] == '\t')) ++at;
            if (at < text.size() && text[at] == ']') {
                ++at;
                break;
            }
            arr.push_back(toml_value(text, at));
            while (at < text.size() && (text[at] == ' ' || text[at] == '\t')) ++at;
            if (at < text.size() && text[at] == ',') {
                ++at;
                continue;
            }
            if (at < text.size() && text[at] == ']') {
                ++at;
                break;
            }
            throw SpecError("toml: malformed array");
        }
        return arr;
    }
    if (c == '"') {
        size_t end = text.find('"', at + 1);
        if (end == std::string::npos) throw SpecError("toml: unterminated string");
        Json v = text.substr(at + 1, end - at - 1);
        at = end + 1;
        return v;
    }
    size_t end = at;
    while (end < text.size() && text[end] != ',' && text[end] != ']' && text[end] != ' ' &&
           text[end] != '\t' && text[end] != '\n')
        ++end;
    std::string tok = text.substr(at, end - at);
    at = end;
    if (tok == "true") return true;
    if (tok == "false") return false;
    try {
        size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used == tok.size()) return v;
    } catch (...) {
    }
    throw SpecError("toml: unsupported value '" + tok + "'");
}

}  // namespace

Json toml_to_json(const std::string& text) {
    Json root = Json::object();
    Json* table = &root;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = std::string::npos;
        bool instr = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') instr = !instr;
            if (line[i] == '#' && !instr) {
                hash = i;
                break;
            }
        }
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw SpecError("toml: malformed table header");
            std::string path = trim(line.substr(1, line.size() - 2));
            table = &root;
            std::istringstream ps(path);
            std::string part;
            while (std::getline(ps, part, '.')) {
                part = trim(part);
                if (part.empty()) throw SpecError("toml: empty table name");
                table = &(*table)[part];
            }
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw SpecError("toml: expected key = value in '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        if (!key.empty() && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
        std::string rest = line.substr(eq + 1);
        // multi-line arrays: keep appending lines until brackets balance
        auto balance = [](const std::string& s) {
            int depth = 0;
            bool instr = false;
            for (char ch : s) {
                if (ch == '"') instr = !instr;
                if (instr) continue;
                if (ch == '[') ++depth;
                if (ch == ']') --depth;
            }
            return depth;
        };
        while (balance(rest) > 0) {
            std::string more;
            if (!std::getline(in, more)) throw SpecError("toml: unterminated array");
            rest += "\n" + more;
        }
        size_t at = 0;
        std::string flat;
        for (char ch : rest) flat += (ch == '\n') ? ' ' : ch;
        (*table)[key] = toml_value(flat, at);
    }
    return root;
}

Json load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") return toml_to_json(text);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError("json parse error in " + path + ": " + e.what());
    }
}

bool groups_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
    if (a.n != b.n) return false;
    int n = a.n;
    // order profiles prune the search
    auto orders = [&](const FiniteGroup& g) {
        std::vector<int> out(g.n);
        for (int x = 0; x < g.n; ++x) {
            int k = 1, cur = x;
            while (cur != 0) {
                cur = g.mul(cur, x);
                ++k;
            }
            out[x] = k;
        }
        return out;
    };
    std::vector<int> oa = orders(a), ob = orders(b);
    {
        auto sa = oa, sb = ob;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }
    std::vector<int> perm(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(int)> rec = [&](int at) -> bool {
        if (at == n) return true;
        for (int v = 0; v < n; ++v) {
            if (used[v] || oa[at] != ob[v]) continue;
            perm[at] = v;
            used[v] = 1;
            bool ok = true;
            for (int x = 0; x <= at && ok; ++x)
                for (int y = 0; y <= at && ok; ++y) {
                    int xy = a.mul(x, y);
                    if (xy <= at && perm[xy] != b.mul(perm[x], perm[y])) ok = false;
                }
            if (ok && rec(at + 1)) return true;
            used[v] = 0;
            perm[at] = -1;
        }
        return false;
    };
    return rec(0);
}

std::string group_label(const FiniteGroup& g) {
    static const char* names[] = {"trivial", "C2", "C3", "C4",   "C5", "C6", "C7", "C8", "C9",
                                  "C10",     "C11", "C12", "C2xC2", "S3", "D4", "Q8", "D6", "A4"};
    for (const char* name : names) {
        GroupPtr cand = catalog_group(name);
        if (cand->n == g.n && groups_isomorphic(g, *cand)) return name == std::string("trivial") ? "e" : name;
    }
    return "G" + std::to_string(g.n);
}

std::vector<std::string> class_labels(const SubgroupLattice& lat) {
    std::vector<std::string> base;
    for (int c = 0; c < lat.num_classes(); ++c) {
        SubgroupContext ctx = make_context(std::make_shared<SubgroupLattice>(lat), lat.cls_rep[c]);
        base.push_back(group_label(*ctx.lat->grp));
    }
    // disambiguate repeats with #k suffixes
    std::vector<std::string> out = base;
    for (int c = 0; c < lat.num_classes(); ++c) {
        int same = 0, before = 0;
        for (int d = 0; d < lat.num_classes(); ++d) {
            if (base[d] == base[c]) {
                ++same;
                if (d < c) ++before;
            }
        }
        if (same > 1) out[c] = base[c] + "#" + std::to_string(before + 1);
    }
    return out;
}

int parse_class(const SubgroupLattice& lat, const Json& spec) {
    if (spec.is_number_integer()) {
        int c = spec.get<int>();
        if (c < 0 || c >= lat.num_classes()) throw SpecError("class index out of range");
        return c;
    }
    if (spec.is_string()) {
        auto labels = class_labels(lat);
        for (int c = 0; c < lat.num_classes(); ++c)
            if (labels[c] == spec.get<std::string>()) return c;
        std::string all;
        for (auto& l : labels) all += l + " ";
        throw SpecError("unknown subgroup class '" + spec.get<std::string>() + "'; available: " + all);
    }
    throw SpecError("subgroup class must be a label or an index");
}

int parse_subgroup(const SubgroupLattice& lat, const Json& spec) {
    if (spec.is_array()) {
        std::vector<int> elems;
        for (const auto& v : spec) elems.push_back(v.get<int>());
        std::sort(elems.begin(), elems.end());
        int idx = lat.find_subgroup(elems);
        if (idx < 0) throw SpecError("element list is not a subgroup");
        return idx;
    }
    return lat.cls_rep[parse_class(lat, spec)];
}

GroupPtr parse_group(const Json& spec) {
    if (spec.is_string()) return catalog_group(spec.get<std::string>());
    if (spec.is_object()) {
        if (spec.contains("catalog")) return catalog_group(spec["catalog"].get<std::string>());
        if (spec.contains("perm_generators")) {
            std::vector<std::vector<int>> gens;
            for (const auto& p : spec["perm_generators"]) {
                std::vector<int> perm;
                for (const auto& v : p) perm.push_back(v.get<int>());
                gens.push_back(perm);
            }
            return group_from_generators(gens);
        }
        if (spec.contains("mult")) {
            std::vector<std::vector<int>> table;
            for (const auto& row : spec["mult"]) {
                std::vector<int> r;
                for (const auto& v : row) r.push_back(v.get<int>());
                table.push_back(r);
            }
            return group_from_table(table);
        }
    }
    throw SpecError("group spec needs 'catalog', 'perm_generators', or 'mult'");
}

GSet parse_gset(LatticePtr lat, const Json& spec) {
    if (spec.is_object() && spec.contains("orbit_of"))
        return canonical_orbit(*lat, parse_subgroup(*lat, spec["orbit_of"]));
    if (spec.is_object() && spec.contains("orbits_of")) {
        GSet x = empty_gset(lat->grp);
        for (const auto& s : spec["orbits_of"])
            x = coproduct_gset(x, canonical_orbit(*lat, parse_subgroup(*lat, s)));
        return x;
    }
    if (spec.is_object() && spec.contains("action")) {
        std::vector<std::vector<int>> action;
        for (const auto& row : spec["action"]) {
            std::vector<int> r;
            for (const auto& v : row) r.push_back(v.get<int>());
            action.push_back(r);
        }
        if (spec.contains("elements") && int(action.empty() ? 0 : action[0].size()) != spec["elements"].get<int>())
            throw SpecError("gset: 'elements' disagrees with the action table");
        GSet x;
        try {
            x = make_gset(lat->grp, action);
        } catch (const std::exception& e) {
            throw SpecError(std::string("gset: ") + e.what());
        }
        return x;
    }
    throw SpecError("gset spec needs 'orbit_of', 'orbits_of', or 'action'");
}

Span parse_span(LatticePtr lat, const Json& spec) {
    if (spec.contains("unit")) return unit_span(lat, parse_subgroup(*lat, spec["unit"]));
    if (spec.contains("transfer"))
        return transfer_span(lat, parse_subgroup(*lat, spec["transfer"][0]),
                             parse_subgroup(*lat, spec["transfer"][1]));
    if (spec.contains("restriction"))
        return restriction_span(lat, parse_subgroup(*lat, spec["restriction"][0]),
                                parse_subgroup(*lat, spec["restriction"][1]));
    if (!spec.contains("H") || !spec.contains("K") || !spec.contains("middle"))
        throw SpecError("span spec needs H, K, middle, r, t");
    int h = parse_subgroup(*lat, spec["H"]);
    int k = parse_subgroup(*lat, spec["K"]);
    GSet mid = parse_gset(lat, spec["middle"]);
    std::vector<int> rimg, timg;
    for (const auto& v : spec["r"]) rimg.push_back(v.get<int>());
    for (const auto& v : spec["t"]) timg.push_back(v.get<int>());
    try {
        return make_span(lat, h, k, mid, rimg, timg);
    } catch (const std::exception& e) {
        throw SpecError(std::string("span: ") + e.what());
    }
}

CoefficientSystem system_from_generators(LatticePtr lat, std::vector<int> ranks,
                                         std::map<MorKey, IMat> gen) {
    // close the supplied maps under composition until every morphism is known
    int ns = lat->num_subgroups();
    for (int h = 0; h < ns; ++h) gen.insert({{h, h, 0}, IMat::identity(ranks[h])});
    for (;;) {
        bool grew = false;
        std::vector<std::pair<MorKey, IMat>> found;
        for (const auto& [f1, m1] : gen)
            for (const auto& [f2, m2] : gen) {
                if (f1.dst != f2.src) continue;
                MorKey c = compose_morphisms(*lat, f1, f2);
                IMat comp = mat_mul(m1, m2);
                auto it = gen.find(c);
                if (it == gen.end())
                    found.emplace_back(c, comp);
                else if (!(it->second == comp))
                    throw SpecError("system generators are inconsistent under composition");
            }
        for (auto& [k, m] : found)
            if (gen.insert({k, m}).second) grew = true;
        if (!grew) break;
    }
    CoefficientSystem sys;
    sys.lat = lat;
    sys.rank = ranks;
    for (int h = 0; h < ns; ++h)
        for (int k = 0; k < ns; ++k)
            for (const MorKey& key : orbit_morphisms(*lat, h, k)) {
                auto it = gen.find(key);
                if (it == gen.end())
                    throw SpecError("system generators do not determine all structure maps");
                sys.mor[key] = it->second;
            }
    auto bad = validate_system(sys);
    if (!bad.empty()) throw SpecError("system invalid: " + bad.front());
    return sys;
}

CoefficientSystem parse_system(LatticePtr lat, const Json& spec) {
    if (spec.is_object() && spec.contains("constant") && spec["constant"].get<bool>())
        return constant_system(lat);
    if (spec.is_object() && spec.contains("free_on"))
        return free_system(lat, parse_gset(lat, spec["free_on"]));
    if (spec.is_object() && spec.contains("ranks")) {
        std::vector<int> ranks;
        for (const auto& v : spec["ranks"]) ranks.push_back(v.get<int>());
        if (int(ranks.size()) != lat->num_subgroups())
            throw SpecError("system: 'ranks' must list one rank per subgroup (" +
                            std::to_string(lat->num_subgroups()) + ")");
        std::map<MorKey, IMat> gen;
        for (const auto& m : spec["maps"]) {
            MorKey key;
            key.src = parse_subgroup(*lat, m["src"]);
            key.dst = parse_subgroup(*lat, m["dst"]);
            int g = m.contains("rep") ? m["rep"].get<int>() : 0;
            key.rep = coset_rep(*lat, g, key.dst);
            gen[key] = matrix_of_json(m["matrix"]);
        }
        return system_from_generators(lat, ranks, gen);
    }
    throw SpecError("system spec needs 'constant', 'free_on', or 'ranks' + 'maps'");
}

GSimplicialComplex parse_complex(LatticePtr lat, const Json& spec) {
    if (spec.is_object() && spec.contains("builtin")) {
        std::string name = spec["builtin"].get<std::string>();
        if (name == "octahedron_c2") return octahedron_c2(lat);
        if (name == "antipodal_circle_c2") return antipodal_circle_c2(lat);
        throw SpecError("unknown builtin complex: " + name);
    }
    if (!spec.contains("vertices") || !spec.contains("simplices"))
        throw SpecError("complex spec needs 'vertices' and 'simplices'");
    GSet verts = parse_gset(lat, spec["vertices"]);
    std::vector<std::vector<int>> simplices;
    for (const auto& s : spec["simplices"]) {
        std::vector<int> tup;
        for (const auto& v : s) tup.push_back(v.get<int>());
        simplices.push_back(tup);
    }
    try {
        return load_complex(lat, verts, simplices);
    } catch (const std::exception& e) {
        throw SpecError(std::string("complex: ") + e.what());
    }
}

ProjectiveModule parse_module(LatticePtr lat, const Json& spec) {
    if (!spec.contains("ring") || spec["ring"].get<std::string>() != "constant")
        throw SpecError("module spec: only ring = \"constant\" is supported here");
    CoefficientRing ring = constant_ring(lat);
    GSet x = parse_gset(lat, spec["gset"]);
    if (!spec.contains("idempotent")) return free_module(ring, x);
    CoeffMorphism e;
    e.lat = lat;
    for (const auto& m : spec["idempotent"]) e.level.push_back(matrix_of_json(m));
    try {
        return projective_from_idempotent(ring, x, e);
    } catch (const std::exception& ex) {
        throw SpecError(std::string("module: ") + ex.what());
    }
}

Json json_of_matrix(const IMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

IMat matrix_of_json(const Json& j) {
    if (!j.is_array()) throw SpecError("matrix must be an array of rows");
    int rows = int(j.size());
    int cols = rows ? int(j[0].size()) : 0;
    IMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (int(j[i].size()) != cols) throw SpecError("matrix rows have uneven lengths");
        for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<long long>();
    }
    return m;
}

Json json_of_marks_table(const SubgroupLattice& lat, const TableOfMarks& t) {
    Json out;
    auto labels = class_labels(lat);
    Json rows = Json::array();
    Json order = Json::array();
    int nc = lat.num_classes();
    for (int r = 0; r < nc; ++r) {
        order.push_back("G/" + labels[nc - 1 - r]);
        Json row = Json::array();
        for (int c = 0; c < nc; ++c) row.push_back(t.m(r, c));
        rows.push_back(row);
    }
    out["rows"] = order;
    Json cols = Json::array();
    for (auto& l : labels) cols.push_back(l);
    out["columns"] = cols;
    out["marks"] = rows;
    return out;
}

Json json_of_burnside(const SubgroupLattice& lat, const BurnsideElement& b) {
    Json out = Json::object();
    auto labels = class_labels(lat);
    std::string g = group_label(*lat.grp);
    for (int c = 0; c < lat.num_classes(); ++c) out[g + "/" + labels[c]] = b.coeff[c];
    return out;
}

Json json_of_system(const SubgroupLattice& lat, const CoefficientSystem& m) {
    Json out;
    Json ranks = Json::array();
    for (int r : m.rank) ranks.push_back(r);
    out["ranks"] = ranks;
    auto labels = class_labels(lat);
    Json cls = Json::array();
    for (int c = 0; c < lat.num_classes(); ++c) {
        Json e;
        e["class"] = labels[c];
        e["rank"] = m.rank[lat.cls_rep[c]];
        cls.push_back(e);
    }
    out["class_ranks"] = cls;
    return out;
}

Json json_of_k0(const SubgroupLattice& lat, const K0ClassVector& v) {
    Json out = Json::array();
    auto labels = class_labels(lat);
    for (int c = 0; c < lat.num_classes(); ++c) {
        Json e;
        e["class"] = labels[c];
        e["z_rank"] = v.comp[c].zrank;
        if (v.comp[c].augrank) e["aug_rank"] = *v.comp[c].augrank;
        if (v.comp[c].reduced) e["reduced"] = *v.comp[c].reduced;
        out.push_back(e);
    }
    return out;
}

}  // namespace equik
