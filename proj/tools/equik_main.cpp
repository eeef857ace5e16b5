/*
 * equik: exact equivariant algebra over finite groups.
 *
 * Subcommands parse JSON (or TOML) specs, run one computation, and print a
 * deterministic report on stdout (timing goes to stderr so reports stay
 * byte-identical for identical inputs).  Exit codes: 0 success, 1 a
 * verification failed, 2 malformed input.
 */
#include <CLI11.hpp>

#include "equik/functor.hpp"
#include "equik/gcw.hpp"
#include "equik/jsonio.hpp"
#include "equik/module.hpp"
#include "equik/suites.hpp"

#include <chrono>
#include <iostream>

using namespace equik;

namespace {

struct Common {
    std::string group = "C2";
    std::string format = "text";
};

Json spec_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[' || arg.front() == '"'))
        return Json::parse(arg);
    if (arg.size() > 5 && (arg.substr(arg.size() - 5) == ".json" || arg.substr(arg.size() - 5) == ".toml"))
        return load_spec_file(arg);
    return Json(arg);  // bare token, e.g. a catalog name or class label
}

void emit(const Common& c, const Json& report, const std::string& text) {
    if (c.format == "json")
        std::cout << report.dump(2) << "\n";
    else
        std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equik: exact computations with coefficient systems over finite groups"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--format", common.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    std::string group_arg = "C2";
    std::string spec1, spec2, spec3;
    std::string op_name, from_sub, to_sub, cls_arg = "0";
    int g_elt = 0;
    std::string suite_name = "all";
    int max_order = 12;
    bool quick = false;
    int threads = 0;

    auto* c_group = app.add_subcommand("group", "group, subgroup lattice, and Weyl data");
    c_group->add_option("--group", group_arg, "catalog name or group spec");

    auto* c_gset = app.add_subcommand("gset", "orbit decomposition and marks of a G-set");
    c_gset->add_option("--group", group_arg);
    c_gset->add_option("--gset", spec1, "G-set spec")->required();

    auto* c_marks = app.add_subcommand("marks", "table of marks");
    c_marks->add_option("--group", group_arg);

    auto* c_span = app.add_subcommand("span", "span normal form, optionally composed with another");
    c_span->add_option("--group", group_arg);
    c_span->add_option("--span", spec1, "span spec")->required();
    c_span->add_option("--compose", spec2, "second span to compose with");

    auto* c_coeff = app.add_subcommand("coeff", "validate a coefficient system");
    c_coeff->add_option("--group", group_arg);
    c_coeff->add_option("--system", spec1, "system spec")->required();

    auto* c_functor = app.add_subcommand("functor", "induce, restrict, or conjugate a system");
    c_functor->add_option("--group", group_arg);
    c_functor->add_option("--op", op_name, "induce | restrict | conjugate")->required();
    c_functor->add_option("--at", from_sub, "subgroup the system lives over")->required();
    c_functor->add_option("--to", to_sub, "target subgroup (induce/restrict)");
    c_functor->add_option("--elt", g_elt, "group element (conjugate)");
    c_functor->add_option("--system", spec1, "system spec over the source subgroup")->required();

    auto* c_dc = app.add_subcommand("doublecoset", "double cosets and the restriction-induction iso");
    c_dc->add_option("--group", group_arg);
    c_dc->add_option("--K", spec1)->required();
    c_dc->add_option("--J", spec2)->required();
    c_dc->add_option("--H", spec3)->required();

    auto* c_split = app.add_subcommand("split", "isotropy splitting of a projective module");
    c_split->add_option("--group", group_arg);
    c_split->add_option("--module", spec1, "module spec")->required();
    c_split->add_option("--class", cls_arg, "conjugacy class label or index");

    auto* c_k0 = app.add_subcommand("k0", "K0 class vector of a projective module");
    c_k0->add_option("--group", group_arg);
    c_k0->add_option("--module", spec1, "module spec")->required();

    auto* c_twisted = app.add_subcommand("twisted", "twisted group ring at a conjugacy class");
    c_twisted->add_option("--group", group_arg);
    c_twisted->add_option("--class", cls_arg, "conjugacy class label or index");

    auto* c_euler = app.add_subcommand("euler", "equivariant Euler class of a complex");
    c_euler->add_option("--group", group_arg);
    c_euler->add_option("--complex", spec1, "complex spec")->required();

    auto* c_lin = app.add_subcommand("linearize", "equivariant chains and their invariants");
    c_lin->add_option("--group", group_arg);
    c_lin->add_option("--complex", spec1, "complex spec")->required();

    auto* c_verify = app.add_subcommand("verify", "run a verification suite (or 'all', or 'list')");
    c_verify->add_option("suite", suite_name, "suite name");
    c_verify->add_option("--max-order", max_order, "largest group order to include");
    c_verify->add_flag("--quick", quick, "smaller samples");
    c_verify->add_option("--threads", threads, "worker threads (0 = all)");

    CLI11_PARSE(app, argc, argv);

    auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    try {
        Json report;
        std::ostringstream text;

        if (c_group->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            auto labels = class_labels(*lat);
            report["command"] = "group";
            report["order"] = g->n;
            report["label"] = group_label(*g);
            report["subgroups"] = lat->num_subgroups();
            Json cls = Json::array();
            for (int c = 0; c < lat->num_classes(); ++c) {
                Json e;
                e["class"] = labels[c];
                e["order"] = (long long)lat->subs[lat->cls_rep[c]].elems.size();
                e["members"] = (long long)lat->classes[c].size();
                WeylData w = weyl_group(*lat, lat->cls_rep[c]);
                e["weyl"] = group_label(*w.weyl);
                cls.push_back(e);
            }
            report["classes"] = cls;
            text << "group " << group_label(*g) << " of order " << g->n << "\n";
            text << lat->num_subgroups() << " subgroups in " << lat->num_classes() << " classes\n";
            for (auto& e : report["classes"])
                text << "  (" << e["class"].get<std::string>() << ")  order " << e["order"]
                     << "  members " << e["members"] << "  Weyl " << e["weyl"].get<std::string>() << "\n";
        } else if (c_gset->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            GSet x = parse_gset(lat, spec_arg(spec1));
            auto dec = orbit_decomposition(*lat, x);
            auto labels = class_labels(*lat);
            report["command"] = "gset";
            report["size"] = x.size;
            Json census = Json::array();
            for (auto [c, m] : dec.census) {
                Json e;
                e["class"] = labels[c];
                e["orbits"] = m;
                census.push_back(e);
            }
            report["census"] = census;
            Json marks = Json::array();
            for (long long m : marks_of(*lat, x)) marks.push_back(m);
            report["marks"] = marks;
            text << "G-set with " << x.size << " elements, " << dec.orbits.size() << " orbits\n";
            for (auto [c, m] : dec.census)
                text << "  " << m << " orbit(s) with stabilizer class (" << labels[c] << ")\n";
        } else if (c_marks->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            TableOfMarks t = table_of_marks(*lat);
            report = json_of_marks_table(*lat, t);
            report["command"] = "marks";
            text << "table of marks (rows from G/G down to G/e; columns ascending classes)\n";
            for (int r = 0; r < t.m.rows; ++r) {
                text << "  " << report["rows"][r].get<std::string>() << ": [";
                for (int c = 0; c < t.m.cols; ++c) text << t.m(r, c) << (c + 1 < t.m.cols ? ", " : "");
                text << "]\n";
            }
        } else if (c_span->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            Span w = parse_span(lat, spec_arg(spec1));
            if (!spec2.empty()) w = compose_spans(w, parse_span(lat, spec_arg(spec2)));
            report["command"] = "span";
            auto labels = class_labels(*lat);
            if (w.unit) {
                report["unit"] = true;
                text << "formal unit span\n";
            } else {
                SpanNormalForm nf = span_normal_form(w);
                Json items = Json::array();
                for (auto& tr : nf.items) {
                    Json e;
                    e["stabilizer_class"] = labels[lat->cls_of[tr.stab]];
                    e["y"] = tr.y;
                    e["orbit_size"] = (long long)tr.orbit.size();
                    items.push_back(e);
                }
                report["middle_size"] = w.middle.size;
                report["normal_form"] = items;
                text << "span with middle of size " << w.middle.size << ", " << nf.items.size()
                     << " orbit(s)\n";
                for (auto& e : items)
                    text << "  L = (" << e["stabilizer_class"].get<std::string>() << "), y = " << e["y"]
                         << ", orbit size " << e["orbit_size"] << "\n";
            }
        } else if (c_coeff->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            CoefficientSystem m = parse_system(lat, spec_arg(spec1));
            auto bad = validate_system(m);
            report["command"] = "coeff";
            report["system"] = json_of_system(*lat, m);
            report["valid"] = bad.empty();
            Json v = Json::array();
            for (auto& s : bad) v.push_back(s);
            report["violations"] = v;
            text << "coefficient system with ranks [";
            for (size_t i = 0; i < m.rank.size(); ++i) text << m.rank[i] << (i + 1 < m.rank.size() ? ", " : "");
            text << "]\n" << (bad.empty() ? "valid\n" : "INVALID\n");
            for (auto& s : bad) text << "  " << s << "\n";
            if (!bad.empty()) {
                emit(common, report, text.str());
                std::cerr << "elapsed " << elapsed() << "s\n";
                return 1;
            }
        } else if (c_functor->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            int at = parse_subgroup(*lat, spec_arg(from_sub));
            const SubgroupContext& cat = context_cached(lat, at);
            CoefficientSystem m = parse_system(cat.lat, spec_arg(spec1));
            CoefficientSystem out;
            if (op_name == "induce") {
                int to = parse_subgroup(*lat, spec_arg(to_sub));
                const SubgroupContext& cto = context_cached(lat, to);
                out = induce_system(m, context_cached(cto.lat, cto.down(at)));
            } else if (op_name == "restrict") {
                int to = parse_subgroup(*lat, spec_arg(to_sub));
                out = restrict_system(m, context_cached(cat.lat, cat.down(to)));
            } else if (op_name == "conjugate") {
                out = conjugate_system(m, lat, at, g_elt);
            } else {
                throw SpecError("unknown functor op: " + op_name);
            }
            auto bad = validate_system(out);
            report["command"] = "functor";
            report["op"] = op_name;
            Json ranks = Json::array();
            for (int r : out.rank) ranks.push_back(r);
            report["ranks"] = ranks;
            report["valid"] = bad.empty();
            text << op_name << " result ranks [";
            for (size_t i = 0; i < out.rank.size(); ++i)
                text << out.rank[i] << (i + 1 < out.rank.size() ? ", " : "");
            text << "] " << (bad.empty() ? "(valid)" : "(INVALID)") << "\n";
        } else if (c_dc->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            int k = parse_subgroup(*lat, spec_arg(spec1));
            int j = parse_subgroup(*lat, spec_arg(spec2));
            int h = parse_subgroup(*lat, spec_arg(spec3));
            const SubgroupContext& cj = context_cached(lat, j);
            CoefficientSystem m = free_system(cj.lat, canonical_orbit(*cj.lat, cj.lat->group_index()));
            DoubleCosetIso dc = double_coset_iso(lat, k, j, h, m);
            bool ok = morphism_invertible(dc.iso) && morphism_valid(dc.lhs, dc.rhs, dc.iso);
            report["command"] = "doublecoset";
            report["cosets"] = (long long)dc.cosets.reps.size();
            Json reps = Json::array();
            for (int r : dc.cosets.reps) reps.push_back(r);
            report["representatives"] = reps;
            Json meets = Json::array();
            auto labels = class_labels(*lat);
            for (int meet : dc.cosets.intersection) meets.push_back(labels[lat->cls_of[meet]]);
            report["intersections"] = meets;
            report["iso_verified"] = ok;
            text << dc.cosets.reps.size() << " double coset(s); iso "
                 << (ok ? "verified" : "FAILED") << "\n";
            if (!ok) {
                emit(common, report, text.str());
                return 1;
            }
        } else if (c_split->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            ProjectiveModule p = parse_module(lat, spec_arg(spec1));
            int cls = parse_class(*lat, spec_arg(cls_arg));
            IsotropySplit split = isotropy_split(p, cls);
            report["command"] = "split";
            Json subr = Json::array(), quotr = Json::array();
            for (auto& b : split.sub_basis) subr.push_back(b.cols);
            for (int r : split.quotient.sys.rank) quotr.push_back(r);
            report["sub_ranks"] = subr;
            report["quotient_ranks"] = quotr;
            report["retraction_found"] = true;
            text << "split at class " << cls << ": sub ranks " << subr.dump() << ", quotient ranks "
                 << quotr.dump() << ", retraction found\n";
        } else if (c_k0->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            ProjectiveModule p = parse_module(lat, spec_arg(spec1));
            K0ClassVector v = k0_class_vector(p);
            report["command"] = "k0";
            report["components"] = json_of_k0(*lat, v);
            text << "K0 class vector:\n";
            for (auto& e : report["components"])
                text << "  (" << e["class"].get<std::string>() << "): Z-rank " << e["z_rank"]
                     << (e.contains("aug_rank") ? ", aug-rank " + e["aug_rank"].dump() : "")
                     << (e.contains("reduced") ? ", reduced " + e["reduced"].dump() : "") << "\n";
        } else if (c_twisted->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            int cls = parse_class(*lat, spec_arg(cls_arg));
            CoefficientRing zbar = constant_ring(lat);
            TwistedGroupRing t = twisted_ring_at_class(zbar, cls);
            auto bad = t.validate();
            report["command"] = "twisted";
            report["class"] = class_labels(*lat)[cls];
            report["rank"] = t.rank();
            report["weyl_order"] = t.w->n;
            report["associative"] = bad.empty();
            text << "twisted group ring at (" << report["class"].get<std::string>() << "): rank "
                 << t.rank() << ", Weyl order " << t.w->n << ", "
                 << (bad.empty() ? "associative" : "NOT associative") << "\n";
            if (!bad.empty()) {
                emit(common, report, text.str());
                return 1;
            }
        } else if (c_euler->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            GSimplicialComplex x = parse_complex(lat, spec_arg(spec1));
            EulerClass e = equivariant_euler_class(x);
            report["command"] = "euler";
            report["class"] = json_of_burnside(*lat, e.cls);
            Json marks = Json::array();
            for (long long m : e.marks) marks.push_back(m);
            report["marks"] = marks;
            text << "Euler class: " << report["class"].dump() << "\nmarks: " << marks.dump() << "\n";
        } else if (c_lin->parsed()) {
            GroupPtr g = parse_group(spec_arg(group_arg));
            LatticePtr lat = subgroup_lattice(g);
            GSimplicialComplex x = parse_complex(lat, spec_arg(spec1));
            PerfectComplex c = equivariant_chain_complex(x);
            PerfectInvariants inv = perfect_invariants(c);
            report["command"] = "linearize";
            Json degs = Json::array();
            for (auto& m : c.mods) {
                Json ranks = Json::array();
                for (int r : m.ambient.rank) ranks.push_back(r);
                degs.push_back(ranks);
            }
            report["degree_ranks"] = degs;
            auto labels = class_labels(*lat);
            Json hom = Json::array();
            for (int cc = 0; cc < lat->num_classes(); ++cc) {
                Json levels = Json::array();
                for (auto& hg : inv.homology[lat->cls_rep[cc]]) {
                    Json e;
                    e["free_rank"] = hg.free_rank;
                    Json tor = Json::array();
                    for (long long tv : hg.torsion) tor.push_back(tv);
                    e["torsion"] = tor;
                    levels.push_back(e);
                }
                Json entry;
                entry["class"] = labels[cc];
                entry["homology"] = levels;
                hom.push_back(entry);
            }
            report["fixed_level_homology"] = hom;
            report["euler_components"] = json_of_k0(*lat, inv.euler);
            text << "chain complex over " << group_label(*g) << " with " << c.mods.size()
                 << " degrees\n";
            for (auto& entry : hom) {
                text << "  level (" << entry["class"].get<std::string>() << "):";
                for (auto& e : entry["homology"]) {
                    text << " Z^" << e["free_rank"];
                    for (auto& tv : e["torsion"]) text << "+Z/" << tv;
                }
                text << "\n";
            }
        } else if (c_verify->parsed()) {
            if (suite_name == "list") {
                report["command"] = "verify";
                Json names = Json::array();
                for (auto& n : suite_names()) names.push_back(n);
                report["suites"] = names;
                emit(common, report, "suites: " + report["suites"].dump() + "\n");
                std::cerr << "elapsed " << elapsed() << "s\n";
                return 0;
            }
            SuiteOptions opt;
            opt.max_order = max_order;
            opt.quick = quick;
            opt.threads = threads;
            std::vector<SuiteResult> results;
            if (suite_name == "all")
                results = run_all_suites(opt);
            else
                results.push_back(run_suite(suite_name, opt));
            report["command"] = "verify";
            Json rs = Json::array();
            bool all_pass = true;
            for (auto& r : results) {
                Json e;
                e["suite"] = r.name;
                e["pass"] = r.pass;
                e["cases"] = r.cases;
                Json fails = Json::array();
                for (auto& f : r.failures) fails.push_back(f);
                e["failures"] = fails;
                rs.push_back(e);
                all_pass = all_pass && r.pass;
                text << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.cases << " cases)\n";
                for (auto& f : r.failures) text << "       " << f << "\n";
                std::cerr << r.name << " took " << r.seconds << "s\n";
            }
            report["results"] = rs;
            report["pass"] = all_pass;
            emit(common, report, text.str());
            std::cerr << "elapsed " << elapsed() << "s\n";
            return all_pass ? 0 : 1;
        }

        emit(common, report, text.str());
        std::cerr << "elapsed " << elapsed() << "s\n";
        return 0;
    } catch (const SpecError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
