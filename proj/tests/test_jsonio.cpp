#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "equik/jsonio.hpp"

using namespace equik;

TEST_CASE("toml subset round trips into json") {
    std::string text = R"(
# a comment
title = "demo"
count = 12
flag = true

[group]
catalog = "S3"

[gset]
orbit_of = "C2"

[complex]
simplices = [[0], [1], [0, 1]]
)";
    Json j = toml_to_json(text);
    CHECK(j["title"] == "demo");
    CHECK(j["count"] == 12);
    CHECK(j["flag"] == true);
    CHECK(j["group"]["catalog"] == "S3");
    CHECK(j["gset"]["orbit_of"] == "C2");
    CHECK(j["complex"]["simplices"].size() == 3);
    CHECK(j["complex"]["simplices"][2][1] == 1);
}

TEST_CASE("group parsing and labels") {
    CHECK(parse_group(Json("S3"))->n == 6);
    CHECK(parse_group(Json::parse(R"({"catalog":"Q8"})"))->n == 8);
    GroupPtr g = parse_group(Json::parse(R"({"perm_generators":[[1,0,2],[1,2,0]]})"));
    CHECK(g->n == 6);
    CHECK(group_label(*g) == "S3");
    CHECK(group_label(*catalog_group("trivial")) == "e");
}

TEST_CASE("class labels disambiguate") {
    auto d4 = subgroup_lattice(catalog_group("D4"));
    auto labels = class_labels(*d4);
    CHECK(labels.size() == 8);
    // three classes of order-2 subgroups get suffixes
    int c2count = 0;
    for (auto& l : labels)
        if (l.rfind("C2#", 0) == 0) ++c2count;
    CHECK(c2count == 3);
    for (auto& l : labels) CHECK(parse_class(*d4, Json(l)) >= 0);
}

TEST_CASE("gset and span specs") {
    auto s3 = subgroup_lattice(catalog_group("S3"));
    GSet orbit = parse_gset(s3, Json::parse(R"({"orbit_of":"C2"})"));
    CHECK(orbit.size == 3);
    GSet both = parse_gset(s3, Json::parse(R"({"orbits_of":["C2","S3"]})"));
    CHECK(both.size == 4);
    GSet raw = parse_gset(s3, Json::parse(R"({"elements":1,"action":[[0],[0],[0],[0],[0],[0]]})"));
    CHECK(raw.size == 1);
    CHECK_THROWS_AS(parse_gset(s3, Json::parse(R"({"orbit_of":"C5"})")), SpecError);

    Span t = parse_span(s3, Json::parse(R"({"transfer":["C2","S3"]})"));
    CHECK(t.middle.size == 3);
    auto nf = span_normal_form(t);
    CHECK(nf.items.size() == 1);
}

TEST_CASE("system specs: constant, free, generators") {
    auto c2 = subgroup_lattice(catalog_group("C2"));
    CHECK(parse_system(c2, Json::parse(R"({"constant":true})")) == constant_system(c2));
    CoefficientSystem a = parse_system(c2, Json::parse(R"({"free_on":{"orbit_of":"e"}})"));
    CHECK(a.rank == std::vector<int>{2, 0});
    // generators: the constant system from its quotient map and weyl action
    Json spec = Json::parse(R"({
        "ranks": [1, 1],
        "maps": [
          {"src": "e", "dst": "C2", "rep": 0, "matrix": [[1]]},
          {"src": "e", "dst": "e", "rep": 1, "matrix": [[1]]}
        ]
    })");
    CoefficientSystem sys = parse_system(c2, spec);
    CHECK(sys == constant_system(c2));
    // inconsistent generators are rejected
    Json bad = spec;
    bad["maps"][1]["matrix"] = Json::parse("[[-1]]");
    CHECK_THROWS_AS(parse_system(c2, bad), SpecError);
}

TEST_CASE("module and complex specs") {
    auto c2 = subgroup_lattice(catalog_group("C2"));
    ProjectiveModule p =
        parse_module(c2, Json::parse(R"({"ring":"constant","gset":{"orbit_of":"e"}})"));
    CHECK(p.ambient.rank == std::vector<int>{2, 0});
    ProjectiveModule q = parse_module(
        c2, Json::parse(R"({"ring":"constant","gset":{"orbits_of":["e","e"]},
                            "idempotent":[[[1,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,0]],[]]})"));
    CHECK(q.level_basis()[0].cols == 2);

    GSimplicialComplex oct = parse_complex(c2, Json::parse(R"({"builtin":"octahedron_c2"})"));
    CHECK(oct.vertices.size == 6);
    GSimplicialComplex pt = parse_complex(
        c2, Json::parse(R"({"vertices":{"orbit_of":"C2"},"simplices":[[0]]})"));
    CHECK(pt.dim() == 0);
}

TEST_CASE("idempotent spec rejects non-idempotents") {
    auto c2 = subgroup_lattice(catalog_group("C2"));
    CHECK_THROWS_AS(parse_module(c2, Json::parse(R"({"ring":"constant","gset":{"orbit_of":"e"},
                                                     "idempotent":[[[1,1],[1,1]],[]]})")),
                    SpecError);
}
