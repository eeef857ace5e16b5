#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "equik/group.hpp"

#include <map>

using namespace equik;

TEST_CASE("catalog C2 has the expected table") {
    auto g = catalog_group("C2");
    CHECK(g->n == 2);
    CHECK(g->mult == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
}

TEST_CASE("catalog orders") {
    std::map<std::string, int> orders = {{"trivial", 1}, {"C2", 2},    {"C3", 3},  {"C4", 4},
                                         {"C2xC2", 4},   {"S3", 6},    {"C6", 6},  {"D4", 8},
                                         {"Q8", 8},      {"C12", 12},  {"D6", 12}, {"A4", 12}};
    for (auto& [name, n] : orders) {
        auto g = catalog_group(name);
        CHECK(g->n == n);
        g->validate();
    }
}

TEST_CASE("closure of {(12)(34),(13)(24)} is C2xC2") {
    auto g = group_from_generators({{1, 0, 3, 2}, {2, 3, 0, 1}});
    CHECK(g->n == 4);
    for (int a = 0; a < 4; ++a) CHECK(g->mul(a, a) == 0);  // exponent 2
}

TEST_CASE("order bound enforced") {
    // S5 on 5 points has order 120
    CHECK_THROWS(group_from_generators({{1, 0, 2, 3, 4}, {1, 2, 3, 4, 0}}));
}

TEST_CASE("generators must be permutations") {
    CHECK_THROWS(group_from_generators({{0, 0, 1}}));
    CHECK_THROWS(group_from_generators({{0, 1}, {1, 0, 2}}));
    CHECK_THROWS(group_from_generators({{9, 1, 2}}));
}

TEST_CASE("subgroup lattices of the catalog") {
    auto s3 = subgroup_lattice(catalog_group("S3"));
    CHECK(s3->num_subgroups() == 6);
    CHECK(s3->num_classes() == 4);
    // class ordering: trivial first, G last, sizes ascending
    CHECK(s3->subs[s3->cls_rep[0]].elems.size() == 1);
    CHECK(s3->subs[s3->cls_rep[3]].elems.size() == 6);

    auto q8 = subgroup_lattice(catalog_group("Q8"));
    CHECK(q8->num_subgroups() == 6);
    CHECK(q8->num_classes() == 6);  // all subgroups normal

    auto c2 = subgroup_lattice(catalog_group("C2"));
    CHECK(c2->num_subgroups() == 2);
    CHECK(c2->num_classes() == 2);

    auto a4 = subgroup_lattice(catalog_group("A4"));
    CHECK(a4->num_subgroups() == 10);
    CHECK(a4->num_classes() == 5);

    auto d4 = subgroup_lattice(catalog_group("D4"));
    CHECK(d4->num_subgroups() == 10);
    CHECK(d4->num_classes() == 8);
}

TEST_CASE("class order respects subconjugacy") {
    for (const char* name : {"S3", "D4", "Q8", "A4", "D6", "C12"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        for (int ci = 0; ci < lat->num_classes(); ++ci)
            for (int cj = 0; cj < lat->num_classes(); ++cj)
                if (lat->subconj[cj][ci] && ci != cj) {
                    CHECK(cj < ci);
                    CHECK(lat->subs[lat->cls_rep[cj]].elems.size() < lat->subs[lat->cls_rep[ci]].elems.size());
                }
    }
}

TEST_CASE("weyl groups") {
    auto c2 = subgroup_lattice(catalog_group("C2"));
    WeylData w0 = weyl_group(*c2, 0);
    CHECK(w0.weyl->n == 2);  // W(e) = G

    auto s3 = subgroup_lattice(catalog_group("S3"));
    for (int s = 0; s < s3->num_subgroups(); ++s) {
        WeylData w = weyl_group(*s3, s);
        size_t h = s3->subs[s].elems.size();
        CHECK(w.weyl->n * h == w.normalizer.size());
        if (h == 2) CHECK(w.weyl->n == 1);  // N(C2) = C2 in S3
        if (h == 3) CHECK(w.weyl->n == 2);  // C3 normal, S3/C3 = C2
    }
}

TEST_CASE("weyl quotient map is a homomorphism with kernel H") {
    for (const char* name : {"S3", "D4", "A4"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        const FiniteGroup& G = *lat->grp;
        for (int s = 0; s < lat->num_subgroups(); ++s) {
            WeylData w = weyl_group(*lat, s);
            for (int a : w.normalizer)
                for (int b : w.normalizer)
                    CHECK(w.to_weyl[G.mul(a, b)] == w.weyl->mul(w.to_weyl[a], w.to_weyl[b]));
            for (int h : lat->subs[s].elems) CHECK(w.to_weyl[h] == 0);
        }
    }
}

TEST_CASE("double cosets partition K") {
    // K=J=H=G: one coset
    auto s3 = subgroup_lattice(catalog_group("S3"));
    int g = s3->group_index();
    DoubleCosetData d = double_cosets(*s3, g, g, g);
    CHECK(d.reps.size() == 1);
    CHECK(d.reps[0] == 0);

    // K=S3, J=H=<(12)>: 2 double cosets of sizes 2 and 4
    int c2 = -1;
    for (int s = 0; s < s3->num_subgroups(); ++s)
        if (s3->subs[s].elems.size() == 2) {
            c2 = s;
            break;
        }
    DoubleCosetData d2 = double_cosets(*s3, g, c2, c2);
    CHECK(d2.reps.size() == 2);
    std::vector<size_t> sizes = {d2.cosets[0].size(), d2.cosets[1].size()};
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<size_t>{2, 4});
    // intersections: C2 and e in some order
    std::vector<size_t> isz = {s3->subs[d2.intersection[0]].elems.size(),
                               s3->subs[d2.intersection[1]].elems.size()};
    std::sort(isz.begin(), isz.end());
    CHECK(isz == std::vector<size_t>{1, 2});

    // C4, J=H=C2: 2 double cosets, both intersections C2
    auto c4 = subgroup_lattice(catalog_group("C4"));
    int h2 = -1;
    for (int s = 0; s < c4->num_subgroups(); ++s)
        if (c4->subs[s].elems.size() == 2) h2 = s;
    DoubleCosetData d3 = double_cosets(*c4, c4->group_index(), h2, h2);
    CHECK(d3.reps.size() == 2);
    for (int m : d3.intersection) CHECK(c4->subs[m].elems.size() == 2);
}

TEST_CASE("double coset sizes sum to |K| for all catalog triples") {
    for (const char* name : {"C2", "C3", "C4", "C2xC2", "C6", "S3", "D4", "Q8", "D6", "A4"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        for (int k = 0; k < lat->num_subgroups(); ++k)
            for (int j = 0; j < lat->num_subgroups(); ++j) {
                if (!lat->leq[j][k]) continue;
                for (int h = 0; h < lat->num_subgroups(); ++h) {
                    if (!lat->leq[h][k]) continue;
                    DoubleCosetData d = double_cosets(*lat, k, j, h);
                    size_t total = 0;
                    for (auto& cell : d.cosets) total += cell.size();
                    CHECK(total == lat->subs[k].elems.size());
                }
            }
    }
}

TEST_CASE("conjugate subgroups have isomorphic weyl groups (order check + table match)") {
    for (const char* name : {"S3", "D4", "A4", "D6"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        for (int c = 0; c < lat->num_classes(); ++c) {
            const auto& members = lat->classes[c];
            WeylData w0 = weyl_group(*lat, members[0]);
            for (size_t i = 1; i < members.size(); ++i) {
                WeylData wi = weyl_group(*lat, members[i]);
                REQUIRE(w0.weyl->n == wi.weyl->n);
                // brute-force isomorphism search on groups this small
                int n = w0.weyl->n;
                std::vector<int> perm(n, -1);
                std::vector<char> used(n, 0);
                std::function<bool(int)> rec = [&](int at) -> bool {
                    if (at == n) return true;
                    for (int v = 0; v < n; ++v) {
                        if (used[v]) continue;
                        perm[at] = v;
                        used[v] = 1;
                        bool ok = true;
                        for (int a = 0; a <= at && ok; ++a)
                            for (int b = 0; b <= at && ok; ++b) {
                                int ab = w0.weyl->mul(a, b);
                                if (ab <= at && perm[ab] != wi.weyl->mul(perm[a], perm[b])) ok = false;
                            }
                        if (ok && rec(at + 1)) return true;
                        used[v] = 0;
                        perm[at] = -1;
                    }
                    return false;
                };
                CHECK(rec(0));
            }
        }
    }
}

TEST_CASE("subgroup context round trip") {
    auto s3 = subgroup_lattice(catalog_group("S3"));
    for (int s = 0; s < s3->num_subgroups(); ++s) {
        SubgroupContext ctx = make_context(s3, s);
        ctx.lat->grp->validate();
        for (int q = 0; q < ctx.lat->num_subgroups(); ++q) CHECK(ctx.down(ctx.up(q)) == q);
    }
}
