#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "equik/coeff.hpp"

#include <random>

using namespace equik;

namespace {

int sub_of_size(const SubgroupLattice& lat, size_t n) {
    for (int s = 0; s < lat.num_subgroups(); ++s)
        if (lat.subs[s].elems.size() == n) return s;
    return -1;
}

}  // namespace

TEST_CASE("free system on G/G is the constant system") {
    for (const char* name : {"C2", "S3", "D4"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        CoefficientSystem a = free_system(lat, canonical_orbit(*lat, lat->group_index()));
        CHECK(a == constant_system(lat));
        CHECK(validate_system(a).empty());
    }
}

TEST_CASE("free system ranks are fixed point counts") {
    auto c2 = subgroup_lattice(catalog_group("C2"));
    CoefficientSystem a = free_system(c2, canonical_orbit(*c2, 0));
    CHECK(a.rank == std::vector<int>{2, 0});
    CHECK(validate_system(a).empty());

    CoefficientSystem z = free_system(c2, empty_gset(c2->grp));
    CHECK(z.rank == std::vector<int>{0, 0});
}

TEST_CASE("weyl action factors through W (inner elements act trivially)") {
    for (const char* name : {"S3", "D4", "A4"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        std::mt19937_64 rng(5);
        GSet x = coproduct_gset(canonical_orbit(*lat, int(rng() % lat->num_subgroups())),
                                canonical_orbit(*lat, int(rng() % lat->num_subgroups())));
        CoefficientSystem a = free_system(lat, x);
        for (int h = 0; h < lat->num_subgroups(); ++h)
            for (int v : lat->subs[h].elems) {
                // the endomorphism of G/H given by right translation by an
                // element of H is the identity morphism
                CHECK(coset_rep(*lat, v, h) == 0);
            }
        CHECK(validate_system(a).empty());
    }
}

TEST_CASE("box product: unit, zero, and A_X box A_Y = A_{XxY}") {
    auto s3 = subgroup_lattice(catalog_group("S3"));
    GSet x = canonical_orbit(*s3, sub_of_size(*s3, 2));
    GSet y = canonical_orbit(*s3, sub_of_size(*s3, 3));
    CoefficientSystem ax = free_system(s3, x);
    CoefficientSystem ay = free_system(s3, y);
    CoefficientSystem unit = constant_system(s3);

    CHECK(box_product(ax, unit) == ax);
    CHECK(box_product(unit, ax) == ax);
    CHECK(box_product(zero_system(s3), ax).rank == zero_system(s3).rank);

    CoefficientSystem prod = box_product(ax, ay);
    CoefficientSystem direct = free_system(s3, product_gset(x, y).set);
    CHECK(prod.rank == direct.rank);
    // explicit iso by basis matching on every level
    auto homs = hom_system(prod, direct);
    bool found_iso = false;
    for (auto& f : homs)
        if (morphism_invertible(f)) found_iso = true;
    // single basis elements may not be isos; try the identity-like matching instead:
    // fixed points of X x Y match pairs of fixed points, in product order
    {
        CoeffMorphism f;
        f.lat = s3;
        bool ok = true;
        for (int h = 0; h < s3->num_subgroups(); ++h) {
            auto fx = fixed_points(x, s3->subs[h].elems);
            auto fy = fixed_points(y, s3->subs[h].elems);
            auto fp = fixed_points(product_gset(x, y).set, s3->subs[h].elems);
            IMat m(int(fp.size()), int(fx.size() * fy.size()));
            ProductResult pr = product_gset(x, y);
            for (size_t i = 0; i < fx.size(); ++i)
                for (size_t j = 0; j < fy.size(); ++j) {
                    int target = -1;
                    for (size_t k = 0; k < fp.size(); ++k)
                        if (pr.p1.img[fp[k]] == fx[i] && pr.p2.img[fp[k]] == fy[j]) target = int(k);
                    if (target < 0) {
                        ok = false;
                        break;
                    }
                    m(target, int(i * fy.size() + j)) = 1;
                }
            f.level.push_back(std::move(m));
        }
        REQUIRE(ok);
        CHECK(morphism_valid(prod, direct, f));
        CHECK(morphism_invertible(f));
        found_iso = true;
    }
    CHECK(found_iso);
}

TEST_CASE("A_{X disjoint Y} is literally the direct sum") {
    auto d4 = subgroup_lattice(catalog_group("D4"));
    GSet x = canonical_orbit(*d4, 2);
    GSet y = canonical_orbit(*d4, d4->group_index());
    CoefficientSystem both = free_system(d4, coproduct_gset(x, y));
    CoefficientSystem sum = direct_sum(free_system(d4, x), free_system(d4, y));
    CHECK(both == sum);
    CHECK(validate_system(both).empty());
}

TEST_CASE("fp system of Z with trivial action is the constant ring") {
    for (const char* name : {"C2", "S3"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        CoefficientRing s = fp_system(lat, gring_trivial_z(lat->grp));
        CHECK(s.sys == constant_system(lat));
        CHECK(validate_ring(s).empty());
    }
}

TEST_CASE("fp system of Z[C3] with C2 inversion") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    // action of C2 on C3 by inversion
    GRingWithAction r = gring_group_ring(catalog_group("C3"), c2lat->grp, {{0, 1, 2}, {0, 2, 1}});
    CHECK(r.validate().empty());
    CoefficientRing s = fp_system(c2lat, r);
    CHECK(s.sys.rank == std::vector<int>{3, 2});  // FP^e = Z[C3], FP^{C2} = <1, t+t^2>
    CHECK(validate_ring(s).empty());
}

TEST_CASE("fp system of Z^2 with swap") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    GRingWithAction r;
    r.rank = 2;
    r.grp = c2lat->grp;
    r.left = {IMat(2, 2), IMat(2, 2)};
    r.left[0](0, 0) = 1;  // e0*e0 = e0
    r.left[1](1, 1) = 1;  // e1*e1 = e1
    r.unit = IMat(2, 1);
    r.unit(0, 0) = 1;
    r.unit(1, 0) = 1;
    IMat swap(2, 2);
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    r.action = {IMat::identity(2), swap};
    IMat aug(1, 2);
    aug(0, 0) = 1;
    aug(0, 1) = 0;
    r.aug.reset();  // the swap does not fix that augmentation; omit it
    CHECK(r.validate().empty());
    CoefficientRing s = fp_system(c2lat, r);
    CHECK(s.sys.rank == std::vector<int>{2, 1});  // diagonal at the fixed level
    CHECK(validate_ring(s).empty());
}

TEST_CASE("group ring coefficient system") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    // pi_e = C3 with Weyl inversion, pi_{C2} = e
    GroupRingSpec spec;
    spec.pi = {catalog_group("C3"), catalog_group("trivial")};
    for (int h = 0; h < 2; ++h)
        for (int k = 0; k < 2; ++k)
            for (const MorKey& key : orbit_morphisms(*c2lat, h, k)) {
                std::vector<int> f;
                if (key.src == 0 && key.dst == 0) {
                    f = (key.rep == 0) ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 2, 1};
                } else if (key.dst == 1) {
                    f = {0};  // pi_{C2} = trivial maps to identity of pi_src
                    f.assign(1, 0);
                }
                spec.hom[key] = f;
            }
    CoefficientRing s = group_ring_system(c2lat, spec);
    CHECK(s.sys.rank == std::vector<int>{3, 1});
    CHECK(validate_ring(s).empty());

    // constant pi gives the constant group ring system
    GroupRingSpec spec2;
    spec2.pi = {catalog_group("C2"), catalog_group("C2")};
    for (int h = 0; h < 2; ++h)
        for (int k = 0; k < 2; ++k)
            for (const MorKey& key : orbit_morphisms(*c2lat, h, k)) spec2.hom[key] = {0, 1};
    CoefficientRing s2 = group_ring_system(c2lat, spec2);
    CHECK(s2.sys.rank == std::vector<int>{2, 2});
    CHECK(validate_ring(s2).empty());
}

TEST_CASE("hom systems") {
    auto c2 = subgroup_lattice(catalog_group("C2"));
    CoefficientSystem m = free_system(c2, canonical_orbit(*c2, 0));

    // Hom(A_{G/H}, M) = M^H
    for (int h = 0; h < 2; ++h) {
        CoefficientSystem rep = free_system(c2, canonical_orbit(*c2, h));
        auto homs = hom_system(rep, m);
        CHECK(int(homs.size()) == m.rank[h]);
    }

    // Hom(0, M) = 0
    CHECK(hom_system(zero_system(c2), m).empty());

    // Hom(A_{C2/e}, A_{C2/e}) has rank 2
    CHECK(hom_system(m, m).size() == 2);

    // same statement over S3 against a random free system
    auto s3 = subgroup_lattice(catalog_group("S3"));
    GSet x = coproduct_gset(canonical_orbit(*s3, sub_of_size(*s3, 2)), canonical_orbit(*s3, 0));
    CoefficientSystem n = free_system(s3, x);
    for (int h = 0; h < s3->num_subgroups(); ++h) {
        CoefficientSystem rep = free_system(s3, canonical_orbit(*s3, h));
        CHECK(int(hom_system(rep, n).size()) == n.rank[h]);
    }
}

TEST_CASE("group ring systems reject non-functorial homomorphisms") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    GroupRingSpec spec;
    spec.pi = {catalog_group("C3"), catalog_group("trivial")};
    for (int h = 0; h < 2; ++h)
        for (int k = 0; k < 2; ++k)
            for (const MorKey& key : orbit_morphisms(*c2lat, h, k)) {
                if (key.src == 0 && key.dst == 0)
                    spec.hom[key] = (key.rep == 0) ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 1, 2};
                else
                    spec.hom[key] = {0};
            }
    // break one weyl map so squares no longer commute: the identity at rep 1
    // composed with itself must be the identity, but we hand it a 3-cycle
    spec.hom[{0, 0, 1}] = {1, 2, 0};
    CHECK_THROWS(group_ring_system(c2lat, spec));
}

TEST_CASE("validate_system flags corrupted restriction") {
    auto c2 = subgroup_lattice(catalog_group("C2"));
    CoefficientSystem m = free_system(c2, canonical_orbit(*c2, 0));
    CHECK(validate_system(m).empty());
    CoefficientSystem bad = m;
    for (auto& [key, mat] : bad.mor)
        if (key.rep != 0 && mat.rows * mat.cols > 0) {
            mat(0, 0) += 1;
            break;
        }
    CHECK(!validate_system(bad).empty());
}

TEST_CASE("coefficient rings are box monoids: associativity as matrix identities") {
    auto s3 = subgroup_lattice(catalog_group("S3"));
    CoefficientRing s = constant_ring(s3);
    CHECK(validate_ring(s).empty());
    // levelwise mult with unit is the canonical rank-1 identification
    for (int h = 0; h < s3->num_subgroups(); ++h) {
        CHECK(s.ring[h].left.size() == 1);
        CHECK(s.ring[h].left[0].is_identity());
    }
}
