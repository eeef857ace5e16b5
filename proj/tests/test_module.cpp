#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "equik/module.hpp"

#include <random>

using namespace equik;

namespace {

GSet random_gset(std::mt19937_64& rng, const SubgroupLattice& lat, int max_orbits, int max_size) {
    GSet x = empty_gset(lat.grp);
    int orbits = 1 + int(rng() % max_orbits);
    for (int i = 0; i < orbits; ++i) {
        GSet orb = canonical_orbit(lat, int(rng() % lat.num_subgroups()));
        if (x.size + orb.size <= max_size) x = coproduct_gset(x, orb);
    }
    if (x.size == 0) x = canonical_orbit(lat, lat.group_index());
    return x;
}

// random module idempotent on S_X via small combinations + newton iteration
std::optional<CoeffMorphism> random_idempotent(std::mt19937_64& rng, const CoefficientRing& s, const GSet& x) {
    auto homs = free_module_hom(s, x, x);
    CoefficientSystem amb = box_product(s.sys, free_system(s.sys.lat, x));
    CoeffMorphism f = zero_morphism(amb, amb);
    for (auto& b : homs) {
        long long c = (long long)(rng() % 5) - 2;
        if (c == 0) continue;
        for (size_t lv = 0; lv < f.level.size(); ++lv)
            f.level[lv] = mat_add(f.level[lv], mat_scale(b.level[lv], c));
    }
    // peirce-style projection: e <- 3e^2 - 2e^3, quadratic convergence when
    // e^2 - e is nilpotent
    for (int it = 0; it < 6; ++it) {
        bool idem = true;
        long long biggest = 0;
        for (auto& lv : f.level) {
            if (!(mat_mul(lv, lv) == lv)) idem = false;
            for (long long v : lv.a) biggest = std::max(biggest, std::llabs(v));
        }
        if (idem) return f;
        if (biggest > 1000) return std::nullopt;
        CoeffMorphism nxt = f;
        try {
            for (size_t lv = 0; lv < f.level.size(); ++lv) {
                IMat e2 = mat_mul(f.level[lv], f.level[lv]);
                IMat e3 = mat_mul(e2, f.level[lv]);
                nxt.level[lv] = mat_sub(mat_scale(e2, 3), mat_scale(e3, 2));
            }
        } catch (const OverflowError&) {
            return std::nullopt;
        }
        f = nxt;
    }
    for (auto& lv : f.level) {
        if (!(mat_mul(lv, lv) == lv)) return std::nullopt;
        for (long long v : lv.a)
            if (std::llabs(v) > 32) return std::nullopt;  // keep lattice work in range
    }
    return f;
}

}  // namespace

TEST_CASE("twisted group ring: trivial action is the plain group ring") {
    auto w = catalog_group("C4");
    TwistedGroupRing t = twisted_group_ring(1, {IMat::identity(1)}, IMat::identity(1), IMat::identity(1), w,
                                            std::vector<IMat>(4, IMat::identity(1)));
    CHECK(t.rank() == 4);
    CHECK(t.validate().empty());
    GroupPtr mono = monomial_group(t);
    CHECK(mono->n == 4);
}

TEST_CASE("Z[C3] twisted by C2 inversion is Z[S3]") {
    auto c2 = catalog_group("C2");
    auto c3 = catalog_group("C3");
    // base ring Z[C3], inversion action
    std::vector<IMat> left;
    for (int i = 0; i < 3; ++i) {
        IMat m(3, 3);
        for (int j = 0; j < 3; ++j) m(c3->mul(i, j), j) = 1;
        left.push_back(std::move(m));
    }
    IMat unit(3, 1);
    unit(0, 0) = 1;
    IMat inv(3, 3);
    inv(0, 0) = 1;
    inv(2, 1) = 1;
    inv(1, 2) = 1;
    TwistedGroupRing t =
        twisted_group_ring(3, left, unit, std::nullopt, c2, {IMat::identity(3), inv});
    CHECK(t.rank() == 6);
    CHECK(t.validate().empty());
    GroupPtr mono = monomial_group(t);
    REQUIRE(mono->n == 6);
    // not abelian => S3
    bool abelian = true;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            if (mono->mul(a, b) != mono->mul(b, a)) abelian = false;
    CHECK(!abelian);
    // explicit isomorphism to the catalog S3 by brute force
    auto s3 = catalog_group("S3");
    std::vector<int> perm(6, -1);
    std::vector<char> used(6, 0);
    std::function<bool(int)> rec = [&](int at) -> bool {
        if (at == 6) return true;
        for (int v = 0; v < 6; ++v) {
            if (used[v]) continue;
            perm[at] = v;
            used[v] = 1;
            bool ok = true;
            for (int a = 0; a <= at && ok; ++a)
                for (int b = 0; b <= at && ok; ++b) {
                    int ab = mono->mul(a, b);
                    if (ab <= at && perm[ab] != s3->mul(perm[a], perm[b])) ok = false;
                }
            if (ok && rec(at + 1)) return true;
            used[v] = 0;
            perm[at] = -1;
        }
        return false;
    };
    CHECK(rec(0));
}

TEST_CASE("twisted ring at a class of the constant ring is Z[W]") {
    auto s3lat = subgroup_lattice(catalog_group("S3"));
    CoefficientRing zbar = constant_ring(s3lat);
    for (int c = 0; c < s3lat->num_classes(); ++c) {
        TwistedGroupRing t = twisted_ring_at_class(zbar, c);
        WeylData wd = weyl_group(*s3lat, s3lat->cls_rep[c]);
        CHECK(t.rank() == wd.weyl->n);
        CHECK(t.validate().empty());
        CHECK(t.aug().has_value());
    }
}

TEST_CASE("free modules and their evaluations") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);

    // S_{G/G} has ranks (1,1); S_{C2/e} has ranks (2,0); S_0 = 0
    ProjectiveModule pgg = free_module(zbar, canonical_orbit(*c2lat, 1));
    CHECK(pgg.ambient.rank == std::vector<int>{1, 1});
    ProjectiveModule pge = free_module(zbar, canonical_orbit(*c2lat, 0));
    CHECK(pge.ambient.rank == std::vector<int>{2, 0});
    ProjectiveModule pz = free_module(zbar, empty_gset(c2lat->grp));
    CHECK(pz.ambient.rank == std::vector<int>{0, 0});

    // evaluate S_{C2/e} at class (e): free rank 1 over Z[C2]
    EvalResult ev = evaluate_level(pge, 0);
    CHECK(ev.module.rank == 2);
    CHECK(ev.module.ring.rank() == 2);
    CHECK(ev.module.validate().empty());
    auto pres = twisted_idempotent_presentation(ev.module);
    REQUIRE(pres.has_value());

    // evaluate at a class with no isotropy in X: zero
    EvalResult ev2 = evaluate_level(pge, 1);
    CHECK(ev2.module.rank == 0);

    // evaluate S_{G/H} at (H): rank-1 free over the twisted ring
    EvalResult ev3 = evaluate_level(pgg, 1);
    CHECK(ev3.module.rank == 1);
    CHECK(ev3.module.ring.rank() == 1);
}

TEST_CASE("module hom: the yoneda count") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);
    GSet ge = canonical_orbit(*c2lat, 0);
    GSet gg = canonical_orbit(*c2lat, 1);

    // Hom(S_{G/H}, S) = S^H
    ProjectiveModule s_g = free_module(zbar, gg);
    ProjectiveModule s_e = free_module(zbar, ge);
    CHECK(module_hom(s_g, s_g).size() == 1);
    CHECK(module_hom(s_e, s_e).size() == 2);  // Z[C2]
    CHECK(module_hom(s_e, s_g).size() == 1);
}

TEST_CASE("module hom: zero module") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);
    ProjectiveModule zero = free_module(zbar, empty_gset(c2lat->grp));
    ProjectiveModule se = free_module(zbar, canonical_orbit(*c2lat, 0));
    CHECK(module_hom(zero, se).empty());
}

TEST_CASE("free module homs are module morphisms") {
    std::mt19937_64 rng(7);
    for (const char* name : {"C4", "S3"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        CoefficientRing zbar = constant_ring(lat);
        GSet x = random_gset(rng, *lat, 2, 8);
        GSet y = random_gset(rng, *lat, 2, 8);
        CoeffModule mx = free_coeff_module(zbar, x);
        CoeffModule my = free_coeff_module(zbar, y);
        CHECK(validate_module(zbar, mx).empty());
        CHECK(validate_module(zbar, my).empty());
        for (auto& f : free_module_hom(zbar, x, y)) {
            CHECK(morphism_valid(mx.sys, my.sys, f));
            // commutes with the action
            for (int h = 0; h < lat->num_subgroups(); ++h)
                for (int i = 0; i < zbar.sys.rank[h]; ++i) {
                    IMat ax = free_level_act(zbar, x, h, i);
                    IMat ay = free_level_act(zbar, y, h, i);
                    CHECK(mat_mul(f.level[h], ax) == mat_mul(ay, f.level[h]));
                }
        }
        // rank of Hom(S_X, S_Y) = sum over orbits of rank S_Y^{H_o}
        auto dec = orbit_decomposition(*lat, x);
        CoefficientSystem sy = box_product(zbar.sys, free_system(lat, y));
        size_t expect = 0;
        for (int s : dec.stabilizer) expect += size_t(sy.rank[s]);
        CHECK(free_module_hom(zbar, x, y).size() == expect);
    }
}

TEST_CASE("levels of modules are twisted modules and back") {
    // level data with weyl action <=> twisted ring module structure
    std::mt19937_64 rng(41);
    for (const char* name : {"C4", "S3", "D4"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        CoefficientRing zbar = constant_ring(lat);
        GSet x = random_gset(rng, *lat, 3, 12);
        ProjectiveModule p = free_module(zbar, x);
        for (int c = 0; c < lat->num_classes(); ++c) {
            EvalResult ev = evaluate_level(p, c);
            CHECK(ev.module.validate().empty());
        }
    }
}

TEST_CASE("isotropy split: free module with single isotropy class") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);
    ProjectiveModule p = free_module(zbar, canonical_orbit(*c2lat, 0));
    IsotropySplit split = isotropy_split(p, 0);
    CHECK(split.sub_basis[0].cols == 2);    // everything
    CHECK(split.quotient.sys.rank == std::vector<int>{0, 0});
}

TEST_CASE("isotropy split: mixed free module over C2") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);
    GSet x = coproduct_gset(canonical_orbit(*c2lat, 0), canonical_orbit(*c2lat, 1));
    ProjectiveModule p = free_module(zbar, x);
    IsotropySplit split = isotropy_split(p, 1);  // class of C2
    // P_i ranks (1,1), quotient ranks (2,0)
    CHECK(split.sub_basis[0].cols == 1);
    CHECK(split.sub_basis[1].cols == 1);
    CHECK(split.quotient.sys.rank == std::vector<int>{2, 0});
    CHECK(validate_module(zbar, split.quotient).empty());
}

TEST_CASE("the non-projective module is caught by the presentation solver") {
    // M with M^{C2} = Z, M^e = 0 as a twisted-module certificate: the
    // comparable statement for coefficient modules is exercised through
    // twisted_idempotent_presentation failing on Z with trivial C2-action
    // presented as the quotient Z[C2] -> Z
    auto c2 = catalog_group("C2");
    TwistedGroupRing t = twisted_group_ring(1, {IMat::identity(1)}, IMat::identity(1), IMat::identity(1), c2,
                                            std::vector<IMat>(2, IMat::identity(1)));
    // module Z with the sign action is projective over Z[C2]? no integer
    // splitting of the augmentation exists, so the presentation solver fails
    TwistedModule m;
    m.ring = t;
    m.rank = 1;
    m.act = {IMat::identity(1), IMat::identity(1)};  // trivial action
    CHECK(m.validate().empty());
    auto pres = twisted_idempotent_presentation(m);
    CHECK(!pres.has_value());
}

TEST_CASE("random idempotents: split, torsion-free quotients, k0 additivity") {
    std::mt19937_64 rng(21);
    for (const char* name : {"C2", "C4", "S3"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        CoefficientRing zbar = constant_ring(lat);
        int produced = 0;
        for (int it = 0; it < 60 && produced < 8; ++it) {
            GSet x = random_gset(rng, *lat, 3, 12);
            auto e = random_idempotent(rng, zbar, x);
            if (!e) continue;
            ++produced;
            ProjectiveModule p = projective_from_idempotent(zbar, x, *e);
            K0ClassVector v = k0_class_vector(p);
            // additivity under direct sum
            ProjectiveModule pp = projective_direct_sum(p, p);
            K0ClassVector v2 = k0_class_vector(pp);
            for (size_t c = 0; c < v.comp.size(); ++c) {
                CHECK(v2.comp[c].zrank == 2 * v.comp[c].zrank);
                REQUIRE(v2.comp[c].augrank.has_value());
                CHECK(*v2.comp[c].augrank == 2 * *v.comp[c].augrank);
            }
        }
        CHECK(produced > 0);
    }
}

TEST_CASE("k0 of free modules reproduces the orbit census") {
    std::mt19937_64 rng(23);
    for (const char* name : {"C4", "S3", "C2xC2"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        CoefficientRing zbar = constant_ring(lat);
        for (int it = 0; it < 5; ++it) {
            GSet x = random_gset(rng, *lat, 3, 12);
            ProjectiveModule p = free_module(zbar, x);
            K0ClassVector v = k0_class_vector(p);
            auto dec = orbit_decomposition(*lat, x);
            std::vector<long long> census(lat->num_classes(), 0);
            for (auto [c, m] : dec.census) census[c] += m;
            for (int c = 0; c < lat->num_classes(); ++c) {
                REQUIRE(v.comp[c].augrank.has_value());
                CHECK(*v.comp[c].augrank == census[c]);
                CHECK(*v.comp[c].reduced == 0);  // free modules have zero reduced class
            }
        }
    }
}

TEST_CASE("phi lift round trip") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);

    // q = identity rank 1 at class (C2) gives S_{G/C2}
    {
        TwistedGroupRing ring = twisted_ring_at_class(zbar, 1);
        IMat q = IMat::identity(ring.rank());
        ProjectiveModule phi = phi_lift(zbar, 1, 1, q);
        CHECK(phi.ambient.rank == std::vector<int>{1, 1});
        CHECK(phi.idem.is_identity());
        CHECK(phi_coordinates(zbar, 1, 1, phi) == q);
    }
    // q = 0 gives the zero module
    {
        TwistedGroupRing ring = twisted_ring_at_class(zbar, 0);
        IMat q(ring.rank(), ring.rank());
        ProjectiveModule phi = phi_lift(zbar, 0, 1, q);
        for (auto& b : phi.level_basis()) CHECK(b.cols == 0);
    }
    // the matrix [[1,1],[0,0]] with entries in Z[C2], acting on the rank-2
    // free twisted module by right multiplication
    {
        TwistedGroupRing ring = twisted_ring_at_class(zbar, 0);  // Z[C2]
        REQUIRE(ring.rank() == 2);
        auto right_op = [&](const IMat& r) {
            IMat m(ring.rank(), ring.rank());
            for (int c = 0; c < ring.rank(); ++c) {
                IMat ec(ring.rank(), 1);
                ec(c, 0) = 1;
                IMat prod = ring.mul(ec, r);
                for (int rr = 0; rr < ring.rank(); ++rr) m(rr, c) = prod(rr, 0);
            }
            return m;
        };
        IMat one = ring.unit();
        IMat zero(ring.rank(), 1);
        // phi(v)_l = sum_k v_k r_{kl} with r_11 = r_12 = 1, r_21 = r_22 = 0
        IMat q(2 * ring.rank(), 2 * ring.rank());
        paste(q, right_op(one), 0, 0);
        paste(q, right_op(one), ring.rank(), 0);
        ProjectiveModule phi = phi_lift(zbar, 0, 2, q);
        CHECK(phi.ambient.rank == std::vector<int>{4, 0});
        auto basis = phi.level_basis();
        CHECK(basis[0].cols == 2);  // level-e rank 2
        CHECK(phi_coordinates(zbar, 0, 2, phi) == q);
        EvalResult ev = evaluate_level(phi, 0);
        CHECK(ev.module.rank == 2);
    }
}

TEST_CASE("phi lift satisfies the hom identification") {
    std::mt19937_64 rng(31);
    auto lat = subgroup_lattice(catalog_group("S3"));
    CoefficientRing zbar = constant_ring(lat);
    for (int cls = 0; cls < lat->num_classes(); ++cls) {
        TwistedGroupRing ring = twisted_ring_at_class(zbar, cls);
        int n = 1;
        // random twisted idempotent by newton from small seeds
        TwistedModule fr = free_twisted_module(ring, n);
        IMat q(fr.rank, fr.rank);
        bool have = false;
        for (int tries = 0; tries < 40 && !have; ++tries) {
            auto homs = twisted_hom(fr, fr);
            IMat cand(fr.rank, fr.rank);
            for (auto& b : homs) {
                long long c = (long long)(rng() % 3) - 1;
                if (c != 0) cand = mat_add(cand, mat_scale(b, c));
            }
            for (int it = 0; it < 5; ++it) {
                if (mat_mul(cand, cand) == cand) break;
                IMat c2m = mat_mul(cand, cand);
                IMat c3m = mat_mul(c2m, cand);
                bool big = false;
                for (long long v : c3m.a)
                    if (std::llabs(v) > 100000) big = true;
                if (big) break;
                cand = mat_sub(mat_scale(c2m, 3), mat_scale(c3m, 2));
            }
            if (mat_mul(cand, cand) == cand) {
                q = cand;
                have = true;
            }
        }
        REQUIRE(have);
        ProjectiveModule phi = phi_lift(zbar, cls, n, q);
        EvalResult ev = evaluate_level(phi, cls);
        CHECK(ev.module.validate().empty());
        CHECK(phi_coordinates(zbar, cls, n, phi) == q);

        // Hom(Phi(Q), M) vs Hom_theta(Q, M^{H_cls}) for a random projective M
        GSet y = random_gset(rng, *lat, 2, 8);
        ProjectiveModule m = free_module(zbar, y);
        auto lhs = module_hom(phi, m);
        // rhs: morphisms im(q) -> M^{H} over the twisted ring
        TwistedModule qmod;
        qmod.ring = ring;
        IMat qbasis = column_lattice_basis(q);
        qmod.rank = qbasis.cols;
        for (int i = 0; i < ring.rank(); ++i) {
            IMat moved = mat_mul(fr.act[i], qbasis);
            auto coords = lattice_coords(qbasis.cols ? qbasis : IMat(fr.rank, 0), moved);
            REQUIRE(coords.has_value());
            qmod.act.push_back(*coords);
        }
        EvalResult evm = evaluate_level(m, cls);
        auto rhs = twisted_hom(qmod, evm.module);
        CHECK(lhs.size() == rhs.size());
    }
}

TEST_CASE("comparison F: constant system collapses, Phi splits back") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);

    // F of the constant module is 0 (restriction surjects)
    CoeffModule constm = free_coeff_module(zbar, canonical_orbit(*c2lat, 1));
    ComparisonF f = comparison_F(zbar, constm);
    CHECK(f.module.rank == 0);

    // F(Phi(N)) = N for a free twisted module
    TwistedGroupRing ring = twisted_ring_at_class(zbar, 0);
    TwistedModule n = free_twisted_module(ring, 1);
    CoeffModule phi_n = comparison_Phi(zbar, n);
    CHECK(validate_module(zbar, phi_n).empty());
    ComparisonF back = comparison_F(zbar, phi_n);
    CHECK(back.module.rank == n.rank);
    CHECK(back.torsion.empty());
    for (int i = 0; i < ring.rank(); ++i) CHECK(back.module.act[i] == n.act[i]);

    // F of the zero module is zero
    CoeffModule zero = free_coeff_module(zbar, empty_gset(c2lat->grp));
    CHECK(comparison_F(zbar, zero).module.rank == 0);
}

TEST_CASE("comparison F preserves projectivity") {
    std::mt19937_64 rng(37);
    auto c4 = subgroup_lattice(catalog_group("C4"));
    CoefficientRing zbar = constant_ring(c4);
    int produced = 0;
    for (int it = 0; it < 40 && produced < 5; ++it) {
        GSet x = random_gset(rng, *c4, 2, 8);
        auto e = random_idempotent(rng, zbar, x);
        if (!e) continue;
        ++produced;
        ProjectiveModule p = projective_from_idempotent(zbar, x, *e);
        ComparisonF f = comparison_F_projective(p);
        CHECK(f.torsion.empty());
        CHECK(f.module.validate().empty());
        auto pres = twisted_idempotent_presentation(f.module);
        CHECK(pres.has_value());
    }
    CHECK(produced > 0);
}

TEST_CASE("perfect complexes: identity complex and a single module") {
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);
    ProjectiveModule p = free_module(zbar, canonical_orbit(*c2lat, 0));

    // 0 -> P -> P -> 0 with the identity: homology vanishes, euler zero
    PerfectComplex c;
    c.ring = zbar;
    c.mods = {p, p};
    c.d = {identity_morphism(p.ambient)};
    PerfectInvariants inv = perfect_invariants(c);
    for (auto& levels : inv.homology)
        for (auto& hg : levels) CHECK(hg == HomologyGroup{});
    for (auto& comp : inv.euler.comp) CHECK(comp.zrank == 0);

    // single module in degree 0
    PerfectComplex c2;
    c2.ring = zbar;
    c2.mods = {p};
    PerfectInvariants inv2 = perfect_invariants(c2);
    CHECK(inv2.homology[0][0].free_rank == 2);
    K0ClassVector direct = k0_class_vector(p);
    for (size_t cc = 0; cc < direct.comp.size(); ++cc)
        CHECK(inv2.euler.comp[cc].zrank == direct.comp[cc].zrank);
}

TEST_CASE("perfect complex homology matches brute force over C2") {
    // S_{C2/e} --fold--> S_{C2/C2}: homology H0 = coker, H1 = ker
    auto c2lat = subgroup_lattice(catalog_group("C2"));
    CoefficientRing zbar = constant_ring(c2lat);
    ProjectiveModule pe = free_module(zbar, canonical_orbit(*c2lat, 0));
    ProjectiveModule pg = free_module(zbar, canonical_orbit(*c2lat, 1));
    auto homs = module_hom(pe, pg);
    REQUIRE(!homs.empty());
    // pick the fold (all-ones at level e)
    CoeffMorphism fold;
    bool found = false;
    for (auto& f : homs) {
        if (f.level[0].rows == 1 && f.level[0](0, 0) == 1 && f.level[0](0, 1) == 1) {
            fold = f;
            found = true;
        }
    }
    if (!found) {
        // build it from generator values instead
        IMat v(1, 1);
        v(0, 0) = 1;
        fold = free_hom_from_values(zbar, canonical_orbit(*c2lat, 0), canonical_orbit(*c2lat, 1), {v});
    }
    PerfectComplex c;
    c.ring = zbar;
    c.mods = {pg, pe};
    c.d = {fold};
    PerfectInvariants inv = perfect_invariants(c);
    // level e: Z^2 -> Z surjective: H0 = 0... H0 = coker = 0, H1 = ker = Z
    CHECK(inv.homology[0][0] == HomologyGroup{0, {}});
    CHECK(inv.homology[0][1] == HomologyGroup{1, {}});
    // level C2: 0 -> Z: H0 = Z
    CHECK(inv.homology[1][0] == HomologyGroup{1, {}});
    CHECK(inv.homology[1][1] == HomologyGroup{0, {}});

    // brute force at level e: kernel and cokernel of the fold matrix
    IMat m = fold.level[0];
    CHECK(kernel_basis(m).cols == 1);
    QuotientShape q = quotient_shape(1, column_lattice_basis(m));
    CHECK(q.free_rank == 0);
    CHECK(q.torsion.empty());
}

TEST_CASE("extension of scalars: induced level e is the twisted tensor") {
    // I^K_H(M)^e = R_theta[K] (x)_{R_theta[H]} M^e: rank |K/H| * rank M^e and
    // matching K-action matrices
    for (const char* name : {"C4", "S3"}) {
        auto lat = subgroup_lattice(catalog_group(name));
        const FiniteGroup& G = *lat->grp;
        for (int h = 0; h < lat->num_subgroups(); ++h) {
            const SubgroupContext& ctx = context_cached(lat, lat->group_index());
            (void)ctx;
            const SubgroupContext& ch = context_cached(lat, h);
            CoefficientSystem m = free_system(ch.lat, canonical_orbit(*ch.lat, 0));
            CoefficientSystem ind = induce_system(m, ch);
            size_t index = lat->subs[lat->group_index()].elems.size() / lat->subs[h].elems.size();
            CHECK(ind.rank[0] == int(index) * m.rank[0]);
            // the level-e K-action through Weyl maps is a permutation action
            // with residual H-elements: multiplicativity is functoriality
            for (int a = 0; a < G.n; ++a)
                for (int b = 0; b < G.n; ++b) {
                    const IMat& ma = ind.map_of({0, 0, a});
                    const IMat& mb = ind.map_of({0, 0, b});
                    CHECK(mat_mul(ma, mb) == ind.map_of({0, 0, G.mul(a, b)}));
                }
            break;
        }
    }
}
