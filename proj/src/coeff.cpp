#include "equik/coeff.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace equik {

std::vector<MorKey> orbit_morphisms(const SubgroupLattice& lat, int src, int dst) {
    const FiniteGroup& G = *lat.grp;
    std::vector<MorKey> out;
    std::set<int> seen;
    for (int g = 0; g < G.n; ++g) {
        int r = coset_rep(lat, g, dst);
        if (seen.count(r)) continue;
        seen.insert(r);
        if (lat.leq[lat.conjugate_subgroup(src, r)][dst]) out.push_back({src, dst, r});
    }
    std::sort(out.begin(), out.end());
    return out;
}

MorKey quotient_morphism(const SubgroupLattice& lat, int h, int k) {
    if (!lat.leq[h][k]) throw std::runtime_error("quotient_morphism: H not inside K");
    return {h, k, 0};
}

MorKey compose_morphisms(const SubgroupLattice& lat, const MorKey& f1, const MorKey& f2) {
    if (f1.dst != f2.src) throw std::runtime_error("compose_morphisms: middle mismatch");
    int ab = lat.grp->mul(f1.rep, f2.rep);
    return {f1.src, f2.dst, coset_rep(lat, ab, f2.dst)};
}

const IMat& CoefficientSystem::map_of(const MorKey& k) const {
    auto it = mor.find(k);
    if (it == mor.end()) throw std::runtime_error("coefficient system: unknown morphism key");
    return it->second;
}

bool CoefficientSystem::operator==(const CoefficientSystem& o) const {
    return (lat == o.lat || *lat == *o.lat) && rank == o.rank && mor == o.mor;
}

bool CoeffMorphism::is_zero() const {
    for (const auto& m : level)
        if (!m.is_zero()) return false;
    return true;
}

bool CoeffMorphism::is_identity() const {
    for (const auto& m : level)
        if (!m.is_identity()) return false;
    return true;
}

namespace {

// loop over all morphism keys of the lattice
template <typename F>
void for_all_keys(const SubgroupLattice& lat, F&& f) {
    for (int h = 0; h < lat.num_subgroups(); ++h)
        for (int k = 0; k < lat.num_subgroups(); ++k)
            for (const MorKey& key : orbit_morphisms(lat, h, k)) f(key);
}

}  // namespace

CoefficientSystem zero_system(LatticePtr lat) {
    CoefficientSystem m;
    m.lat = lat;
    m.rank.assign(lat->num_subgroups(), 0);
    for_all_keys(*lat, [&](const MorKey& k) { m.mor[k] = IMat(0, 0); });
    return m;
}

CoefficientSystem constant_system(LatticePtr lat) {
    CoefficientSystem m;
    m.lat = lat;
    m.rank.assign(lat->num_subgroups(), 1);
    for_all_keys(*lat, [&](const MorKey& k) { m.mor[k] = IMat::identity(1); });
    return m;
}

CoefficientSystem free_system(LatticePtr lat, const GSet& x) {
    CoefficientSystem m;
    m.lat = lat;
    int ns = lat->num_subgroups();
    std::vector<std::vector<int>> fp(ns);
    std::vector<std::vector<int>> pos(ns, std::vector<int>(x.size, -1));
    for (int h = 0; h < ns; ++h) {
        fp[h] = fixed_points(x, lat->subs[h].elems);
        for (size_t i = 0; i < fp[h].size(); ++i) pos[h][fp[h][i]] = int(i);
        m.rank.push_back(int(fp[h].size()));
    }
    for_all_keys(*lat, [&](const MorKey& key) {
        IMat mat(m.rank[key.src], m.rank[key.dst]);
        for (int c = 0; c < m.rank[key.dst]; ++c) {
            int xx = x.act[key.rep][fp[key.dst][c]];
            int r = pos[key.src][xx];
            if (r < 0) throw std::runtime_error("free_system: transported point not fixed");
            mat(r, c) = 1;
        }
        m.mor[key] = std::move(mat);
    });
    return m;
}

CoefficientSystem direct_sum(const CoefficientSystem& m, const CoefficientSystem& n) {
    if (!(*m.lat == *n.lat)) throw std::runtime_error("direct_sum: lattice mismatch");
    CoefficientSystem s;
    s.lat = m.lat;
    s.rank.resize(m.rank.size());
    for (size_t i = 0; i < m.rank.size(); ++i) s.rank[i] = m.rank[i] + n.rank[i];
    for (const auto& [key, mat] : m.mor) s.mor[key] = block_diag({mat, n.map_of(key)});
    return s;
}

CoefficientSystem box_product(const CoefficientSystem& m, const CoefficientSystem& n) {
    if (!(*m.lat == *n.lat)) throw std::runtime_error("box_product: lattice mismatch");
    CoefficientSystem s;
    s.lat = m.lat;
    s.rank.resize(m.rank.size());
    for (size_t i = 0; i < m.rank.size(); ++i) s.rank[i] = m.rank[i] * n.rank[i];
    for (const auto& [key, mat] : m.mor) s.mor[key] = kron(mat, n.map_of(key));
    return s;
}

CoeffMorphism identity_morphism(const CoefficientSystem& m) {
    CoeffMorphism f;
    f.lat = m.lat;
    for (int r : m.rank) f.level.push_back(IMat::identity(r));
    return f;
}

CoeffMorphism zero_morphism(const CoefficientSystem& m, const CoefficientSystem& n) {
    CoeffMorphism f;
    f.lat = m.lat;
    for (size_t i = 0; i < m.rank.size(); ++i) f.level.push_back(IMat(n.rank[i], m.rank[i]));
    return f;
}

CoeffMorphism compose(const CoeffMorphism& first, const CoeffMorphism& then) {
    CoeffMorphism f;
    f.lat = first.lat;
    for (size_t i = 0; i < first.level.size(); ++i) f.level.push_back(mat_mul(then.level[i], first.level[i]));
    return f;
}

CoeffMorphism morphism_sum(const CoeffMorphism& a, const CoeffMorphism& b) {
    CoeffMorphism f;
    f.lat = a.lat;
    for (size_t i = 0; i < a.level.size(); ++i) f.level.push_back(mat_add(a.level[i], b.level[i]));
    return f;
}

bool morphism_valid(const CoefficientSystem& m, const CoefficientSystem& n, const CoeffMorphism& f) {
    for (size_t h = 0; h < m.rank.size(); ++h)
        if (f.level[h].rows != n.rank[h] || f.level[h].cols != m.rank[h]) return false;
    for (const auto& [key, mmat] : m.mor) {
        const IMat& nmat = n.map_of(key);
        if (!(mat_mul(f.level[key.src], mmat) == mat_mul(nmat, f.level[key.dst]))) return false;
    }
    return true;
}

bool morphism_invertible(const CoeffMorphism& f) {
    for (const auto& m : f.level)
        if (!is_int_invertible(m)) return false;
    return true;
}

CoeffMorphism morphism_inverse(const CoeffMorphism& f) {
    CoeffMorphism g;
    g.lat = f.lat;
    for (const auto& m : f.level) g.level.push_back(int_inverse(m));
    return g;
}

CoeffMorphism morphism_direct_sum(const CoeffMorphism& a, const CoeffMorphism& b) {
    CoeffMorphism f;
    f.lat = a.lat;
    for (size_t i = 0; i < a.level.size(); ++i) f.level.push_back(block_diag({a.level[i], b.level[i]}));
    return f;
}

std::vector<CoeffMorphism> hom_system(const CoefficientSystem& m, const CoefficientSystem& n) {
    const SubgroupLattice& lat = *m.lat;
    int ns = lat.num_subgroups();
    // flatten unknowns phi_h (rank_n[h] x rank_m[h])
    std::vector<int> offset(ns + 1, 0);
    for (int h = 0; h < ns; ++h) offset[h + 1] = offset[h] + n.rank[h] * m.rank[h];
    int nvars = offset[ns];
    std::vector<std::vector<long long>> rows;
    auto var = [&](int h, int r, int c) { return offset[h] + r * m.rank[h] + c; };
    for (const auto& [key, mmat] : m.mor) {
        const IMat& nmat = n.map_of(key);
        int h = key.src, k = key.dst;
        for (int r = 0; r < n.rank[h]; ++r)
            for (int c = 0; c < m.rank[k]; ++c) {
                std::vector<long long> row(nvars, 0);
                for (int j = 0; j < m.rank[h]; ++j) row[var(h, r, j)] += mmat(j, c);
                for (int i = 0; i < n.rank[k]; ++i) row[var(k, i, c)] -= nmat(r, i);
                bool nonzero = false;
                for (long long v : row)
                    if (v) nonzero = true;
                if (nonzero) rows.push_back(std::move(row));
            }
    }
    IMat A(int(rows.size()), nvars);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < nvars; ++j) A(int(i), j) = rows[i][j];
    IMat K = nvars ? kernel_basis(A) : IMat(0, 0);
    std::vector<CoeffMorphism> basis;
    for (int b = 0; b < K.cols; ++b) {
        CoeffMorphism f;
        f.lat = m.lat;
        for (int h = 0; h < ns; ++h) {
            IMat lv(n.rank[h], m.rank[h]);
            for (int r = 0; r < n.rank[h]; ++r)
                for (int c = 0; c < m.rank[h]; ++c) lv(r, c) = K(var(h, r, c), b);
            f.level.push_back(std::move(lv));
        }
        basis.push_back(std::move(f));
    }
    return basis;
}

std::vector<std::string> GRingWithAction::validate() const {
    std::vector<std::string> bad;
    auto mul_op = [&](const IMat& v) {
        IMat op(rank, rank);
        for (int l = 0; l < rank; ++l)
            for (int r = 0; r < rank; ++r)
                for (int c = 0; c < rank; ++c) op(r, c) = checked_add(op(r, c), checked_mul(v(l, 0), left[l](r, c)));
        return op;
    };
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) {
            IMat ei(rank, 1), ej(rank, 1);
            ei(i, 0) = 1;
            ej(j, 0) = 1;
            IMat prod = mat_mul(left[i], ej);
            if (!(mat_mul(mul_op(prod), IMat::identity(rank)) == mat_mul(left[i], left[j])))
                bad.push_back("ring not associative at basis pair " + std::to_string(i) + "," + std::to_string(j));
        }
    IMat unit_op = mul_op(unit);
    if (!unit_op.is_identity()) bad.push_back("left unit law fails");
    for (int i = 0; i < rank; ++i) {
        IMat ei(rank, 1);
        ei(i, 0) = 1;
        if (!(mat_mul(left[i], unit) == ei)) bad.push_back("right unit law fails at basis " + std::to_string(i));
    }
    const FiniteGroup& G = *grp;
    for (int a = 0; a < G.n; ++a)
        for (int b = 0; b < G.n; ++b)
            if (!(mat_mul(action[G.mul(a, b)], IMat::identity(rank)) == mat_mul(action[a], action[b])))
                bad.push_back("action not multiplicative");
    for (int a = 0; a < G.n; ++a) {
        if (!(mat_mul(action[a], unit) == unit)) bad.push_back("action does not fix unit");
        for (int i = 0; i < rank; ++i) {
            // g(e_i * x) = g(e_i) * g(x)
            IMat lhs = mat_mul(action[a], left[i]);
            IMat gei = mat_mul(action[a], [&] {
                IMat e(rank, 1);
                e(i, 0) = 1;
                return e;
            }());
            IMat rhs = mat_mul(mul_op(gei), action[a]);
            if (!(lhs == rhs)) bad.push_back("action not by ring maps");
        }
    }
    if (aug) {
        for (int i = 0; i < rank; ++i)
            if (!(mat_mul(*aug, left[i]) == mat_scale(*aug, (*aug)(0, i))))
                bad.push_back("augmentation not a ring map");
        if (mat_mul(*aug, unit)(0, 0) != 1) bad.push_back("augmentation does not send unit to 1");
        for (int a = 0; a < G.n; ++a)
            if (!(mat_mul(*aug, action[a]) == *aug)) bad.push_back("augmentation not action invariant");
    }
    return bad;
}

GRingWithAction gring_group_ring(GroupPtr pi, GroupPtr g, const std::vector<std::vector<int>>& action_on_pi) {
    GRingWithAction r;
    r.rank = pi->n;
    r.grp = g;
    for (int i = 0; i < pi->n; ++i) {
        IMat m(pi->n, pi->n);
        for (int j = 0; j < pi->n; ++j) m(pi->mul(i, j), j) = 1;
        r.left.push_back(std::move(m));
    }
    r.unit = IMat(pi->n, 1);
    r.unit(0, 0) = 1;
    for (int a = 0; a < g->n; ++a) {
        IMat m(pi->n, pi->n);
        for (int j = 0; j < pi->n; ++j) m(action_on_pi[a][j], j) = 1;
        r.action.push_back(std::move(m));
    }
    IMat aug(1, pi->n);
    for (int j = 0; j < pi->n; ++j) aug(0, j) = 1;
    r.aug = aug;
    auto bad = r.validate();
    if (!bad.empty()) throw std::runtime_error("gring_group_ring: " + bad.front());
    return r;
}

GRingWithAction gring_trivial_z(GroupPtr g) {
    GRingWithAction r;
    r.rank = 1;
    r.grp = g;
    r.left = {IMat::identity(1)};
    r.unit = IMat::identity(1);
    r.action.assign(g->n, IMat::identity(1));
    r.aug = IMat::identity(1);
    return r;
}

CoefficientRing constant_ring(LatticePtr lat) {
    CoefficientRing s;
    s.sys = constant_system(lat);
    LevelRing lr;
    lr.left = {IMat::identity(1)};
    lr.unit = IMat::identity(1);
    lr.aug = IMat::identity(1);
    s.ring.assign(lat->num_subgroups(), lr);
    return s;
}

CoefficientRing fp_system(LatticePtr lat, const GRingWithAction& r) {
    auto bad = r.validate();
    if (!bad.empty()) throw std::runtime_error("fp_system: invalid input ring: " + bad.front());
    CoefficientRing s;
    s.sys.lat = lat;
    int ns = lat->num_subgroups();
    std::vector<IMat> basis(ns);
    for (int h = 0; h < ns; ++h) {
        // kernel of stacked (action(g) - 1) for g in H
        const auto& elems = lat->subs[h].elems;
        IMat stack(0, r.rank);
        for (int g : elems) {
            if (g == 0) continue;
            stack = vstack(stack, mat_sub(r.action[g], IMat::identity(r.rank)));
        }
        basis[h] = (stack.rows == 0) ? IMat::identity(r.rank) : kernel_basis(stack);
        s.sys.rank.push_back(basis[h].cols);
    }
    for_all_keys(*lat, [&](const MorKey& key) {
        // map R^K -> R^H is r |-> g . r in the chosen bases
        IMat moved = mat_mul(r.action[key.rep], basis[key.dst]);
        auto coords = lattice_coords(basis[key.src], moved);
        if (!coords) throw std::runtime_error("fp_system: transported fixed vector not in fixed lattice");
        s.sys.mor[key] = *coords;
    });
    for (int h = 0; h < ns; ++h) {
        LevelRing lr;
        int n = basis[h].cols;
        for (int i = 0; i < n; ++i) {
            IMat bi(r.rank, 1);
            for (int rr = 0; rr < r.rank; ++rr) bi(rr, 0) = basis[h](rr, i);
            IMat op(r.rank, r.rank);
            for (int l = 0; l < r.rank; ++l)
                for (int a = 0; a < r.rank; ++a)
                    for (int b = 0; b < r.rank; ++b)
                        op(a, b) = checked_add(op(a, b), checked_mul(bi(l, 0), r.left[l](a, b)));
            IMat prod = mat_mul(op, basis[h]);
            auto coords = lattice_coords(basis[h], prod);
            if (!coords) throw std::runtime_error("fp_system: product leaves fixed lattice");
            lr.left.push_back(*coords);
        }
        auto ucoords = lattice_coords(basis[h], r.unit);
        if (!ucoords) throw std::runtime_error("fp_system: unit not in fixed lattice");
        lr.unit = *ucoords;
        if (r.aug) lr.aug = mat_mul(*r.aug, basis[h]);
        s.ring.push_back(std::move(lr));
    }
    return s;
}

CoefficientRing group_ring_system(LatticePtr lat, const GroupRingSpec& spec) {
    CoefficientRing s;
    s.sys.lat = lat;
    int ns = lat->num_subgroups();
    for (int h = 0; h < ns; ++h) s.sys.rank.push_back(spec.pi[h]->n);
    for_all_keys(*lat, [&](const MorKey& key) {
        auto it = spec.hom.find(key);
        if (it == spec.hom.end()) throw std::runtime_error("group_ring_system: missing homomorphism for a morphism");
        const auto& f = it->second;
        IMat m(s.sys.rank[key.src], s.sys.rank[key.dst]);
        for (int j = 0; j < s.sys.rank[key.dst]; ++j) m(f[j], j) = 1;
        s.sys.mor[key] = std::move(m);
    });
    for (int h = 0; h < ns; ++h) {
        LevelRing lr;
        const auto& pi = *spec.pi[h];
        for (int i = 0; i < pi.n; ++i) {
            IMat m(pi.n, pi.n);
            for (int j = 0; j < pi.n; ++j) m(pi.mul(i, j), j) = 1;
            lr.left.push_back(std::move(m));
        }
        lr.unit = IMat(pi.n, 1);
        lr.unit(0, 0) = 1;
        IMat aug(1, pi.n);
        for (int j = 0; j < pi.n; ++j) aug(0, j) = 1;
        lr.aug = aug;
        s.ring.push_back(std::move(lr));
    }
    auto bad = validate_ring(s);
    if (!bad.empty()) throw std::runtime_error("group_ring_system: " + bad.front());
    return s;
}

std::vector<std::string> validate_system(const CoefficientSystem& m) {
    std::vector<std::string> bad;
    const SubgroupLattice& lat = *m.lat;
    int ns = lat.num_subgroups();
    for (int h = 0; h < ns; ++h) {
        MorKey id{h, h, 0};
        if (!m.map_of(id).is_identity()) bad.push_back("identity morphism at subgroup " + std::to_string(h));
    }
    for (const auto& [key, mat] : m.mor) {
        if (mat.rows != m.rank[key.src] || mat.cols != m.rank[key.dst])
            bad.push_back("matrix shape at morphism (" + std::to_string(key.src) + "," + std::to_string(key.dst) + ")");
    }
    // functoriality on all composable pairs
    for (int h = 0; h < ns; ++h)
        for (int k = 0; k < ns; ++k)
            for (const MorKey& f1 : orbit_morphisms(lat, h, k))
                for (int l = 0; l < ns; ++l)
                    for (const MorKey& f2 : orbit_morphisms(lat, k, l)) {
                        MorKey c = compose_morphisms(lat, f1, f2);
                        if (!(mat_mul(m.map_of(f1), m.map_of(f2)) == m.map_of(c))) {
                            bad.push_back("functoriality fails at (" + std::to_string(h) + "," + std::to_string(k) +
                                          "," + std::to_string(l) + ") rep " + std::to_string(f1.rep) + "," +
                                          std::to_string(f2.rep));
                        }
                    }
    return bad;
}

std::vector<std::string> validate_ring(const CoefficientRing& s) {
    std::vector<std::string> bad = validate_system(s.sys);
    const SubgroupLattice& lat = *s.sys.lat;
    int ns = lat.num_subgroups();
    auto mul_op = [&](int h, const IMat& v) {
        int n = s.sys.rank[h];
        IMat op(n, n);
        for (int l = 0; l < n; ++l)
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    op(r, c) = checked_add(op(r, c), checked_mul(v(l, 0), s.ring[h].left[l](r, c)));
        return op;
    };
    for (int h = 0; h < ns; ++h) {
        int n = s.sys.rank[h];
        const LevelRing& lr = s.ring[h];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                IMat ej(n, 1);
                ej(j, 0) = 1;
                IMat prod = mat_mul(lr.left[i], ej);
                if (!(mul_op(h, prod) == mat_mul(lr.left[i], lr.left[j])))
                    bad.push_back("level ring not associative at subgroup " + std::to_string(h));
            }
        if (!mul_op(h, lr.unit).is_identity()) bad.push_back("level unit fails at subgroup " + std::to_string(h));
        if (lr.aug) {
            for (int i = 0; i < n; ++i)
                if (!(mat_mul(*lr.aug, lr.left[i]) == mat_scale(*lr.aug, (*lr.aug)(0, i))))
                    bad.push_back("augmentation not multiplicative at subgroup " + std::to_string(h));
        }
    }
    for (const auto& [key, t] : s.sys.mor) {
        int h = key.src, k = key.dst;
        int nk = s.sys.rank[k];
        for (int i = 0; i < nk; ++i) {
            IMat ei(nk, 1);
            ei(i, 0) = 1;
            IMat tei = mat_mul(t, ei);
            if (!(mat_mul(t, s.ring[k].left[i]) == mat_mul(mul_op(h, tei), t))) {
                bad.push_back("structure map not a ring hom at (" + std::to_string(h) + "," + std::to_string(k) +
                              ") rep " + std::to_string(key.rep));
                break;
            }
        }
        if (!(mat_mul(t, s.ring[k].unit) == s.ring[h].unit))
            bad.push_back("structure map does not preserve unit at (" + std::to_string(h) + "," +
                          std::to_string(k) + ")");
    }
    return bad;
}

}  // namespace equik
