#include "equik/module.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace equik {

IMat TwistedGroupRing::unit() const {
    IMat u(rank(), 1);
    for (int i = 0; i < base_rank; ++i) u(idx(i, 0), 0) = base_unit(i, 0);
    return u;
}

std::optional<IMat> TwistedGroupRing::aug() const {
    if (!base_aug) return std::nullopt;
    IMat a(1, rank());
    for (int i = 0; i < base_rank; ++i)
        for (int wi = 0; wi < w->n; ++wi) a(0, idx(i, wi)) = (*base_aug)(0, i);
    return a;
}

IMat TwistedGroupRing::basis_vec(int i, int wi) const {
    IMat v(rank(), 1);
    v(idx(i, wi), 0) = 1;
    return v;
}

IMat TwistedGroupRing::left_op(const IMat& v) const {
    IMat op(rank(), rank());
    for (int i = 0; i < base_rank; ++i)
        for (int w1 = 0; w1 < w->n; ++w1) {
            long long c = v(idx(i, w1), 0);
            if (c == 0) continue;
            for (int j = 0; j < base_rank; ++j)
                for (int w2 = 0; w2 < w->n; ++w2) {
                    int wt = w->mul(w1, w2);
                    // e_i * (A_{w1} e_j) in the base ring
                    for (int k = 0; k < base_rank; ++k) {
                        long long a = action[w1](k, j);
                        if (a == 0) continue;
                        for (int l = 0; l < base_rank; ++l) {
                            long long b = base_left[i](l, k);
                            if (b == 0) continue;
                            op(idx(l, wt), idx(j, w2)) =
                                checked_add(op(idx(l, wt), idx(j, w2)), checked_mul(c, checked_mul(a, b)));
                        }
                    }
                }
        }
    return op;
}

IMat TwistedGroupRing::mul(const IMat& a, const IMat& b) const { return mat_mul(left_op(a), b); }

std::vector<std::string> TwistedGroupRing::validate() const {
    std::vector<std::string> bad;
    std::vector<IMat> ops;
    for (int i = 0; i < base_rank; ++i)
        for (int wi = 0; wi < w->n; ++wi) ops.push_back(left_op(basis_vec(i, wi)));
    // note: ops indexed by idx(i, wi) = i*|W| + wi, matching the push order
    for (int a = 0; a < rank(); ++a)
        for (int b = 0; b < rank(); ++b) {
            IMat eb(rank(), 1);
            eb(b, 0) = 1;
            IMat prod = mat_mul(ops[a], eb);
            if (!(left_op(prod) == mat_mul(ops[a], ops[b]))) {
                bad.push_back("twisted ring not associative at basis pair " + std::to_string(a) + "," +
                              std::to_string(b));
                return bad;
            }
        }
    if (!left_op(unit()).is_identity()) bad.push_back("twisted ring left unit fails");
    for (int a = 0; a < rank(); ++a) {
        IMat ea(rank(), 1);
        ea(a, 0) = 1;
        if (!(mat_mul(ops[a], unit()) == ea)) bad.push_back("twisted ring right unit fails");
    }
    if (auto ag = aug()) {
        for (int a = 0; a < rank(); ++a)
            if (!(mat_mul(*ag, ops[a]) == mat_scale(*ag, (*ag)(0, a))))
                bad.push_back("twisted ring augmentation not multiplicative");
    }
    return bad;
}

TwistedGroupRing twisted_group_ring(int base_rank, std::vector<IMat> base_left, IMat base_unit,
                                    std::optional<IMat> base_aug, GroupPtr w, std::vector<IMat> action) {
    TwistedGroupRing t;
    t.base_rank = base_rank;
    t.base_left = std::move(base_left);
    t.base_unit = std::move(base_unit);
    t.base_aug = std::move(base_aug);
    t.w = w;
    t.action = std::move(action);
    for (int a = 0; a < w->n; ++a)
        for (int b = 0; b < w->n; ++b)
            if (!(t.action[w->mul(a, b)] == mat_mul(t.action[a], t.action[b])))
                throw std::runtime_error("twisted_group_ring: action not multiplicative");
    auto bad = t.validate();
    if (!bad.empty()) throw std::runtime_error("twisted_group_ring: " + bad.front());
    return t;
}

TwistedGroupRing twisted_ring_at_class(const CoefficientRing& s, int cls) {
    const SubgroupLattice& lat = *s.sys.lat;
    int h = lat.cls_rep[cls];
    WeylData wd = weyl_group(lat, h);
    std::vector<IMat> action;
    for (int wi = 0; wi < wd.weyl->n; ++wi) {
        int n = wd.coset_rep[wi];
        action.push_back(s.sys.map_of({h, h, coset_rep(lat, n, h)}));
    }
    return twisted_group_ring(s.sys.rank[h], s.ring[h].left, s.ring[h].unit, s.ring[h].aug, wd.weyl,
                              std::move(action));
}

GroupPtr monomial_group(const TwistedGroupRing& t) {
    int n = t.rank();
    std::vector<std::vector<int>> table(n, std::vector<int>(n, -1));
    for (int a = 0; a < n; ++a) {
        IMat ea(n, 1);
        ea(a, 0) = 1;
        IMat op = t.left_op(ea);
        for (int b = 0; b < n; ++b) {
            int target = -1;
            for (int r = 0; r < n; ++r) {
                if (op(r, b) == 0) continue;
                if (op(r, b) != 1 || target >= 0) throw std::runtime_error("monomial_group: not monomial");
                target = r;
            }
            if (target < 0) throw std::runtime_error("monomial_group: basis product vanished");
            table[a][b] = target;
        }
    }
    // renumber so the identity is element 0
    std::vector<int> idv(n);
    for (int i = 0; i < n; ++i) idv[i] = i;
    int e = -1;
    for (int a = 0; a < n; ++a)
        if (table[a] == idv) e = a;
    if (e < 0) throw std::runtime_error("monomial_group: no identity");
    std::vector<int> order;
    order.push_back(e);
    for (int a = 0; a < n; ++a)
        if (a != e) order.push_back(a);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<std::vector<int>> table2(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) table2[a][b] = pos[table[order[a]][order[b]]];
    return group_from_table(std::move(table2));
}

IMat TwistedModule::act_op(const IMat& rvec) const {
    IMat op(rank, rank);
    for (int i = 0; i < ring.rank(); ++i) {
        long long c = rvec(i, 0);
        if (c == 0) continue;
        op = mat_add(op, mat_scale(act[i], c));
    }
    return op;
}

std::vector<std::string> TwistedModule::validate() const {
    std::vector<std::string> bad;
    if (!act_op(ring.unit()).is_identity()) bad.push_back("twisted module: unit acts nontrivially");
    for (int a = 0; a < ring.rank(); ++a)
        for (int b = 0; b < ring.rank(); ++b) {
            IMat ea(ring.rank(), 1), eb(ring.rank(), 1);
            ea(a, 0) = 1;
            eb(b, 0) = 1;
            IMat prod = ring.mul(ea, eb);
            if (!(act_op(prod) == mat_mul(act[a], act[b]))) {
                bad.push_back("twisted module: action not multiplicative");
                return bad;
            }
        }
    return bad;
}

TwistedModule free_twisted_module(const TwistedGroupRing& ring, int n) {
    TwistedModule m;
    m.ring = ring;
    m.rank = n * ring.rank();
    for (int i = 0; i < ring.base_rank; ++i)
        for (int wi = 0; wi < ring.w->n; ++wi) {
            IMat op = ring.left_op(ring.basis_vec(i, wi));
            std::vector<IMat> blocks(n, op);
            m.act.push_back(block_diag(blocks));
        }
    return m;
}

std::vector<IMat> twisted_hom(const TwistedModule& a, const TwistedModule& b) {
    int nv = b.rank * a.rank;
    std::vector<std::vector<long long>> rows;
    auto var = [&](int r, int c) { return r * a.rank + c; };
    for (int i = 0; i < a.ring.rank(); ++i) {
        for (int r = 0; r < b.rank; ++r)
            for (int c = 0; c < a.rank; ++c) {
                std::vector<long long> row(nv, 0);
                for (int k = 0; k < a.rank; ++k) row[var(r, k)] += a.act[i](k, c);
                for (int k = 0; k < b.rank; ++k) row[var(k, c)] -= b.act[i](r, k);
                bool nz = false;
                for (long long v : row)
                    if (v) nz = true;
                if (nz) rows.push_back(std::move(row));
            }
    }
    IMat A(int(rows.size()), nv);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < nv; ++j) A(int(i), j) = rows[i][j];
    IMat K = nv ? kernel_basis(A) : IMat(0, 0);
    std::vector<IMat> out;
    for (int c = 0; c < K.cols; ++c) {
        IMat f(b.rank, a.rank);
        for (int r = 0; r < b.rank; ++r)
            for (int cc = 0; cc < a.rank; ++cc) f(r, cc) = K(var(r, cc), c);
        out.push_back(std::move(f));
    }
    return out;
}

std::optional<long long> twisted_aug_rank(const TwistedModule& m) {
    auto ag = m.ring.aug();
    if (!ag) return std::nullopt;
    IMat span(m.rank, 0);
    for (int i = 0; i < m.ring.rank(); ++i) {
        IMat d = mat_sub(m.act[i], mat_scale(IMat::identity(m.rank), (*ag)(0, i)));
        span = hstack(span, d);
    }
    QuotientShape q = quotient_shape(m.rank, column_lattice_basis(span));
    return q.free_rank;
}

std::optional<TwistedPresentation> twisted_idempotent_presentation(const TwistedModule& m) {
    int rr = m.ring.rank();
    int n = m.rank;
    if (n == 0) {
        TwistedPresentation pres;
        pres.generators = 0;
        pres.idem = IMat(0, 0);
        pres.onto = IMat(0, 0);
        pres.section = IMat(0, 0);
        return pres;
    }
    TwistedModule fr = free_twisted_module(m.ring, n);
    IMat onto(m.rank, fr.rank);
    for (int k = 0; k < n; ++k)
        for (int rho = 0; rho < rr; ++rho)
            for (int r = 0; r < m.rank; ++r) onto(r, k * rr + rho) = m.act[rho](r, k);
    int nv = fr.rank * m.rank;
    std::vector<std::vector<long long>> rows;
    std::vector<long long> rhs;
    auto var = [&](int r, int c) { return r * m.rank + c; };
    for (int i = 0; i < rr; ++i)
        for (int r = 0; r < fr.rank; ++r)
            for (int c = 0; c < m.rank; ++c) {
                std::vector<long long> row(nv, 0);
                for (int k = 0; k < m.rank; ++k) row[var(r, k)] += m.act[i](k, c);
                for (int k = 0; k < fr.rank; ++k) row[var(k, c)] -= fr.act[i](r, k);
                rows.push_back(std::move(row));
                rhs.push_back(0);
            }
    for (int r = 0; r < m.rank; ++r)
        for (int c = 0; c < m.rank; ++c) {
            std::vector<long long> row(nv, 0);
            for (int k = 0; k < fr.rank; ++k) row[var(k, c)] += onto(r, k);
            rows.push_back(std::move(row));
            rhs.push_back(r == c ? 1 : 0);
        }
    IMat A(int(rows.size()), nv), B(int(rows.size()), 1);
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < nv; ++j) A(int(i), j) = rows[i][j];
        B(int(i), 0) = rhs[i];
    }
    auto sol = solve(A, B);
    if (!sol) return std::nullopt;
    TwistedPresentation pres;
    pres.generators = n;
    pres.onto = onto;
    pres.section = IMat(fr.rank, m.rank);
    for (int r = 0; r < fr.rank; ++r)
        for (int c = 0; c < m.rank; ++c) pres.section(r, c) = (*sol)(var(r, c), 0);
    pres.idem = mat_mul(pres.section, onto);
    return pres;
}

// ---- modules over coefficient rings ----

std::vector<std::string> validate_module(const CoefficientRing& s, const CoeffModule& m) {
    std::vector<std::string> bad = validate_system(m.sys);
    const SubgroupLattice& lat = *s.sys.lat;
    for (int h = 0; h < lat.num_subgroups(); ++h) {
        int sr = s.sys.rank[h];
        auto op = [&](const IMat& v) {
            IMat o(m.sys.rank[h], m.sys.rank[h]);
            for (int l = 0; l < sr; ++l)
                if (v(l, 0) != 0) o = mat_add(o, mat_scale(m.act[h][l], v(l, 0)));
            return o;
        };
        if (!op(s.ring[h].unit).is_identity()) bad.push_back("module: unit acts nontrivially");
        for (int i = 0; i < sr; ++i)
            for (int j = 0; j < sr; ++j) {
                IMat ej(sr, 1);
                ej(j, 0) = 1;
                IMat prod = mat_mul(s.ring[h].left[i], ej);
                if (!(op(prod) == mat_mul(m.act[h][i], m.act[h][j]))) {
                    bad.push_back("module: action not associative at subgroup " + std::to_string(h));
                    break;
                }
            }
    }
    for (const auto& [key, t] : m.sys.mor) {
        int h = key.src, k = key.dst;
        for (int i = 0; i < s.sys.rank[k]; ++i) {
            IMat ei(s.sys.rank[k], 1);
            ei(i, 0) = 1;
            IMat tei = mat_mul(s.sys.map_of(key), ei);
            IMat lhs = mat_mul(t, m.act[k][i]);
            IMat op(m.sys.rank[h], m.sys.rank[h]);
            for (int l = 0; l < s.sys.rank[h]; ++l)
                if (tei(l, 0) != 0) op = mat_add(op, mat_scale(m.act[h][l], tei(l, 0)));
            if (!(lhs == mat_mul(op, t))) {
                bad.push_back("module: semilinearity fails at a structure map");
                break;
            }
        }
    }
    return bad;
}

IMat free_level_act(const CoefficientRing& s, const GSet& x, int sub, int ring_basis) {
    const SubgroupLattice& lat = *s.sys.lat;
    int fp = int(fixed_points(x, lat.subs[sub].elems).size());
    return kron(s.ring[sub].left[ring_basis], IMat::identity(fp));
}

CoeffModule free_coeff_module(const CoefficientRing& s, const GSet& x) {
    CoeffModule m;
    m.sys = box_product(s.sys, free_system(s.sys.lat, x));
    m.act.resize(s.sys.lat->num_subgroups());
    for (int h = 0; h < s.sys.lat->num_subgroups(); ++h)
        for (int i = 0; i < s.sys.rank[h]; ++i) m.act[h].push_back(free_level_act(s, x, h, i));
    return m;
}

std::vector<IMat> ProjectiveModule::level_basis() const {
    std::vector<IMat> out;
    for (const auto& lv : idem.level) out.push_back(column_lattice_basis(lv));
    return out;
}

ProjectiveModule free_module(const CoefficientRing& s, const GSet& x) {
    ProjectiveModule p;
    p.ring = s;
    p.x = x;
    p.ambient = box_product(s.sys, free_system(s.sys.lat, x));
    p.idem = identity_morphism(p.ambient);
    return p;
}

bool is_module_endo(const CoefficientRing& s, const GSet& x, const CoeffMorphism& f) {
    CoefficientSystem amb = box_product(s.sys, free_system(s.sys.lat, x));
    if (!morphism_valid(amb, amb, f)) return false;
    for (int h = 0; h < s.sys.lat->num_subgroups(); ++h)
        for (int i = 0; i < s.sys.rank[h]; ++i) {
            IMat a = free_level_act(s, x, h, i);
            if (!(mat_mul(f.level[h], a) == mat_mul(a, f.level[h]))) return false;
        }
    return true;
}

ProjectiveModule projective_from_idempotent(const CoefficientRing& s, const GSet& x, const CoeffMorphism& e) {
    ProjectiveModule p;
    p.ring = s;
    p.x = x;
    p.ambient = box_product(s.sys, free_system(s.sys.lat, x));
    for (size_t h = 0; h < e.level.size(); ++h)
        if (!(mat_mul(e.level[h], e.level[h]) == e.level[h]))
            throw std::runtime_error("projective_from_idempotent: not idempotent");
    if (!is_module_endo(s, x, e))
        throw std::runtime_error("projective_from_idempotent: not a module endomorphism");
    p.idem = e;
    return p;
}

ProjectiveModule projective_direct_sum(const ProjectiveModule& p, const ProjectiveModule& q) {
    ProjectiveModule s;
    s.ring = p.ring;
    s.x = coproduct_gset(p.x, q.x);
    s.ambient = box_product(p.ring.sys, free_system(p.ring.sys.lat, s.x));
    s.idem.lat = p.idem.lat;
    const SubgroupLattice& lat = *p.ring.sys.lat;
    for (int h = 0; h < lat.num_subgroups(); ++h) {
        int sr = p.ring.sys.rank[h];
        int nx = int(fixed_points(p.x, lat.subs[h].elems).size());
        int ny = int(fixed_points(q.x, lat.subs[h].elems).size());
        IMat m(sr * (nx + ny), sr * (nx + ny));
        for (int a = 0; a < sr; ++a)
            for (int b = 0; b < sr; ++b) {
                for (int i = 0; i < nx; ++i)
                    for (int j = 0; j < nx; ++j)
                        m(a * (nx + ny) + i, b * (nx + ny) + j) = p.idem.level[h](a * nx + i, b * nx + j);
                for (int i = 0; i < ny; ++i)
                    for (int j = 0; j < ny; ++j)
                        m(a * (nx + ny) + nx + i, b * (nx + ny) + nx + j) =
                            q.idem.level[h](a * ny + i, b * ny + j);
            }
        s.idem.level.push_back(std::move(m));
    }
    return s;
}

CoeffMorphism free_hom_from_values(const CoefficientRing& s, const GSet& x, const GSet& y,
                                   const std::vector<IMat>& values) {
    const SubgroupLattice& lat = *s.sys.lat;
    const FiniteGroup& G = *lat.grp;
    CoefficientSystem sy = box_product(s.sys, free_system(s.sys.lat, y));
    auto dec = orbit_decomposition(lat, x);
    CoeffMorphism f;
    f.lat = s.sys.lat;
    for (int h = 0; h < lat.num_subgroups(); ++h) {
        auto fx = fixed_points(x, lat.subs[h].elems);
        int sr = s.sys.rank[h];
        IMat m(sy.rank[h], sr * int(fx.size()));
        for (size_t xi = 0; xi < fx.size(); ++xi) {
            int o = -1, gamma = -1;
            for (size_t oo = 0; oo < dec.orbits.size() && o < 0; ++oo)
                for (int g = 0; g < G.n && o < 0; ++g)
                    if (x.act[g][dec.orbits[oo][0]] == fx[xi]) {
                        o = int(oo);
                        gamma = g;
                    }
            int ho = dec.stabilizer[o];
            IMat moved = mat_mul(sy.map_of({h, ho, coset_rep(lat, gamma, ho)}), values[o]);
            for (int i = 0; i < sr; ++i) {
                IMat acted = mat_mul(free_level_act(s, y, h, i), moved);
                for (int r = 0; r < sy.rank[h]; ++r) m(r, i * int(fx.size()) + int(xi)) = acted(r, 0);
            }
        }
        f.level.push_back(std::move(m));
    }
    return f;
}

std::vector<CoeffMorphism> free_module_hom(const CoefficientRing& s, const GSet& x, const GSet& y) {
    const SubgroupLattice& lat = *s.sys.lat;
    auto dec = orbit_decomposition(lat, x);
    CoefficientSystem sy = box_product(s.sys, free_system(s.sys.lat, y));
    std::vector<CoeffMorphism> out;
    for (size_t o = 0; o < dec.orbits.size(); ++o) {
        int ho = dec.stabilizer[o];
        for (int b = 0; b < sy.rank[ho]; ++b) {
            std::vector<IMat> values;
            for (size_t oo = 0; oo < dec.orbits.size(); ++oo) {
                IMat v(sy.rank[dec.stabilizer[oo]], 1);
                if (oo == o) v(b, 0) = 1;
                values.push_back(std::move(v));
            }
            out.push_back(free_hom_from_values(s, x, y, values));
        }
    }
    return out;
}

namespace {

std::vector<long long> flatten_morphism(const CoeffMorphism& f) {
    std::vector<long long> out;
    for (const auto& lv : f.level) out.insert(out.end(), lv.a.begin(), lv.a.end());
    return out;
}

}  // namespace

std::vector<CoeffMorphism> module_hom(const ProjectiveModule& p, const ProjectiveModule& q) {
    std::vector<CoeffMorphism> base = free_module_hom(p.ring, p.x, q.x);
    if (base.empty()) return {};
    std::vector<CoeffMorphism> imgs;
    for (const auto& psi : base) imgs.push_back(compose(compose(p.idem, psi), q.idem));
    int dim = int(flatten_morphism(imgs[0]).size());
    IMat span(dim, int(imgs.size()));
    for (size_t c = 0; c < imgs.size(); ++c) {
        auto v = flatten_morphism(imgs[c]);
        for (int r = 0; r < dim; ++r) span(r, int(c)) = v[r];
    }
    IMat basis = column_lattice_basis(span);
    std::vector<CoeffMorphism> out;
    for (int c = 0; c < basis.cols; ++c) {
        CoeffMorphism f;
        f.lat = p.idem.lat;
        int at = 0;
        for (const auto& lv : imgs[0].level) {
            IMat m(lv.rows, lv.cols);
            for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = basis(at + int(i), c);
            at += int(m.a.size());
            f.level.push_back(std::move(m));
        }
        out.push_back(std::move(f));
    }
    return out;
}

namespace {

std::vector<int> element_isotropy_class(const SubgroupLattice& lat, const GSet& x) {
    auto dec = orbit_decomposition(lat, x);
    std::vector<int> cls(x.size, -1);
    for (size_t o = 0; o < dec.orbits.size(); ++o)
        for (int e : dec.orbits[o]) cls[e] = lat.cls_of[dec.stabilizer[o]];
    return cls;
}

}  // namespace

IsotropySplit isotropy_split(const ProjectiveModule& p, int cls) {
    const SubgroupLattice& lat = *p.ring.sys.lat;
    const CoefficientRing& s = p.ring;
    int ns = lat.num_subgroups();
    for (int h = 0; h < ns; ++h)
        if (lat.cls_of[h] > cls && column_lattice_basis(p.idem.level[h]).cols != 0)
            throw std::runtime_error("isotropy_split: module does not vanish above the class");

    IsotropySplit out;
    out.p_basis = p.level_basis();

    std::vector<int> ecls = element_isotropy_class(lat, p.x);
    CoeffMorphism pi;
    pi.lat = p.idem.lat;
    for (int h = 0; h < ns; ++h) {
        auto fx = fixed_points(p.x, lat.subs[h].elems);
        int sr = s.sys.rank[h];
        IMat m(sr * int(fx.size()), sr * int(fx.size()));
        for (int i = 0; i < sr; ++i)
            for (size_t k = 0; k < fx.size(); ++k)
                if (ecls[fx[k]] == cls)
                    m(i * int(fx.size()) + int(k), i * int(fx.size()) + int(k)) = 1;
        pi.level.push_back(std::move(m));
    }
    CoeffMorphism big_e = compose(compose(p.idem, pi), p.idem);  // e pi e
    for (size_t h = 0; h < big_e.level.size(); ++h)
        if (!(mat_mul(big_e.level[h], big_e.level[h]) == big_e.level[h]))
            throw std::runtime_error("isotropy_split: splitting idempotent failed (input not projective)");
    ProjectiveModule sub;
    sub.ring = s;
    sub.x = p.x;
    sub.ambient = p.ambient;
    sub.idem = big_e;
    out.sub = sub;
    out.sub_basis = sub.level_basis();

    for (int h = 0; h < ns; ++h) {
        IMat moved = mat_mul(big_e.level[h], out.p_basis[h]);
        auto coords =
            lattice_coords(out.sub_basis[h].cols ? out.sub_basis[h] : IMat(out.p_basis[h].rows, 0), moved);
        if (!coords) throw std::runtime_error("isotropy_split: retraction leaves the submodule");
        out.retraction.push_back(*coords);
        IMat on_sub = mat_mul(big_e.level[h], out.sub_basis[h]);
        if (!(on_sub == out.sub_basis[h]))
            throw std::runtime_error("isotropy_split: retraction is not the identity on the submodule");
    }

    out.quotient.sys.lat = p.idem.lat;
    std::vector<IMat> proj(ns), sect(ns);
    for (int h = 0; h < ns; ++h) {
        IMat inc(out.p_basis[h].cols, out.sub_basis[h].cols);
        if (out.sub_basis[h].cols) {
            auto coords = lattice_coords(out.p_basis[h], out.sub_basis[h]);
            if (!coords) throw std::runtime_error("isotropy_split: submodule not inside the module");
            inc = *coords;
        }
        SmithResult sm = smith(inc);
        for (long long dv : sm.diag())
            if (dv != 1)
                throw std::runtime_error("isotropy_split: torsion in the quotient (input not projective)");
        int q = inc.rows - sm.rank;
        out.quotient.sys.rank.push_back(q);
        IMat uinv = int_inverse(sm.U);
        IMat pr(q, inc.rows), sc(inc.rows, q);
        for (int r = 0; r < q; ++r)
            for (int c = 0; c < inc.rows; ++c) pr(r, c) = sm.U(sm.rank + r, c);
        for (int r = 0; r < inc.rows; ++r)
            for (int c = 0; c < q; ++c) sc(r, c) = uinv(r, sm.rank + c);
        proj[h] = pr;
        sect[h] = sc;
    }
    out.proj = proj;
    for (int h = 0; h < ns; ++h)
        for (int k = 0; k < ns; ++k)
            for (const MorKey& key : orbit_morphisms(lat, h, k)) {
                IMat tp(out.p_basis[h].cols, out.p_basis[k].cols);
                if (out.p_basis[h].cols && out.p_basis[k].cols) {
                    auto coords =
                        lattice_coords(out.p_basis[h], mat_mul(p.ambient.map_of(key), out.p_basis[k]));
                    if (!coords) throw std::runtime_error("isotropy_split: structure map leaves the module");
                    tp = *coords;
                }
                out.quotient.sys.mor[key] = mat_mul(proj[h], mat_mul(tp, sect[k]));
            }
    out.quotient.act.resize(ns);
    for (int h = 0; h < ns; ++h)
        for (int i = 0; i < s.sys.rank[h]; ++i) {
            IMat ta(out.p_basis[h].cols, out.p_basis[h].cols);
            if (out.p_basis[h].cols) {
                auto coords =
                    lattice_coords(out.p_basis[h], mat_mul(free_level_act(s, p.x, h, i), out.p_basis[h]));
                if (!coords) throw std::runtime_error("isotropy_split: action leaves the module");
                ta = *coords;
            }
            out.quotient.act[h].push_back(mat_mul(proj[h], mat_mul(ta, sect[h])));
        }
    return out;
}

EvalResult evaluate_level(const ProjectiveModule& p, int cls) {
    const SubgroupLattice& lat = *p.ring.sys.lat;
    int h = lat.cls_rep[cls];
    EvalResult res;
    res.level_idempotent = p.idem.level[h];
    res.lattice = column_lattice_basis(p.idem.level[h]);
    res.module.ring = twisted_ring_at_class(p.ring, cls);
    res.module.rank = res.lattice.cols;
    WeylData wd = weyl_group(lat, h);
    for (int i = 0; i < p.ring.sys.rank[h]; ++i)
        for (int wi = 0; wi < wd.weyl->n; ++wi) {
            IMat amb = mat_mul(free_level_act(p.ring, p.x, h, i),
                               p.ambient.map_of({h, h, coset_rep(lat, wd.coset_rep[wi], h)}));
            IMat moved = mat_mul(amb, res.lattice);
            auto coords = lattice_coords(res.lattice.cols ? res.lattice : IMat(amb.rows, 0), moved);
            if (!coords) throw std::runtime_error("evaluate_level: action leaves the lattice");
            res.module.act.push_back(*coords);
        }
    return res;
}

namespace {

struct PhiIdentification {
    int n = 0;
    int ring_rank = 0;
    std::vector<int> to_free;
    std::vector<int> to_amb;
};

PhiIdentification phi_identification(const CoefficientRing& s, int cls, int n, const GSet& y) {
    const SubgroupLattice& lat = *s.sys.lat;
    int h = lat.cls_rep[cls];
    WeylData wd = weyl_group(lat, h);
    auto fy = fixed_points(y, lat.subs[h].elems);
    int orbit_size = canonical_orbit(lat, h).size;
    int sr = s.sys.rank[h];
    int nw = wd.weyl->n;
    PhiIdentification id;
    id.n = n;
    id.ring_rank = sr * nw;
    if (int(fy.size()) != n * nw) throw std::runtime_error("phi_identification: fixed point count mismatch");
    id.to_free.assign(sr * n * nw, -1);
    id.to_amb.assign(n * sr * nw, -1);
    for (int i = 0; i < sr; ++i)
        for (size_t f = 0; f < fy.size(); ++f) {
            int copy = fy[f] / orbit_size;
            int local = fy[f] % orbit_size;
            int wi = -1;
            for (int cand = 0; cand < nw; ++cand)
                if (orbit_coset_id(lat, h, wd.coset_rep[cand]) == local) wi = cand;
            if (wi < 0) throw std::runtime_error("phi_identification: fixed coset is not a Weyl coset");
            int ambient = i * int(fy.size()) + int(f);
            int free_idx = copy * (sr * nw) + i * nw + wi;
            id.to_free[ambient] = free_idx;
            id.to_amb[free_idx] = ambient;
        }
    return id;
}

}  // namespace

ProjectiveModule phi_lift(const CoefficientRing& s, int cls, int n, const IMat& idem) {
    const SubgroupLattice& lat = *s.sys.lat;
    int h = lat.cls_rep[cls];
    GSet orbit = canonical_orbit(lat, h);
    GSet y = empty_gset(lat.grp);
    for (int k = 0; k < n; ++k) y = coproduct_gset(y, orbit);
    TwistedGroupRing ring = twisted_ring_at_class(s, cls);
    if (idem.rows != n * ring.rank()) throw std::runtime_error("phi_lift: idempotent has wrong size");
    if (!(mat_mul(idem, idem) == idem)) throw std::runtime_error("phi_lift: matrix is not idempotent");
    TwistedModule fr = free_twisted_module(ring, n);
    for (int i = 0; i < ring.rank(); ++i)
        if (!(mat_mul(idem, fr.act[i]) == mat_mul(fr.act[i], idem)))
            throw std::runtime_error("phi_lift: idempotent is not a module endomorphism");

    PhiIdentification ident = phi_identification(s, cls, n, y);
    CoefficientSystem sy = box_product(s.sys, free_system(s.sys.lat, y));
    std::vector<IMat> values;
    for (int k = 0; k < n; ++k) {
        IMat gen(fr.rank, 1);
        IMat unit = ring.unit();
        for (int r = 0; r < ring.rank(); ++r) gen(k * ring.rank() + r, 0) = unit(r, 0);
        IMat img = mat_mul(idem, gen);
        IMat amb(sy.rank[h], 1);
        for (int r = 0; r < fr.rank; ++r) amb(ident.to_amb[r], 0) = img(r, 0);
        values.push_back(std::move(amb));
    }
    CoeffMorphism e = free_hom_from_values(s, y, y, values);
    for (size_t lv = 0; lv < e.level.size(); ++lv)
        if (!(mat_mul(e.level[lv], e.level[lv]) == e.level[lv]))
            throw std::runtime_error("phi_lift: lifted endomorphism is not idempotent");
    return projective_from_idempotent(s, y, e);
}

IMat phi_coordinates(const CoefficientRing& s, int cls, int n, const ProjectiveModule& lifted) {
    const SubgroupLattice& lat = *s.sys.lat;
    int h = lat.cls_rep[cls];
    PhiIdentification ident = phi_identification(s, cls, n, lifted.x);
    const IMat& amb = lifted.idem.level[h];
    int r = int(ident.to_amb.size());
    IMat out(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out(i, j) = amb(ident.to_amb[i], ident.to_amb[j]);
    return out;
}

K0ClassVector k0_class_vector(const ProjectiveModule& p) {
    const SubgroupLattice& lat = *p.ring.sys.lat;
    int nc = lat.num_classes();
    K0ClassVector out;
    out.comp.resize(nc);
    ProjectiveModule current = p;
    for (int c = nc - 1; c >= 0; --c) {
        IsotropySplit split = isotropy_split(current, c);
        EvalResult ev = evaluate_level(split.sub, c);
        out.comp[c].zrank = ev.module.rank;
        out.comp[c].augrank = twisted_aug_rank(ev.module);
        if (out.comp[c].augrank)
            out.comp[c].reduced = ev.module.rank - *out.comp[c].augrank * ev.module.ring.rank();
        ProjectiveModule rest;
        rest.ring = current.ring;
        rest.x = current.x;
        rest.ambient = current.ambient;
        rest.idem.lat = current.idem.lat;
        for (size_t hh = 0; hh < current.idem.level.size(); ++hh)
            rest.idem.level.push_back(mat_sub(current.idem.level[hh], split.sub.idem.level[hh]));
        current = rest;
    }
    return out;
}

ComparisonF comparison_F(const CoefficientRing& s, const CoeffModule& m) {
    const SubgroupLattice& lat = *s.sys.lat;
    ComparisonF out;
    int e_rank = m.sys.rank[0];
    IMat span(e_rank, 0);
    for (int k = 1; k < lat.num_subgroups(); ++k)
        for (const MorKey& key : orbit_morphisms(lat, 0, k)) span = hstack(span, m.sys.map_of(key));
    IMat sub = column_lattice_basis(span);
    SmithResult sm = smith(sub.cols ? sub : IMat(e_rank, 0));
    for (long long dv : sm.diag())
        if (dv != 1) out.torsion.push_back(dv);
    int q = e_rank - sm.rank;
    IMat uinv = int_inverse(sm.U);
    out.proj = IMat(q, e_rank);
    out.section = IMat(e_rank, q);
    for (int r = 0; r < q; ++r)
        for (int c = 0; c < e_rank; ++c) out.proj(r, c) = sm.U(sm.rank + r, c);
    for (int r = 0; r < e_rank; ++r)
        for (int c = 0; c < q; ++c) out.section(r, c) = uinv(r, sm.rank + c);
    out.module.ring = twisted_ring_at_class(s, 0);
    out.module.rank = q;
    WeylData wd = weyl_group(lat, 0);
    for (int i = 0; i < s.sys.rank[0]; ++i)
        for (int wi = 0; wi < wd.weyl->n; ++wi) {
            IMat amb = mat_mul(m.act[0][i], m.sys.map_of({0, 0, coset_rep(lat, wd.coset_rep[wi], 0)}));
            out.module.act.push_back(mat_mul(out.proj, mat_mul(amb, out.section)));
        }
    return out;
}

ComparisonF comparison_F_projective(const ProjectiveModule& p) {
    CoeffModule amb = free_coeff_module(p.ring, p.x);
    ComparisonF free_part = comparison_F(p.ring, amb);
    IMat fe = mat_mul(free_part.proj, mat_mul(p.idem.level[0], free_part.section));
    ComparisonF out;
    out.torsion = free_part.torsion;
    IMat basis = column_lattice_basis(fe);
    out.module.ring = free_part.module.ring;
    out.module.rank = basis.cols;
    for (size_t i = 0; i < free_part.module.act.size(); ++i) {
        IMat moved = mat_mul(free_part.module.act[i], basis);
        auto coords = lattice_coords(basis.cols ? basis : IMat(fe.rows, 0), moved);
        if (!coords) throw std::runtime_error("comparison_F: action leaves the image");
        out.module.act.push_back(*coords);
    }
    out.proj = mat_mul(free_part.proj, p.idem.level[0]);
    out.section = free_part.section;
    return out;
}

CoeffModule comparison_Phi(const CoefficientRing& s, const TwistedModule& n) {
    const SubgroupLattice& lat = *s.sys.lat;
    CoeffModule m;
    m.sys.lat = s.sys.lat;
    int ns = lat.num_subgroups();
    for (int h = 0; h < ns; ++h) m.sys.rank.push_back(h == 0 ? n.rank : 0);
    WeylData wd = weyl_group(lat, 0);
    for (int h = 0; h < ns; ++h)
        for (int k = 0; k < ns; ++k)
            for (const MorKey& key : orbit_morphisms(lat, h, k)) {
                if (key.src == 0 && key.dst == 0) {
                    int wi = wd.to_weyl[key.rep];
                    IMat rv(n.ring.rank(), 1);
                    for (int i = 0; i < n.ring.base_rank; ++i)
                        rv(n.ring.idx(i, wi), 0) = n.ring.base_unit(i, 0);
                    m.sys.mor[key] = n.act_op(rv);
                } else {
                    m.sys.mor[key] = IMat(m.sys.rank[key.src], m.sys.rank[key.dst]);
                }
            }
    m.act.resize(ns);
    for (int h = 0; h < ns; ++h)
        for (int i = 0; i < s.sys.rank[h]; ++i) {
            if (h == 0) {
                IMat rv(n.ring.rank(), 1);
                rv(n.ring.idx(i, 0), 0) = 1;
                m.act[h].push_back(n.act_op(rv));
            } else {
                m.act[h].push_back(IMat(0, 0));
            }
        }
    return m;
}

void validate_complex(const PerfectComplex& c) {
    for (size_t k = 0; k < c.d.size(); ++k) {
        if (!morphism_valid(c.mods[k + 1].ambient, c.mods[k].ambient, c.d[k]))
            throw std::runtime_error("complex: differential is not a morphism");
        for (size_t h = 0; h < c.d[k].level.size(); ++h) {
            IMat lhs =
                mat_mul(c.mods[k].idem.level[h], mat_mul(c.d[k].level[h], c.mods[k + 1].idem.level[h]));
            if (!(lhs == c.d[k].level[h]))
                throw std::runtime_error("complex: differential not between the summands");
        }
    }
    for (size_t k = 0; k + 1 < c.d.size(); ++k) {
        CoeffMorphism dd = compose(c.d[k + 1], c.d[k]);
        if (!dd.is_zero()) throw std::runtime_error("complex: dd != 0");
    }
}

PerfectInvariants perfect_invariants(const PerfectComplex& c) {
    validate_complex(c);
    const SubgroupLattice& lat = *c.ring.sys.lat;
    int ns = lat.num_subgroups();
    int n = int(c.mods.size());
    PerfectInvariants out;
    out.homology.assign(ns, std::vector<HomologyGroup>(n));
    std::vector<std::vector<IMat>> bases;
    for (const auto& m : c.mods) bases.push_back(m.level_basis());
    for (int h = 0; h < ns; ++h) {
        for (int k = 0; k < n; ++k) {
            IMat into(bases[k][h].cols, k + 1 < n ? bases[k + 1][h].cols : 0);
            if (k + 1 < n && into.rows && into.cols) {
                auto coords = lattice_coords(bases[k][h], mat_mul(c.d[k].level[h], bases[k + 1][h]));
                if (!coords) throw std::runtime_error("perfect_invariants: boundary leaves the lattice");
                into = *coords;
            }
            IMat outof(k > 0 ? bases[k - 1][h].cols : 0, bases[k][h].cols);
            if (k > 0 && outof.rows && outof.cols) {
                auto coords = lattice_coords(bases[k - 1][h], mat_mul(c.d[k - 1].level[h], bases[k][h]));
                if (!coords) throw std::runtime_error("perfect_invariants: boundary leaves the lattice");
                outof = *coords;
            }
            HomologyGroup hg;
            IMat cycles = (outof.rows == 0) ? IMat::identity(bases[k][h].cols) : kernel_basis(outof);
            if (cycles.cols == 0) {
                out.homology[h][k] = hg;
                continue;
            }
            IMat bnd(cycles.cols, 0);
            if (into.cols) {
                auto coords = lattice_coords(cycles, into);
                if (!coords) throw std::runtime_error("perfect_invariants: boundaries are not cycles");
                bnd = column_lattice_basis(*coords);
            }
            QuotientShape q = quotient_shape(cycles.cols, bnd);
            hg.free_rank = q.free_rank;
            hg.torsion = q.torsion;
            out.homology[h][k] = hg;
        }
    }
    out.euler.comp.resize(lat.num_classes());
    for (int k = 0; k < n; ++k) {
        K0ClassVector v = k0_class_vector(c.mods[k]);
        for (size_t cc = 0; cc < v.comp.size(); ++cc) {
            long long sgn = (k % 2 == 0) ? 1 : -1;
            out.euler.comp[cc].zrank += sgn * v.comp[cc].zrank;
            if (v.comp[cc].augrank) {
                if (!out.euler.comp[cc].augrank) out.euler.comp[cc].augrank = 0;
                *out.euler.comp[cc].augrank += sgn * *v.comp[cc].augrank;
            }
            if (v.comp[cc].reduced) {
                if (!out.euler.comp[cc].reduced) out.euler.comp[cc].reduced = 0;
                *out.euler.comp[cc].reduced += sgn * *v.comp[cc].reduced;
            }
        }
    }
    out.bounded.assign(lat.num_classes(), true);
    for (int cc = 0; cc < lat.num_classes(); ++cc)
        for (int above = cc + 1; above < lat.num_classes(); ++above) {
            int h = lat.cls_rep[above];
            for (int k = 0; k < n; ++k)
                if (!(out.homology[h][k] == HomologyGroup{})) out.bounded[cc] = false;
        }
    return out;
}

}  // namespace equik
