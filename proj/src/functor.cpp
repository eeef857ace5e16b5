#include "equik/functor.hpp"

#include <algorithm>
#include <stdexcept>

namespace equik {

namespace {

// g^-1 * S * g as a sorted ambient element set
std::vector<int> conj_set(const FiniteGroup& G, const std::vector<int>& elems, int g) {
    std::vector<int> out;
    out.reserve(elems.size());
    int gi = G.invert(g);
    for (int e : elems) out.push_back(G.mul(G.mul(gi, e), g));
    std::sort(out.begin(), out.end());
    return out;
}

// index in ctx.lat of the subgroup with the given ambient elements
int sub_in_lat(const SubgroupContext& ctx, const std::vector<int>& ambient_elems) {
    std::vector<int> down;
    down.reserve(ambient_elems.size());
    for (int e : ambient_elems) {
        int d = ctx.from_parent[e];
        if (d < 0) throw std::runtime_error("functor: subgroup leaves the context");
        down.push_back(d);
    }
    std::sort(down.begin(), down.end());
    int idx = ctx.lat->find_subgroup(down);
    if (idx < 0) throw std::runtime_error("functor: subgroup not found in context lattice");
    return idx;
}

std::vector<int> up_elems(const SubgroupContext& ctx, int sub_in_ctx) {
    std::vector<int> out;
    for (int e : ctx.lat->subs[sub_in_ctx].elems) out.push_back(ctx.to_parent[e]);
    std::sort(out.begin(), out.end());
    return out;
}

bool set_contains(const std::vector<int>& big, const std::vector<int>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

CoefficientSystem restrict_system(const CoefficientSystem& m, const SubgroupContext& ctx) {
    const SubgroupLattice& sub = *ctx.lat;
    CoefficientSystem r;
    r.lat = ctx.lat;
    int ns = sub.num_subgroups();
    std::vector<int> up(ns);
    for (int j = 0; j < ns; ++j) up[j] = ctx.up(j);
    for (int j = 0; j < ns; ++j) r.rank.push_back(m.rank[up[j]]);
    for (int j = 0; j < ns; ++j)
        for (int l = 0; l < ns; ++l)
            for (const MorKey& key : orbit_morphisms(sub, j, l)) {
                int rep_parent = coset_rep(*ctx.parent, ctx.to_parent[key.rep], up[l]);
                r.mor[key] = m.map_of({up[j], up[l], rep_parent});
            }
    return r;
}

CoeffMorphism restrict_morphism(const CoeffMorphism& f, const SubgroupContext& ctx) {
    CoeffMorphism r;
    r.lat = ctx.lat;
    for (int j = 0; j < ctx.lat->num_subgroups(); ++j) r.level.push_back(f.level[ctx.up(j)]);
    return r;
}

CoefficientRing restrict_ring(const CoefficientRing& s, const SubgroupContext& ctx) {
    CoefficientRing r;
    r.sys = restrict_system(s.sys, ctx);
    for (int j = 0; j < ctx.lat->num_subgroups(); ++j) r.ring.push_back(s.ring[ctx.up(j)]);
    return r;
}

InducedLevel induced_level(const CoefficientSystem& m, const SubgroupContext& ctx, int j) {
    const SubgroupLattice& par = *ctx.parent;
    const FiniteGroup& G = *par.grp;
    InducedLevel lev;
    std::vector<char> seen(G.n, 0);
    for (int g = 0; g < G.n; ++g) {
        int rep = coset_rep(par, g, ctx.sub_idx);
        if (seen[rep]) continue;
        seen[rep] = 1;
        int conj = par.conjugate_subgroup(j, rep);
        if (!par.leq[conj][ctx.sub_idx]) continue;
        int sub_level = sub_in_lat(ctx, par.subs[conj].elems);
        lev.reps.push_back(rep);
        lev.sub_level.push_back(sub_level);
        lev.offset.push_back(lev.total);
        lev.total += m.rank[sub_level];
    }
    return lev;
}

CoefficientSystem induce_system(const CoefficientSystem& m, const SubgroupContext& ctx) {
    const SubgroupLattice& par = *ctx.parent;
    const FiniteGroup& G = *par.grp;
    CoefficientSystem out;
    out.lat = ctx.parent;
    int ns = par.num_subgroups();
    std::vector<InducedLevel> levels(ns);
    for (int j = 0; j < ns; ++j) {
        levels[j] = induced_level(m, ctx, j);
        out.rank.push_back(levels[j].total);
    }
    for (int j = 0; j < ns; ++j)
        for (int l = 0; l < ns; ++l)
            for (const MorKey& key : orbit_morphisms(par, j, l)) {
                const InducedLevel& rows = levels[j];
                const InducedLevel& cols = levels[l];
                IMat mat(rows.total, cols.total);
                for (size_t cb = 0; cb < cols.reps.size(); ++cb) {
                    int ax = G.mul(key.rep, cols.reps[cb]);
                    int x = coset_rep(par, ax, ctx.sub_idx);
                    auto it = std::find(rows.reps.begin(), rows.reps.end(), x);
                    if (it == rows.reps.end()) throw std::runtime_error("induce: missing target block");
                    size_t rb = size_t(it - rows.reps.begin());
                    int h = G.mul(G.invert(x), ax);
                    int h_sub = ctx.from_parent[h];
                    if (h_sub < 0) throw std::runtime_error("induce: residual element outside subgroup");
                    int rep_sub = coset_rep(*ctx.lat, h_sub, cols.sub_level[cb]);
                    const IMat& block = m.map_of({rows.sub_level[rb], cols.sub_level[cb], rep_sub});
                    paste(mat, block, rows.offset[rb], cols.offset[cb]);
                }
                out.mor[key] = std::move(mat);
            }
    return out;
}

CoeffMorphism induce_morphism(const CoeffMorphism& f, const SubgroupContext& ctx) {
    // block layout depends only on (level, subgroup), shared by source and target
    CoeffMorphism out;
    out.lat = ctx.parent;
    CoefficientSystem shape;  // ranks of the source suffice for the layout
    shape.lat = ctx.lat;
    for (const auto& lv : f.level) shape.rank.push_back(lv.cols);
    CoefficientSystem shape_t;
    shape_t.lat = ctx.lat;
    for (const auto& lv : f.level) shape_t.rank.push_back(lv.rows);
    for (int j = 0; j < ctx.parent->num_subgroups(); ++j) {
        InducedLevel src = induced_level(shape, ctx, j);
        InducedLevel dst = induced_level(shape_t, ctx, j);
        IMat mat(dst.total, src.total);
        for (size_t b = 0; b < src.reps.size(); ++b)
            paste(mat, f.level[src.sub_level[b]], dst.offset[b], src.offset[b]);
        out.level.push_back(std::move(mat));
    }
    return out;
}

CoefficientSystem conjugate_system(const CoefficientSystem& m, LatticePtr ambient, int h_at, int g) {
    int hg_at = ambient->conjugate_subgroup(h_at, g);
    const SubgroupContext& ch = context_cached(ambient, h_at);
    const SubgroupContext& cg = context_cached(ambient, hg_at);
    const FiniteGroup& G = *ambient->grp;
    CoefficientSystem out;
    out.lat = cg.lat;
    int ns = cg.lat->num_subgroups();
    std::vector<int> down(ns);
    for (int l = 0; l < ns; ++l) {
        // level L of H^g takes the value of m at L^{g^-1}
        down[l] = sub_in_lat(ch, conj_set(G, up_elems(cg, l), G.invert(g)));
        out.rank.push_back(m.rank[down[l]]);
    }
    for (int l = 0; l < ns; ++l)
        for (int l2 = 0; l2 < ns; ++l2)
            for (const MorKey& key : orbit_morphisms(*cg.lat, l, l2)) {
                int a_amb = cg.to_parent[key.rep];
                int b_amb = G.mul(G.mul(g, a_amb), G.invert(g));
                int b_sub = ch.from_parent[b_amb];
                if (b_sub < 0) throw std::runtime_error("conjugate: twisted element escapes H");
                out.mor[key] = m.map_of({down[l], down[l2], coset_rep(*ch.lat, b_sub, down[l2])});
            }
    return out;
}

CoeffMorphism conjugate_morphism(const CoeffMorphism& f, LatticePtr ambient, int h_at, int g) {
    int hg_at = ambient->conjugate_subgroup(h_at, g);
    const SubgroupContext& ch = context_cached(ambient, h_at);
    const SubgroupContext& cg = context_cached(ambient, hg_at);
    const FiniteGroup& G = *ambient->grp;
    CoeffMorphism out;
    out.lat = cg.lat;
    for (int l = 0; l < cg.lat->num_subgroups(); ++l)
        out.level.push_back(f.level[sub_in_lat(ch, conj_set(G, up_elems(cg, l), G.invert(g)))]);
    return out;
}

CoeffMorphism adjunction_counit(const CoefficientSystem& m, const SubgroupContext& ctx) {
    const SubgroupLattice& par = *ctx.parent;
    CoefficientSystem rm = restrict_system(m, ctx);
    CoeffMorphism eps;
    eps.lat = ctx.parent;
    for (int j = 0; j < par.num_subgroups(); ++j) {
        InducedLevel lev = induced_level(rm, ctx, j);
        IMat mat(m.rank[j], lev.total);
        for (size_t b = 0; b < lev.reps.size(); ++b) {
            int x = lev.reps[b];
            int jx = par.conjugate_subgroup(j, x);
            const IMat& comp = m.map_of({j, jx, coset_rep(par, x, jx)});
            paste(mat, comp, 0, lev.offset[b]);
        }
        eps.level.push_back(std::move(mat));
    }
    return eps;
}

CoeffMorphism adjunction_unit(const CoefficientSystem& n, const SubgroupContext& ctx) {
    CoeffMorphism eta;
    eta.lat = ctx.lat;
    for (int l = 0; l < ctx.lat->num_subgroups(); ++l) {
        int lup = ctx.up(l);
        InducedLevel lev = induced_level(n, ctx, lup);
        IMat mat(lev.total, n.rank[l]);
        // the identity coset block carries the unit
        auto it = std::find(lev.reps.begin(), lev.reps.end(), 0);
        if (it == lev.reps.end()) throw std::runtime_error("unit: identity block missing");
        size_t b = size_t(it - lev.reps.begin());
        if (lev.sub_level[b] != l) throw std::runtime_error("unit: identity block at wrong level");
        paste(mat, IMat::identity(n.rank[l]), lev.offset[b], 0);
        eta.level.push_back(std::move(mat));
    }
    return eta;
}

CoeffMorphism eps_chain(const CoefficientSystem& m, LatticePtr c_lat, int a_in_c, int b_in_c) {
    const SubgroupLattice& C = *c_lat;
    const FiniteGroup& G = *C.grp;
    if (!C.leq[a_in_c][b_in_c]) throw std::runtime_error("eps_chain: A must lie in B");
    const SubgroupContext& ca = context_cached(c_lat, a_in_c);
    const SubgroupContext& cb = context_cached(c_lat, b_in_c);
    CoefficientSystem ra = restrict_system(m, ca);
    CoefficientSystem rb = restrict_system(m, cb);
    CoeffMorphism d;
    d.lat = c_lat;
    for (int j = 0; j < C.num_subgroups(); ++j) {
        InducedLevel src = induced_level(ra, ca, j);
        InducedLevel dst = induced_level(rb, cb, j);
        IMat mat(dst.total, src.total);
        for (size_t sb = 0; sb < src.reps.size(); ++sb) {
            int x = src.reps[sb];
            int u = coset_rep(C, x, b_in_c);
            auto it = std::find(dst.reps.begin(), dst.reps.end(), u);
            if (it == dst.reps.end()) throw std::runtime_error("eps_chain: missing target block");
            size_t db = size_t(it - dst.reps.begin());
            int b_elt = G.mul(G.invert(u), x);
            int ju = C.conjugate_subgroup(j, u);
            int jx = C.conjugate_subgroup(j, x);
            const IMat& comp = m.map_of({ju, jx, coset_rep(C, b_elt, jx)});
            paste(mat, comp, dst.offset[db], src.offset[sb]);
        }
        d.level.push_back(std::move(mat));
    }
    return d;
}

AdjunctionWitness adjunction_witness(const CoefficientSystem& m, LatticePtr c_lat, int a_in_c, int b_in_c) {
    AdjunctionWitness w;
    const SubgroupContext& ca = context_cached(c_lat, a_in_c);
    const SubgroupContext& cb = context_cached(c_lat, b_in_c);
    CoefficientSystem ra = restrict_system(m, ca);
    CoefficientSystem rb = restrict_system(m, cb);
    const SubgroupContext& ab = context_cached(cb.lat, cb.down(a_in_c));
    w.unit = adjunction_unit(ra, ab);
    w.counit = adjunction_counit(rb, ab);
    w.eps = eps_chain(m, c_lat, a_in_c, b_in_c);
    // triangle identities at the witness instances
    {
        CoeffMorphism i_eta = induce_morphism(w.unit, ab);
        CoeffMorphism eps_i = adjunction_counit(induce_system(ra, ab), ab);
        if (!compose(i_eta, eps_i).is_identity())
            throw std::runtime_error("adjunction_witness: first triangle identity fails");
        CoeffMorphism r_eps = restrict_morphism(w.counit, ab);
        CoeffMorphism eta_r = adjunction_unit(restrict_system(rb, ab), ab);
        if (!compose(eta_r, r_eps).is_identity())
            throw std::runtime_error("adjunction_witness: second triangle identity fails");
    }
    return w;
}

CoeffMorphism induction_composition_iso(const CoefficientSystem& m, LatticePtr c_lat, int a_in_c, int b_in_c) {
    const SubgroupLattice& C = *c_lat;
    const FiniteGroup& G = *C.grp;
    const SubgroupContext& ca = context_cached(c_lat, a_in_c);
    const SubgroupContext& cb = context_cached(c_lat, b_in_c);
    const SubgroupContext& ab = context_cached(cb.lat, cb.down(a_in_c));
    CoefficientSystem inner = induce_system(m, ab);  // I^B_A m, over lat(B)
    CoeffMorphism iso;
    iso.lat = c_lat;
    for (int j = 0; j < C.num_subgroups(); ++j) {
        InducedLevel lhs = induced_level(inner, cb, j);  // blocks u
        InducedLevel rhs = induced_level(m, ca, j);      // blocks w
        IMat mat(rhs.total, lhs.total);
        for (size_t ub = 0; ub < lhs.reps.size(); ++ub) {
            int u = lhs.reps[ub];
            int ju_in_b = lhs.sub_level[ub];  // (J^u)_B
            InducedLevel innerlev = induced_level(m, ab, ju_in_b);
            for (size_t vb = 0; vb < innerlev.reps.size(); ++vb) {
                int v_amb = cb.to_parent[innerlev.reps[vb]];
                int uv = G.mul(u, v_amb);
                int w_rep = coset_rep(C, uv, a_in_c);
                auto it = std::find(rhs.reps.begin(), rhs.reps.end(), w_rep);
                if (it == rhs.reps.end()) throw std::runtime_error("induction iso: missing block");
                size_t wb = size_t(it - rhs.reps.begin());
                int a0 = G.mul(G.invert(w_rep), uv);
                int a0_sub = ca.from_parent[a0];
                if (a0_sub < 0) throw std::runtime_error("induction iso: connector outside A");
                // component m^{(J^{uv})_A} -> m^{(J^w)_A}; lat(A in B) and
                // lat(A in C) number subgroups identically
                int src_level = innerlev.sub_level[vb];
                int dst_level = rhs.sub_level[wb];
                const IMat& comp = m.map_of({dst_level, src_level, coset_rep(*ca.lat, a0_sub, src_level)});
                paste(mat, comp, rhs.offset[wb], lhs.offset[ub] + innerlev.offset[vb]);
            }
        }
        iso.level.push_back(std::move(mat));
    }
    return iso;
}

FrobeniusResult frobenius_iso(const CoefficientSystem& m, const CoefficientSystem& n,
                              const SubgroupContext& ctx) {
    const SubgroupLattice& par = *ctx.parent;
    FrobeniusResult res;
    CoefficientSystem in = induce_system(n, ctx);
    res.lhs = box_product(m, in);
    CoefficientSystem rm = restrict_system(m, ctx);
    CoefficientSystem inner = box_product(rm, n);
    res.rhs = induce_system(inner, ctx);
    res.iso.lat = ctx.parent;
    for (int j = 0; j < par.num_subgroups(); ++j) {
        InducedLevel nb = induced_level(n, ctx, j);        // blocks of I(N) at J
        InducedLevel ib = induced_level(inner, ctx, j);    // blocks of RHS at J
        IMat mat(res.rhs.rank[j], res.lhs.rank[j]);
        for (size_t b = 0; b < nb.reps.size(); ++b) {
            int x = nb.reps[b];
            int jx = par.conjugate_subgroup(j, x);
            const IMat& t = m.map_of({jx, j, coset_rep(par, par.grp->invert(x), j)});
            int nrank = n.rank[nb.sub_level[b]];
            for (int a2 = 0; a2 < t.rows; ++a2)
                for (int a = 0; a < t.cols; ++a) {
                    if (t(a2, a) == 0) continue;
                    for (int c = 0; c < nrank; ++c) {
                        int row = ib.offset[b] + a2 * nrank + c;
                        int col = a * in.rank[j] + nb.offset[b] + c;
                        mat(row, col) = t(a2, a);
                    }
                }
        }
        res.iso.level.push_back(std::move(mat));
    }
    return res;
}

DoubleCosetIso double_coset_iso(LatticePtr ambient, int k, int j, int h, const CoefficientSystem& m) {
    const FiniteGroup& G = *ambient->grp;
    DoubleCosetIso res;
    const SubgroupContext& ck = context_cached(ambient, k);
    const SubgroupContext& cj = context_cached(ambient, j);
    const SubgroupContext& ch = context_cached(ambient, h);
    int j_in_k = ck.down(j);
    int h_in_k = ck.down(h);
    const SubgroupContext& cjk = context_cached(ck.lat, j_in_k);
    const SubgroupContext& chk = context_cached(ck.lat, h_in_k);
    CoefficientSystem ikj = induce_system(m, cjk);
    res.lhs = restrict_system(ikj, chk);
    res.cosets = double_cosets(*ambient, k, j, h);

    struct PartData {
        int gamma;
        int meet;  // ambient subgroup index of H n J^gamma
        CoefficientSystem sys;
        const SubgroupContext* meet_in_h;
    };
    std::vector<PartData> parts;
    for (size_t c = 0; c < res.cosets.reps.size(); ++c) {
        PartData pd;
        pd.gamma = res.cosets.reps[c];
        pd.meet = res.cosets.intersection[c];
        CoefficientSystem cg = conjugate_system(m, ambient, j, pd.gamma);
        int jg = ambient->conjugate_subgroup(j, pd.gamma);
        const SubgroupContext& cjg = context_cached(ambient, jg);
        const SubgroupContext& meet_in_jg = context_cached(cjg.lat, cjg.down(pd.meet));
        CoefficientSystem rm = restrict_system(cg, meet_in_jg);
        pd.meet_in_h = &context_cached(ch.lat, ch.down(pd.meet));
        pd.sys = induce_system(rm, *pd.meet_in_h);
        parts.push_back(std::move(pd));
    }
    res.rhs = parts.empty() ? zero_system(ch.lat) : parts[0].sys;
    for (size_t c = 1; c < parts.size(); ++c) res.rhs = direct_sum(res.rhs, parts[c].sys);
    for (auto& pd : parts) res.parts.push_back(pd.sys);

    // tau: rhs -> lhs, blockwise; iso = tau^{-1} levelwise
    CoeffMorphism tau;
    tau.lat = ch.lat;
    for (int l = 0; l < ch.lat->num_subgroups(); ++l) {
        int lup_in_k = chk.up(l);  // level L as subgroup of K's lattice
        InducedLevel lhsb = induced_level(m, cjk, lup_in_k);
        IMat mat(res.lhs.rank[l], res.rhs.rank[l]);
        int col0 = 0;
        for (auto& pd : parts) {
            // blocks of this part at level l: induced level of (restricted conj
            // system); ranks at meet-lattice levels equal m ranks at mapped J-levels
            CoefficientSystem shape;
            shape.lat = pd.meet_in_h->lat;
            const SubgroupContext& cmeet_h = *pd.meet_in_h;
            for (int q = 0; q < cmeet_h.lat->num_subgroups(); ++q) {
                std::vector<int> amb = up_elems(cmeet_h, q);  // elements in lat(H) numbering
                std::vector<int> amb2;
                for (int e : amb) amb2.push_back(ch.to_parent[e]);
                std::sort(amb2.begin(), amb2.end());
                int in_j = sub_in_lat(cj, conj_set(G, amb2, G.invert(pd.gamma)));
                shape.rank.push_back(m.rank[in_j]);
            }
            InducedLevel pb = induced_level(shape, cmeet_h, l);
            for (size_t tb = 0; tb < pb.reps.size(); ++tb) {
                int t_amb = ch.to_parent[pb.reps[tb]];
                int tg = G.mul(t_amb, G.invert(pd.gamma));
                // block of lhs at coset (t gamma^-1) J
                int x_amb = -1;
                {
                    int best = -1;
                    for (int jj : ambient->subs[j].elems) {
                        int cand = G.mul(tg, jj);
                        if (best < 0 || cand < best) best = cand;
                    }
                    x_amb = best;
                }
                int x_in_k = ck.from_parent[x_amb];
                auto it = std::find(lhsb.reps.begin(), lhsb.reps.end(), x_in_k);
                if (it == lhsb.reps.end()) throw std::runtime_error("double coset iso: missing block");
                size_t xb = size_t(it - lhsb.reps.begin());
                int j0 = G.mul(G.invert(x_amb), tg);
                int j0_sub = cj.from_parent[j0];
                if (j0_sub < 0) throw std::runtime_error("double coset iso: connector outside J");
                // component m^{(L^{t gamma^-1})_J} -> m^{(L^x)_J}
                std::vector<int> lup_amb = up_elems(ck, lup_in_k);
                int src_level = sub_in_lat(cj, conj_set(G, lup_amb, tg));
                int dst_level = sub_in_lat(cj, conj_set(G, lup_amb, x_amb));
                const IMat& comp = m.map_of({dst_level, src_level, coset_rep(*cj.lat, j0_sub, src_level)});
                paste(mat, comp, lhsb.offset[xb], col0 + pb.offset[tb]);
            }
            col0 += pb.total;
        }
        tau.level.push_back(std::move(mat));
    }
    res.iso.lat = ch.lat;
    for (auto& lv : tau.level) res.iso.level.push_back(int_inverse(lv));
    return res;
}

// ---- spans as functors ----

namespace {

struct PBlock {
    int atom = -1;
    int elt = -1;     // middle element, fixed by the level subgroup, over eK
    int conj = 0;     // ambient g with elt = g * X^e_atom
    int mlevel = -1;  // level of m (lattice of H)
    int offset = 0;
    int ranksz = 0;
};

struct SpanLevelBlocks {
    std::vector<PBlock> blocks;
    int total = 0;
};

// Block layout of P(w)(m) at level `lev` of K's lattice, matching the storage
// order of span_functor (atoms in normal-form order, coset reps ascending).
SpanLevelBlocks span_blocks(const Span& w, const SpanNormalForm& nf, const CoefficientSystem& m,
                            const std::vector<int>& ys, int lev) {
    LatticePtr amb = w.lat;
    const FiniteGroup& G = *amb->grp;
    const SubgroupContext& cH = context_cached(amb, w.src);
    const SubgroupContext& cK = context_cached(amb, w.dst);
    std::vector<int> lam = up_elems(cK, lev);  // ambient elements of the level subgroup
    SpanLevelBlocks out;
    for (size_t i = 0; i < nf.items.size(); ++i) {
        int L = nf.items[i].stab;
        int y = ys[i];
        int yi = G.invert(y);
        int C = amb->conjugate_subgroup(w.dst, yi);
        std::vector<int> lam_y = conj_set(G, lam, yi);
        // cosets xL inside C with lam_y^x <= L
        std::vector<char> seen(G.n, 0);
        for (int ce : amb->subs[C].elems) {
            int rep = -1;
            for (int le : amb->subs[L].elems) {
                int cand = G.mul(ce, le);
                if (rep < 0 || cand < rep) rep = cand;
            }
            if (seen[rep]) continue;
            seen[rep] = 1;
            std::vector<int> conj = conj_set(G, lam_y, rep);
            if (!set_contains(amb->subs[L].elems, conj)) continue;
            PBlock b;
            b.atom = int(i);
            b.conj = G.mul(yi, rep);
            b.elt = w.middle.act[b.conj][nf.items[i].min_elt];
            b.mlevel = sub_in_lat(cH, conj_set(G, lam, b.conj));
            b.ranksz = m.rank[b.mlevel];
            b.offset = out.total;
            out.total += b.ranksz;
            out.blocks.push_back(b);
        }
    }
    return out;
}

std::vector<int> default_ys(const SpanNormalForm& nf) {
    std::vector<int> ys;
    for (const auto& it : nf.items) ys.push_back(it.y);
    return ys;
}

SpanFunctorResult span_functor_impl(const Span& w, const CoefficientSystem& m, const std::vector<int>& ys) {
    LatticePtr amb = w.lat;
    const FiniteGroup& G = *amb->grp;
    SpanFunctorResult res;
    if (w.unit) {
        res.value = m;
        res.atoms = {m};
        return res;
    }
    res.nf = span_normal_form(w);
    if (ys.size() != res.nf.items.size()) throw std::runtime_error("span_functor: wrong number of y choices");
    const SubgroupContext& cH = context_cached(amb, w.src);
    const SubgroupContext& cK = context_cached(amb, w.dst);
    for (size_t i = 0; i < res.nf.items.size(); ++i) {
        const auto& tr = res.nf.items[i];
        int y = ys[i];
        if (orbit_coset_id(*amb, w.dst, y) != w.t.img[tr.min_elt])
            throw std::runtime_error("span_functor: invalid y choice");
        int L = tr.stab;
        int C = amb->conjugate_subgroup(w.dst, G.invert(y));
        const SubgroupContext& cL_in_H = context_cached(cH.lat, cH.down(L));
        CoefficientSystem step1 = restrict_system(m, cL_in_H);
        const SubgroupContext& cC = context_cached(amb, C);
        const SubgroupContext& cL_in_C = context_cached(cC.lat, cC.down(L));
        CoefficientSystem step2 = induce_system(step1, cL_in_C);
        CoefficientSystem atom = conjugate_system(step2, amb, C, y);
        res.atoms.push_back(std::move(atom));
    }
    if (res.atoms.empty())
        res.value = zero_system(cK.lat);
    else {
        res.value = res.atoms[0];
        for (size_t i = 1; i < res.atoms.size(); ++i) res.value = direct_sum(res.value, res.atoms[i]);
    }
    return res;
}

}  // namespace

SpanFunctorResult span_functor(const Span& w, const CoefficientSystem& m) {
    if (w.unit) return span_functor_impl(w, m, {});
    return span_functor_impl(w, m, default_ys(span_normal_form(w)));
}

SpanFunctorResult span_functor_with_y(const Span& w, const CoefficientSystem& m, const std::vector<int>& y) {
    return span_functor_impl(w, m, y);
}

CoeffMorphism span_functor_morphism(const Span& w, const CoeffMorphism& phi) {
    LatticePtr amb = w.lat;
    const FiniteGroup& G = *amb->grp;
    if (w.unit) return phi;
    SpanNormalForm nf = span_normal_form(w);
    const SubgroupContext& cH = context_cached(amb, w.src);
    const SubgroupContext& cK = context_cached(amb, w.dst);
    CoeffMorphism out;
    out.lat = cK.lat;
    std::vector<CoeffMorphism> atoms;
    for (const auto& tr : nf.items) {
        int L = tr.stab;
        int y = tr.y;
        int C = amb->conjugate_subgroup(w.dst, G.invert(y));
        const SubgroupContext& cL_in_H = context_cached(cH.lat, cH.down(L));
        CoeffMorphism step1 = restrict_morphism(phi, cL_in_H);
        const SubgroupContext& cC = context_cached(amb, C);
        const SubgroupContext& cL_in_C = context_cached(cC.lat, cC.down(L));
        CoeffMorphism step2 = induce_morphism(step1, cL_in_C);
        atoms.push_back(conjugate_morphism(step2, amb, C, y));
    }
    for (int lv = 0; lv < cK.lat->num_subgroups(); ++lv) {
        std::vector<IMat> blocks;
        for (auto& a : atoms) blocks.push_back(a.level[lv]);
        out.level.push_back(block_diag(blocks));
    }
    return out;
}

TwoCellMatrix two_cell_transform(const Span2Cell& cell, const CoefficientSystem& m) {
    cell.validate();
    LatticePtr amb = cell.dom.lat;
    const FiniteGroup& G = *amb->grp;
    const SubgroupContext& cH = context_cached(amb, cell.dom.src);
    const SubgroupContext& cK = context_cached(amb, cell.dom.dst);
    TwoCellMatrix out;
    out.dom = span_functor(cell.dom, m);
    out.cod = span_functor(cell.cod, m);
    auto ys_dom = default_ys(out.dom.nf);
    auto ys_cod = default_ys(out.cod.nf);
    out.total.lat = cK.lat;
    int na = int(out.dom.nf.items.size());
    int nb = int(out.cod.nf.items.size());
    out.entries.assign(na, std::vector<std::optional<CoeffMorphism>>(nb));

    for (int lev = 0; lev < cK.lat->num_subgroups(); ++lev) {
        SpanLevelBlocks db = span_blocks(cell.dom, out.dom.nf, m, ys_dom, lev);
        SpanLevelBlocks cb = span_blocks(cell.cod, out.cod.nf, m, ys_cod, lev);
        IMat mat(cb.total, db.total);
        for (const PBlock& src : db.blocks) {
            int q = cell.phi[src.elt];
            const PBlock* dst = nullptr;
            for (const PBlock& cand : cb.blocks)
                if (cand.elt == q) {
                    dst = &cand;
                    break;
                }
            if (!dst) throw std::runtime_error("two_cell_transform: image block missing");
            int delta = G.mul(G.invert(src.conj), dst->conj);
            int dh = cH.from_parent[G.invert(delta)];
            if (dh < 0) throw std::runtime_error("two_cell_transform: connector outside H");
            const IMat& comp = m.map_of({dst->mlevel, src.mlevel, coset_rep(*cH.lat, dh, src.mlevel)});
            paste(mat, comp, dst->offset, src.offset);
        }
        out.total.level.push_back(std::move(mat));
    }

    // slice the per-atom entries out of the assembled matrix
    for (int i = 0; i < na; ++i)
        for (int jj = 0; jj < nb; ++jj) {
            bool maps = cell.phi[out.dom.nf.items[i].min_elt] >= 0 &&
                        std::find(out.cod.nf.items[jj].orbit.begin(), out.cod.nf.items[jj].orbit.end(),
                                  cell.phi[out.dom.nf.items[i].min_elt]) != out.cod.nf.items[jj].orbit.end();
            if (!maps) continue;
            CoeffMorphism e;
            e.lat = cK.lat;
            for (int lev = 0; lev < cK.lat->num_subgroups(); ++lev) {
                int r0 = 0, nr = out.cod.atoms[jj].rank[lev];
                for (int q = 0; q < jj; ++q) r0 += out.cod.atoms[q].rank[lev];
                int c0 = 0, ncl = out.dom.atoms[i].rank[lev];
                for (int q = 0; q < i; ++q) c0 += out.dom.atoms[q].rank[lev];
                e.level.push_back(submatrix(out.total.level[lev], r0, c0, nr, ncl));
            }
            out.entries[i][jj] = std::move(e);
        }
    return out;
}

CompositionIso span_composition_iso(const Span& w1, const Span& w2, const CoefficientSystem& m) {
    LatticePtr amb = w1.lat;
    const FiniteGroup& G = *amb->grp;
    CompositionIso out;
    Span comp = compose_spans(w1, w2);
    PullbackResult pb;
    if (!w1.unit && !w2.unit) pb = pullback_over(w1.t, w2.r);  // same middle as comp
    SpanFunctorResult lhs = span_functor(comp, m);
    SpanFunctorResult inner = span_functor(w1, m);
    SpanFunctorResult outer = span_functor(w2, inner.value);
    out.lhs = lhs.value;
    out.rhs = outer.value;
    if (w1.unit || w2.unit) {
        // strict unit: both sides coincide
        out.iso = identity_morphism(out.lhs);
        return out;
    }
    const SubgroupContext& cH = context_cached(amb, w1.src);
    const SubgroupContext& cK1 = context_cached(amb, w1.dst);
    const SubgroupContext& cK2 = context_cached(amb, w2.dst);
    auto ys_comp = default_ys(lhs.nf);
    auto ys1 = default_ys(inner.nf);
    auto ys2 = default_ys(outer.nf);
    out.iso.lat = cK2.lat;
    for (int lev = 0; lev < cK2.lat->num_subgroups(); ++lev) {
        SpanLevelBlocks lb = span_blocks(comp, lhs.nf, m, ys_comp, lev);
        SpanLevelBlocks ob = span_blocks(w2, outer.nf, inner.value, ys2, lev);
        IMat mat(out.rhs.rank[lev], out.lhs.rank[lev]);
        for (const PBlock& b : ob.blocks) {
            // inner blocks live at level (lam^{g_b}) of K1
            std::vector<int> lam = up_elems(cK2, lev);
            int lev1 = sub_in_lat(cK1, conj_set(G, lam, b.conj));
            SpanLevelBlocks ib = span_blocks(w1, inner.nf, m, ys1, lev1);
            for (const PBlock& a : ib.blocks) {
                int a_moved = w1.middle.act[b.conj][a.elt];
                // locate p = (a_moved, b.elt) in the composed middle
                int p = -1;
                for (int e = 0; e < comp.middle.size; ++e)
                    if (pb.p1.img[e] == a_moved && pb.p2.img[e] == b.elt) {
                        p = e;
                        break;
                    }
                if (p < 0) throw std::runtime_error("composition iso: pair not found in pullback");
                const PBlock* lblk = nullptr;
                for (const PBlock& cand : lb.blocks)
                    if (cand.elt == p) {
                        lblk = &cand;
                        break;
                    }
                if (!lblk) throw std::runtime_error("composition iso: block of pair missing");
                int gba = G.mul(b.conj, a.conj);
                int delta = G.mul(G.invert(lblk->conj), gba);
                int dh = cH.from_parent[G.invert(delta)];
                if (dh < 0) throw std::runtime_error("composition iso: connector outside H");
                const IMat& compmat = m.map_of({a.mlevel, lblk->mlevel, coset_rep(*cH.lat, dh, lblk->mlevel)});
                paste(mat, compmat, b.offset + a.offset, lblk->offset);
            }
        }
        out.iso.level.push_back(std::move(mat));
    }
    return out;
}

}  // namespace equik
