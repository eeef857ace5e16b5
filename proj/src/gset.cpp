#include "equik/gset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace equik {

void GSet::validate() const {
    const FiniteGroup& G = *grp;
    if (int(act.size()) != G.n) throw std::runtime_error("gset: action table has wrong group size");
    for (const auto& row : act) {
        if (int(row.size()) != size) throw std::runtime_error("gset: ragged action table");
        for (int v : row)
            if (v < 0 || v >= size) throw std::runtime_error("gset: action out of range");
    }
    for (int x = 0; x < size; ++x)
        if (act[0][x] != x) throw std::runtime_error("gset: identity acts nontrivially");
    for (int a = 0; a < G.n; ++a)
        for (int b = 0; b < G.n; ++b)
            for (int x = 0; x < size; ++x)
                if (act[G.mul(a, b)][x] != act[a][act[b][x]])
                    throw std::runtime_error("gset: not a group action");
}

bool GSet::operator==(const GSet& o) const {
    return (grp == o.grp || *grp == *o.grp) && size == o.size && payload == o.payload && act == o.act;
}

void GMap::validate() const {
    if (int(img.size()) != dom.size) throw std::runtime_error("gmap: image table size mismatch");
    for (int v : img)
        if (v < 0 || v >= cod.size) throw std::runtime_error("gmap: image out of range");
    const FiniteGroup& G = *dom.grp;
    for (int g = 0; g < G.n; ++g)
        for (int x = 0; x < dom.size; ++x)
            if (img[dom.act[g][x]] != cod.act[g][img[x]]) throw std::runtime_error("gmap: not equivariant");
}

GSet empty_gset(GroupPtr g) {
    GSet x;
    x.grp = g;
    x.size = 0;
    x.act.assign(g->n, {});
    return x;
}

GSet make_gset(GroupPtr g, std::vector<std::vector<int>> action) {
    GSet x;
    x.grp = g;
    x.size = action.empty() ? 0 : int(action[0].size());
    x.act = std::move(action);
    if (x.act.empty()) x.act.assign(g->n, {});
    x.payload.resize(x.size);
    for (int i = 0; i < x.size; ++i) x.payload[i] = {i};
    x.validate();
    return x;
}

GSet canonical_orbit(const SubgroupLattice& lat, int sub_idx) {
    const FiniteGroup& G = *lat.grp;
    std::vector<int> which(G.n, -1);
    std::vector<int> reps;
    for (int g = 0; g < G.n; ++g) {
        if (which[g] >= 0) continue;
        int c = int(reps.size());
        for (int h : lat.subs[sub_idx].elems) which[G.mul(g, h)] = c;
        reps.push_back(g);
    }
    GSet x;
    x.grp = lat.grp;
    x.size = int(reps.size());
    x.payload.resize(x.size);
    for (int i = 0; i < x.size; ++i) x.payload[i] = {reps[i]};
    x.act.assign(G.n, std::vector<int>(x.size));
    for (int g = 0; g < G.n; ++g)
        for (int c = 0; c < x.size; ++c) x.act[g][c] = which[G.mul(g, reps[c])];
    return x;
}

int orbit_coset_id(const SubgroupLattice& lat, int sub_idx, int g) {
    int r = coset_rep(lat, g, sub_idx);
    // cosets ordered by least element; count reps smaller than r
    const FiniteGroup& G = *lat.grp;
    std::vector<char> seen(G.n, 0);
    int id = 0;
    for (int x = 0; x < G.n; ++x) {
        if (seen[x]) continue;
        if (x == r) return id;
        for (int h : lat.subs[sub_idx].elems) seen[G.mul(x, h)] = 1;
        ++id;
    }
    throw std::runtime_error("orbit_coset_id: unreachable");
}

long long orbit_coset_rep(const GSet& orbit, int coset) {
    return orbit.payload[coset][0];
}

GMap identity_map(const GSet& x) {
    GMap f;
    f.dom = x;
    f.cod = x;
    f.img.resize(x.size);
    std::iota(f.img.begin(), f.img.end(), 0);
    return f;
}

GMap compose_maps(const GMap& f, const GMap& g) {
    if (!(f.cod == g.dom)) throw std::runtime_error("compose_maps: domain mismatch");
    GMap h;
    h.dom = f.dom;
    h.cod = g.cod;
    h.img.resize(f.dom.size);
    for (int x = 0; x < f.dom.size; ++x) h.img[x] = g.img[f.img[x]];
    return h;
}

std::vector<int> fixed_points(const GSet& x, const std::vector<int>& subgroup_elems) {
    std::vector<int> out;
    for (int e = 0; e < x.size; ++e) {
        bool fixed = true;
        for (int h : subgroup_elems)
            if (x.act[h][e] != e) {
                fixed = false;
                break;
            }
        if (fixed) out.push_back(e);
    }
    return out;
}

GSet coproduct_gset(const GSet& a, const GSet& b) {
    if (!(*a.grp == *b.grp)) throw std::runtime_error("coproduct: different groups");
    GSet x;
    x.grp = a.grp;
    x.size = a.size + b.size;
    x.payload = a.payload;
    x.payload.insert(x.payload.end(), b.payload.begin(), b.payload.end());
    x.act.assign(a.grp->n, std::vector<int>(x.size));
    for (int g = 0; g < a.grp->n; ++g) {
        for (int i = 0; i < a.size; ++i) x.act[g][i] = a.act[g][i];
        for (int i = 0; i < b.size; ++i) x.act[g][a.size + i] = a.size + b.act[g][i];
    }
    return x;
}

ProductResult product_gset(const GSet& a, const GSet& b) {
    if (!(*a.grp == *b.grp)) throw std::runtime_error("product: different groups");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(size_t(a.size) * b.size);
    for (int i = 0; i < a.size; ++i)
        for (int j = 0; j < b.size; ++j) pairs.emplace_back(i, j);
    std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
        const auto& pp = a.payload[p.first];
        const auto& pq = b.payload[p.second];
        const auto& qp = a.payload[q.first];
        const auto& qq = b.payload[q.second];
        std::vector<long long> x = pp;
        x.insert(x.end(), pq.begin(), pq.end());
        std::vector<long long> y = qp;
        y.insert(y.end(), qq.begin(), qq.end());
        return x < y;
    });
    ProductResult res;
    GSet& x = res.set;
    x.grp = a.grp;
    x.size = int(pairs.size());
    x.payload.resize(x.size);
    std::map<std::pair<int, int>, int> idx;
    for (int e = 0; e < x.size; ++e) {
        auto [i, j] = pairs[e];
        x.payload[e] = a.payload[i];
        x.payload[e].insert(x.payload[e].end(), b.payload[j].begin(), b.payload[j].end());
        idx[pairs[e]] = e;
    }
    x.act.assign(a.grp->n, std::vector<int>(x.size));
    for (int g = 0; g < a.grp->n; ++g)
        for (int e = 0; e < x.size; ++e) {
            auto [i, j] = pairs[e];
            x.act[g][e] = idx.at({a.act[g][i], b.act[g][j]});
        }
    res.p1.dom = x;
    res.p1.cod = a;
    res.p2.dom = x;
    res.p2.cod = b;
    res.p1.img.resize(x.size);
    res.p2.img.resize(x.size);
    for (int e = 0; e < x.size; ++e) {
        res.p1.img[e] = pairs[e].first;
        res.p2.img[e] = pairs[e].second;
    }
    return res;
}

PullbackResult pullback_over(const GMap& f, const GMap& g) {
    if (!(f.cod == g.cod)) throw std::runtime_error("pullback: codomain mismatch");
    ProductResult prod = product_gset(f.dom, g.dom);
    std::vector<int> keep;
    for (int e = 0; e < prod.set.size; ++e)
        if (f.img[prod.p1.img[e]] == g.img[prod.p2.img[e]]) keep.push_back(e);
    std::vector<int> where(prod.set.size, -1);
    for (size_t i = 0; i < keep.size(); ++i) where[keep[i]] = int(i);
    PullbackResult res;
    GSet& x = res.set;
    x.grp = f.dom.grp;
    x.size = int(keep.size());
    x.payload.resize(x.size);
    x.act.assign(x.grp->n, std::vector<int>(x.size));
    for (int i = 0; i < x.size; ++i) x.payload[i] = prod.set.payload[keep[i]];
    for (int gg = 0; gg < x.grp->n; ++gg)
        for (int i = 0; i < x.size; ++i) {
            int target = where[prod.set.act[gg][keep[i]]];
            if (target < 0) throw std::runtime_error("pullback: subset not action closed");
            x.act[gg][i] = target;
        }
    res.p1.dom = x;
    res.p1.cod = f.dom;
    res.p2.dom = x;
    res.p2.cod = g.dom;
    res.p1.img.resize(x.size);
    res.p2.img.resize(x.size);
    for (int i = 0; i < x.size; ++i) {
        res.p1.img[i] = prod.p1.img[keep[i]];
        res.p2.img[i] = prod.p2.img[keep[i]];
    }
    return res;
}

OrbitDecomposition orbit_decomposition(const SubgroupLattice& lat, const GSet& x) {
    const FiniteGroup& G = *lat.grp;
    OrbitDecomposition d;
    std::vector<char> seen(x.size, 0);
    for (int e = 0; e < x.size; ++e) {
        if (seen[e]) continue;
        std::vector<int> orbit;
        for (int g = 0; g < G.n; ++g) {
            int y = x.act[g][e];
            if (!seen[y]) {
                seen[y] = 1;
                orbit.push_back(y);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        std::vector<int> stab;
        for (int g = 0; g < G.n; ++g)
            if (x.act[g][e] == e) stab.push_back(g);
        int sidx = lat.find_subgroup(stab);
        if (sidx < 0) throw std::runtime_error("orbit_decomposition: stabilizer not a subgroup (corrupt action)");
        d.orbits.push_back(orbit);
        d.stabilizer.push_back(sidx);
    }
    std::vector<int> count(lat.num_classes(), 0);
    for (int s : d.stabilizer) count[lat.cls_of[s]]++;
    for (int c = 0; c < lat.num_classes(); ++c)
        if (count[c]) d.census.emplace_back(c, count[c]);

    d.canonical = empty_gset(lat.grp);
    std::vector<int> offsets;
    for (int s : d.stabilizer) {
        offsets.push_back(d.canonical.size);
        d.canonical = coproduct_gset(d.canonical, canonical_orbit(lat, s));
    }
    d.iso.dom = x;
    d.iso.cod = d.canonical;
    d.iso.img.assign(x.size, -1);
    for (size_t o = 0; o < d.orbits.size(); ++o) {
        int e = d.orbits[o][0];  // least element, stabilizer = subs[d.stabilizer[o]]
        for (int g = 0; g < G.n; ++g)
            d.iso.img[x.act[g][e]] = offsets[o] + orbit_coset_id(lat, d.stabilizer[o], g);
    }
    return d;
}

std::vector<long long> marks_of(const SubgroupLattice& lat, const GSet& x) {
    std::vector<long long> m(lat.num_classes());
    for (int c = 0; c < lat.num_classes(); ++c)
        m[c] = (long long)fixed_points(x, lat.subs[lat.cls_rep[c]].elems).size();
    return m;
}

long long TableOfMarks::mark(int orbit_cls, int subgroup_cls) const {
    return m(m.rows - 1 - orbit_cls, subgroup_cls);
}

TableOfMarks table_of_marks(const SubgroupLattice& lat) {
    int nc = lat.num_classes();
    TableOfMarks t;
    t.m = IMat(nc, nc);
    for (int j = 0; j < nc; ++j) {
        GSet orbit = canonical_orbit(lat, lat.cls_rep[j]);
        auto marks = marks_of(lat, orbit);
        for (int i = 0; i < nc; ++i) t.m(nc - 1 - j, i) = marks[i];
    }
    return t;
}

std::vector<long long> burnside_marks(const TableOfMarks& t, const BurnsideElement& b) {
    int nc = t.m.rows;
    if (int(b.coeff.size()) != nc) throw std::runtime_error("burnside_marks: size mismatch");
    std::vector<long long> m(nc, 0);
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) m[i] = checked_add(m[i], checked_mul(b.coeff[j], t.mark(j, i)));
    return m;
}

BurnsideElement burnside_from_marks(const TableOfMarks& t, const std::vector<long long>& marks) {
    int nc = t.m.rows;
    if (int(marks.size()) != nc) throw std::runtime_error("burnside_from_marks: size mismatch");
    BurnsideElement b;
    b.coeff.assign(nc, 0);
    for (int i = nc - 1; i >= 0; --i) {
        long long rest = marks[i];
        for (int j = i + 1; j < nc; ++j) rest = checked_sub(rest, checked_mul(b.coeff[j], t.mark(j, i)));
        long long diag = t.mark(i, i);
        if (rest % diag != 0)
            throw std::runtime_error("burnside_from_marks: non-integral solution, inconsistent mark data");
        b.coeff[i] = rest / diag;
    }
    return b;
}

BurnsideElement burnside_mul(const TableOfMarks& t, const BurnsideElement& a, const BurnsideElement& b) {
    auto ma = burnside_marks(t, a);
    auto mb = burnside_marks(t, b);
    std::vector<long long> m(ma.size());
    for (size_t i = 0; i < m.size(); ++i) m[i] = checked_mul(ma[i], mb[i]);
    return burnside_from_marks(t, m);
}

BurnsideElement burnside_add(const BurnsideElement& a, const BurnsideElement& b) {
    BurnsideElement c = a;
    for (size_t i = 0; i < c.coeff.size(); ++i) c.coeff[i] = checked_add(c.coeff[i], b.coeff[i]);
    return c;
}

BurnsideElement burnside_of_gset(const SubgroupLattice& lat, const GSet& x) {
    auto d = orbit_decomposition(lat, x);
    BurnsideElement b;
    b.coeff.assign(lat.num_classes(), 0);
    for (auto [c, mult] : d.census) b.coeff[c] += mult;
    return b;
}

std::optional<GMap> gset_isomorphism(const SubgroupLattice& lat, const GSet& x, const GSet& y) {
    const FiniteGroup& G = *lat.grp;
    auto dx = orbit_decomposition(lat, x);
    auto dy = orbit_decomposition(lat, y);
    if (dx.orbits.size() != dy.orbits.size()) return std::nullopt;
    std::vector<char> used(dy.orbits.size(), 0);
    GMap f;
    f.dom = x;
    f.cod = y;
    f.img.assign(x.size, -1);
    for (size_t ox = 0; ox < dx.orbits.size(); ++ox) {
        int sx = dx.stabilizer[ox];
        bool matched = false;
        for (size_t oy = 0; oy < dy.orbits.size() && !matched; ++oy) {
            if (used[oy]) continue;
            int sy = dy.stabilizer[oy];
            if (lat.cls_of[sx] != lat.cls_of[sy]) continue;
            // find g with stab_x^g = stab_y, then a*x0 -> (a*g^-1 acting...) via y0
            for (int g = 0; g < G.n && !matched; ++g) {
                if (lat.conjugate_subgroup(sx, g) != sy) continue;
                // x-orbit least element x0 has stab S; y0 has stab S^g = T.
                // map a*x0 -> (a g) * y0'? need stab(z)=S at the image of x0:
                // take z = g^{-1}... use: x0 -> w*y0 with stab(w y0) = T^{w^-1} = S
                // T^{w^-1} = S  <=>  w T w^{-1} = S  <=>  T = S^{w}; so w = g works
                int x0 = dx.orbits[ox][0];
                int y0 = dy.orbits[oy][0];
                int z = y.act[g][y0];
                bool ok = true;
                for (int a = 0; a < G.n && ok; ++a) {
                    int from = x.act[a][x0];
                    int to = y.act[a][z];
                    if (f.img[from] >= 0 && f.img[from] != to) ok = false;
                }
                if (!ok) continue;
                for (int a = 0; a < G.n; ++a) f.img[x.act[a][x0]] = y.act[a][z];
                used[oy] = 1;
                matched = true;
            }
        }
        if (!matched) return std::nullopt;
    }
    f.validate();
    // injectivity check
    std::vector<char> hit(y.size, 0);
    for (int v : f.img) {
        if (hit[v]) return std::nullopt;
        hit[v] = 1;
    }
    return f;
}

GSet induced_gset(const SubgroupContext& ctx, const GSet& z) {
    const SubgroupLattice& K = *ctx.parent;
    const FiniteGroup& G = *K.grp;
    // cosets of H in K, by least representative
    std::vector<int> which(G.n, -1);
    std::vector<int> reps;
    for (int g = 0; g < G.n; ++g) {
        if (which[g] >= 0) continue;
        int c = int(reps.size());
        for (int he : ctx.to_parent) which[G.mul(g, he)] = c;
        reps.push_back(g);
    }
    GSet x;
    x.grp = K.grp;
    x.size = int(reps.size()) * z.size;
    x.payload.resize(x.size);
    auto id_of = [&](int c, int e) { return c * z.size + e; };
    for (size_t c = 0; c < reps.size(); ++c)
        for (int e = 0; e < z.size; ++e) {
            auto& p = x.payload[id_of(int(c), e)];
            p = {(long long)reps[c]};
            p.insert(p.end(), z.payload[e].begin(), z.payload[e].end());
        }
    x.act.assign(G.n, std::vector<int>(x.size));
    for (int g = 0; g < G.n; ++g)
        for (size_t c = 0; c < reps.size(); ++c) {
            int gc = G.mul(g, reps[c]);
            int c2 = which[gc];
            int h = G.mul(G.invert(reps[c2]), gc);  // residual H element
            int hz = ctx.from_parent[h];
            if (hz < 0) throw std::runtime_error("induced_gset: residual element outside H");
            for (int e = 0; e < z.size; ++e) x.act[g][id_of(int(c), e)] = id_of(c2, z.act[hz][e]);
        }
    return x;
}

}  // namespace equik
