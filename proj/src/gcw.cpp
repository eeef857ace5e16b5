#include "equik/gcw.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace equik {

GSet GSimplicialComplex::simplex_gset(int d) const {
    GSet x;
    x.grp = lat->grp;
    if (d < 0 || d > dim()) {
        x.size = 0;
        x.act.assign(lat->grp->n, {});
        return x;
    }
    x.size = int(simp[d].size());
    x.payload.resize(x.size);
    for (int i = 0; i < x.size; ++i) {
        for (int v : simp[d][i]) x.payload[i].push_back(v);
    }
    x.act = act[d];
    return x;
}

GSimplicialComplex load_complex_raw(LatticePtr lat, const GSet& vertices,
                                    const std::vector<std::vector<int>>& simplices) {
    const FiniteGroup& G = *lat->grp;
    GSimplicialComplex x;
    x.lat = lat;
    x.vertices = vertices;
    std::set<std::vector<int>> all;
    for (auto s : simplices) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (s.empty()) throw std::runtime_error("load_complex: empty simplex");
        for (int v : s)
            if (v < 0 || v >= vertices.size) throw std::runtime_error("load_complex: vertex out of range");
        all.insert(s);
    }
    // face closure required
    for (const auto& s : all)
        if (s.size() > 1)
            for (size_t j = 0; j < s.size(); ++j) {
                std::vector<int> face;
                for (size_t k = 0; k < s.size(); ++k)
                    if (k != j) face.push_back(s[k]);
                if (!all.count(face)) throw std::runtime_error("load_complex: simplex list not face closed");
            }
    // every vertex must appear as a 0-simplex so degree 0 matches the vertex set
    for (int v = 0; v < vertices.size; ++v)
        if (!all.count({v})) throw std::runtime_error("load_complex: vertex missing from the simplex list");
    int maxd = 0;
    for (const auto& s : all) maxd = std::max(maxd, int(s.size()));
    x.simp.assign(maxd, {});
    for (const auto& s : all) x.simp[s.size() - 1].push_back(s);
    for (auto& lst : x.simp) std::sort(lst.begin(), lst.end());
    // action closure and admissibility
    x.act.resize(x.simp.size());
    for (int d = 0; d <= x.dim(); ++d) {
        std::map<std::vector<int>, int> pos;
        for (size_t i = 0; i < x.simp[d].size(); ++i) pos[x.simp[d][i]] = int(i);
        x.act[d].assign(G.n, std::vector<int>(x.simp[d].size()));
        for (int g = 0; g < G.n; ++g)
            for (size_t i = 0; i < x.simp[d].size(); ++i) {
                std::vector<int> moved;
                for (int v : x.simp[d][i]) moved.push_back(vertices.act[g][v]);
                std::sort(moved.begin(), moved.end());
                auto it = pos.find(moved);
                if (it == pos.end()) throw std::runtime_error("load_complex: action does not permute simplices");
                x.act[d][g][i] = it->second;
            }
    }
    return x;
}

bool is_admissible(const GSimplicialComplex& x) {
    const FiniteGroup& G = *x.lat->grp;
    for (int d = 0; d <= x.dim(); ++d)
        for (size_t i = 0; i < x.simp[d].size(); ++i)
            for (int g = 0; g < G.n; ++g)
                if (x.act[d][g][i] == int(i))
                    for (int v : x.simp[d][i])
                        if (x.vertices.act[g][v] != v) return false;
    return true;
}

GSimplicialComplex load_complex(LatticePtr lat, const GSet& vertices,
                                const std::vector<std::vector<int>>& simplices) {
    GSimplicialComplex x = load_complex_raw(lat, vertices, simplices);
    const FiniteGroup& G = *lat->grp;
    for (int d = 0; d <= x.dim(); ++d)
        for (size_t i = 0; i < x.simp[d].size(); ++i)
            for (int g = 0; g < G.n; ++g)
                if (x.act[d][g][i] == int(i))
                    for (int v : x.simp[d][i])
                        if (vertices.act[g][v] != v) {
                            std::string s = "{";
                            for (int vv : x.simp[d][i]) s += std::to_string(vv) + ",";
                            s += "}";
                            throw std::runtime_error("load_complex: non-admissible simplex " + s +
                                                     "; barycentric subdivision repairs this");
                        }
    return x;
}

GSimplicialComplex barycentric_subdivide(const GSimplicialComplex& x) {
    const FiniteGroup& G = *x.lat->grp;
    // one vertex per simplex, numbered dimension-major in stored order
    std::vector<int> offset(x.dim() + 2, 0);
    for (int d = 0; d <= x.dim(); ++d) offset[d + 1] = offset[d] + int(x.simp[d].size());
    int nv = offset[x.dim() + 1];
    std::vector<std::vector<int>> vact(G.n, std::vector<int>(nv));
    for (int g = 0; g < G.n; ++g)
        for (int d = 0; d <= x.dim(); ++d)
            for (size_t i = 0; i < x.simp[d].size(); ++i) vact[g][offset[d] + int(i)] = offset[d] + x.act[d][g][i];
    GSet verts = make_gset(x.lat->grp, vact);
    // chains of proper faces
    std::vector<std::vector<int>> chains;
    std::function<void(int, int, std::vector<int>&)> grow = [&](int d, int i, std::vector<int>& cur) {
        cur.push_back(offset[d] + i);
        chains.push_back(cur);
        // extend by cofaces: any simplex of dimension d' > d containing this one
        for (int d2 = d + 1; d2 <= x.dim(); ++d2)
            for (size_t j = 0; j < x.simp[d2].size(); ++j)
                if (std::includes(x.simp[d2][j].begin(), x.simp[d2][j].end(), x.simp[d][i].begin(),
                                  x.simp[d][i].end()))
                    grow(d2, int(j), cur);
        cur.pop_back();
    };
    std::vector<int> cur;
    for (int d = 0; d <= x.dim(); ++d)
        for (size_t i = 0; i < x.simp[d].size(); ++i) grow(d, int(i), cur);
    return load_complex(x.lat, verts, chains);
}

FixedSubcomplex fixed_subcomplex(const GSimplicialComplex& x, const std::vector<int>& subgroup_elems) {
    FixedSubcomplex out;
    out.simp.resize(x.dim() + 1);
    for (int d = 0; d <= x.dim(); ++d)
        for (const auto& s : x.simp[d]) {
            bool fixed = true;
            for (int v : s)
                for (int g : subgroup_elems)
                    if (x.vertices.act[g][v] != v) fixed = false;
            if (fixed) {
                out.simp[d].push_back(s);
                out.euler += (d % 2 == 0) ? 1 : -1;
            }
        }
    return out;
}

std::vector<std::vector<long long>> orientation_signs(const GSimplicialComplex& x) {
    const FiniteGroup& G = *x.lat->grp;
    std::vector<std::vector<long long>> eps(x.dim() + 1);
    for (int d = 0; d <= x.dim(); ++d) {
        eps[d].assign(x.simp[d].size(), 0);
        std::vector<char> seen(x.simp[d].size(), 0);
        for (size_t i = 0; i < x.simp[d].size(); ++i) {
            if (seen[i]) continue;
            eps[d][i] = 1;
            seen[i] = 1;
            for (int g = 0; g < G.n; ++g) {
                int j = x.act[d][g][i];
                if (seen[j]) continue;
                // sign of the permutation sorting g applied to the tuple
                std::vector<int> moved;
                for (int v : x.simp[d][i]) moved.push_back(x.vertices.act[g][v]);
                long long sign = 1;
                for (size_t a = 0; a < moved.size(); ++a)
                    for (size_t b = a + 1; b < moved.size(); ++b)
                        if (moved[a] > moved[b]) sign = -sign;
                eps[d][j] = sign;
                seen[j] = 1;
            }
        }
    }
    return eps;
}

namespace {

PerfectComplex chains_impl(const GSimplicialComplex& x, bool reduced) {
    LatticePtr lat = x.lat;
    CoefficientRing zbar = constant_ring(lat);
    PerfectComplex c;
    c.ring = zbar;
    auto eps = orientation_signs(x);
    std::vector<GSet> degree_sets;
    for (int d = 0; d <= x.dim(); ++d) degree_sets.push_back(x.simplex_gset(d));
    if (reduced) {
        // degree 0: vertices minus the basepoint (vertex 0, required fixed)
        GSet v0 = degree_sets[0];
        for (int g = 0; g < lat->grp->n; ++g)
            if (v0.act[g][0] != 0) throw std::runtime_error("reduced chains: basepoint not fixed");
        GSet rest;
        rest.grp = lat->grp;
        rest.size = v0.size - 1;
        rest.payload.assign(rest.size, {});
        rest.act.assign(lat->grp->n, std::vector<int>(rest.size));
        for (int i = 0; i < rest.size; ++i) rest.payload[i] = v0.payload[i + 1];
        for (int g = 0; g < lat->grp->n; ++g)
            for (int i = 0; i < rest.size; ++i) rest.act[g][i] = v0.act[g][i + 1] - 1;
        degree_sets[0] = rest;
    }
    for (int d = 0; d <= x.dim(); ++d) c.mods.push_back(free_module(zbar, degree_sets[d]));
    for (int d = 1; d <= x.dim(); ++d) {
        // boundary mods[d] -> mods[d-1]
        CoeffMorphism f;
        f.lat = lat;
        std::map<std::vector<int>, int> pos;
        for (size_t i = 0; i < x.simp[d - 1].size(); ++i) pos[x.simp[d - 1][i]] = int(i);
        for (int h = 0; h < lat->num_subgroups(); ++h) {
            auto fc = fixed_points(degree_sets[d], lat->subs[h].elems);
            auto fr = fixed_points(degree_sets[d - 1], lat->subs[h].elems);
            std::vector<int> fixed_row(int(x.simp[d - 1].size()), -1);
            for (size_t i = 0; i < fr.size(); ++i) {
                int idx = (reduced && d == 1) ? fr[i] + 1 : fr[i];
                fixed_row[idx] = int(i);
            }
            IMat m(int(fr.size()), int(fc.size()));
            for (size_t cidx = 0; cidx < fc.size(); ++cidx) {
                int simplex = fc[cidx];
                const auto& tup = x.simp[d][simplex];
                for (size_t j = 0; j < tup.size(); ++j) {
                    std::vector<int> face;
                    for (size_t k = 0; k < tup.size(); ++k)
                        if (k != j) face.push_back(tup[k]);
                    if (reduced && d == 1 && face[0] == 0) continue;  // basepoint killed
                    int fidx = pos.at(face);
                    int r = fixed_row[fidx];
                    if (r < 0) throw std::runtime_error("chains: face of a fixed simplex is not fixed");
                    long long sgn = ((j % 2 == 0) ? 1 : -1) * eps[d][simplex] * eps[d - 1][fidx];
                    m(r, int(cidx)) = checked_add(m(r, int(cidx)), sgn);
                }
            }
            f.level.push_back(std::move(m));
        }
        c.d.push_back(f);
    }
    validate_complex(c);
    return c;
}

}  // namespace

PerfectComplex equivariant_chain_complex(const GSimplicialComplex& x) { return chains_impl(x, false); }

PerfectComplex reduced_chain_complex(const GSimplicialComplex& x) { return chains_impl(x, true); }

EulerClass equivariant_euler_class(const GSimplicialComplex& x) {
    const SubgroupLattice& lat = *x.lat;
    EulerClass out;
    TableOfMarks t = table_of_marks(lat);
    BurnsideElement total;
    total.coeff.assign(lat.num_classes(), 0);
    for (int d = 0; d <= x.dim(); ++d) {
        BurnsideElement b = burnside_of_gset(lat, x.simplex_gset(d));
        for (size_t c = 0; c < total.coeff.size(); ++c)
            total.coeff[c] += ((d % 2 == 0) ? 1 : -1) * b.coeff[c];
    }
    out.cls = total;
    out.marks = burnside_marks(t, total);
    // agreement with fixed-point Euler characteristics
    for (int c = 0; c < lat.num_classes(); ++c) {
        FixedSubcomplex f = fixed_subcomplex(x, lat.subs[lat.cls_rep[c]].elems);
        if (f.euler != out.marks[c])
            throw std::runtime_error("euler class: marks disagree with fixed subcomplex counts");
    }
    return out;
}

std::vector<long long> component_rank_vector(const GSimplicialComplex& x) {
    return equivariant_euler_class(x).cls.coeff;
}

GSimplicialComplex transfer_complex(const SubgroupContext& ctx, const GSimplicialComplex& y) {
    const SubgroupLattice& K = *ctx.parent;
    const FiniteGroup& G = *K.grp;
    // basepoint must be vertex 0, fixed by H
    for (int hh : ctx.lat->subs[ctx.lat->group_index()].elems)
        if (y.vertices.act[hh][0] != 0) throw std::runtime_error("transfer: basepoint not fixed");
    GSet rest;
    rest.grp = y.vertices.grp;
    rest.size = y.vertices.size - 1;
    rest.payload.assign(rest.size, {});
    rest.act.assign(rest.grp->n, std::vector<int>(rest.size));
    for (int i = 0; i < rest.size; ++i) rest.payload[i] = {i};
    for (int g = 0; g < rest.grp->n; ++g)
        for (int i = 0; i < rest.size; ++i) rest.act[g][i] = y.vertices.act[g][i + 1] - 1;
    GSet ind = induced_gset(ctx, rest);
    // vertices: basepoint then the induced pairs
    int nv = 1 + ind.size;
    std::vector<std::vector<int>> vact(G.n, std::vector<int>(nv));
    for (int g = 0; g < G.n; ++g) {
        vact[g][0] = 0;
        for (int i = 0; i < ind.size; ++i) vact[g][1 + i] = 1 + ind.act[g][i];
    }
    GSet verts = make_gset(K.grp, vact);
    // coset representatives in parent order
    std::vector<int> reps;
    {
        std::vector<char> seen(G.n, 0);
        for (int g = 0; g < G.n; ++g) {
            int r = coset_rep(K, g, ctx.sub_idx);
            if (!seen[r]) {
                seen[r] = 1;
                reps.push_back(r);
            }
        }
    }
    std::vector<std::vector<int>> simplices;
    int copy_size = rest.size;
    for (size_t c = 0; c < reps.size(); ++c)
        for (int d = 0; d <= y.dim(); ++d)
            for (const auto& s : y.simp[d]) {
                std::vector<int> tup;
                for (int v : s) tup.push_back(v == 0 ? 0 : 1 + int(c) * copy_size + (v - 1));
                simplices.push_back(tup);
            }
    return load_complex(ctx.parent, verts, simplices);
}

GSimplicialComplex octahedron_c2(LatticePtr c2lat) {
    // vertices 0,1 = +-e1; 2,3 = +-e2; 4,5 = +-e3; reflection swaps 4 and 5
    std::vector<std::vector<int>> vact = {{0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 5, 4}};
    GSet verts = make_gset(c2lat->grp, vact);
    std::vector<std::vector<int>> simplices;
    for (int a : {0, 1})
        for (int b : {2, 3})
            for (int cc : {4, 5}) {
                simplices.push_back({a, b, cc});
                simplices.push_back({a, b});
                simplices.push_back({a, cc});
                simplices.push_back({b, cc});
            }
    for (int v = 0; v < 6; ++v) simplices.push_back({v});
    return load_complex(c2lat, verts, simplices);
}

GSimplicialComplex antipodal_circle_c2(LatticePtr c2lat) {
    std::vector<std::vector<int>> vact = {{0, 1, 2, 3}, {2, 3, 0, 1}};
    GSet verts = make_gset(c2lat->grp, vact);
    std::vector<std::vector<int>> simplices = {{0}, {1}, {2}, {3}, {0, 1}, {1, 2}, {2, 3}, {0, 3}};
    return load_complex(c2lat, verts, simplices);
}

}  // namespace equik
