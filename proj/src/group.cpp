#include "equik/group.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <set>
#include <stdexcept>

namespace equik {

void FiniteGroup::validate() const {
    if (n <= 0 || int(mult.size()) != n) throw std::runtime_error("group: bad table size");
    for (const auto& row : mult) {
        if (int(row.size()) != n) throw std::runtime_error("group: ragged table");
        for (int v : row)
            if (v < 0 || v >= n) throw std::runtime_error("group: entry out of range");
    }
    for (int a = 0; a < n; ++a)
        if (mult[0][a] != a || mult[a][0] != a) throw std::runtime_error("group: 0 is not the identity");
    for (int a = 0; a < n; ++a) {
        if (inv[a] < 0 || inv[a] >= n || mult[a][inv[a]] != 0 || mult[inv[a]][a] != 0)
            throw std::runtime_error("group: broken inverse");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mult[mult[a][b]][c] != mult[a][mult[b][c]])
                    throw std::runtime_error("group: not associative");
}

GroupPtr group_from_table(std::vector<std::vector<int>> table, std::string label) {
    auto g = std::make_shared<FiniteGroup>();
    g->n = int(table.size());
    g->mult = std::move(table);
    g->label = std::move(label);
    g->inv.assign(g->n, -1);
    for (int a = 0; a < g->n; ++a)
        for (int b = 0; b < g->n; ++b)
            if (g->mult[a][b] == 0 && g->mult[b][a] == 0) {
                g->inv[a] = b;
                break;
            }
    g->validate();
    return g;
}

namespace {

std::vector<int> perm_compose(const std::vector<int>& a, const std::vector<int>& b) {
    // (a*b)(x) = a(b(x))
    std::vector<int> c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
}

}  // namespace

GroupPtr group_from_generators(const std::vector<std::vector<int>>& perms, std::string label) {
    if (perms.empty()) throw std::runtime_error("group generators: empty list");
    size_t npts = perms[0].size();
    if (npts > 8) throw std::runtime_error("group generators: more than 8 points");
    for (const auto& p : perms) {
        if (p.size() != npts) throw std::runtime_error("group generators: mixed degrees");
        std::vector<char> seen(npts, 0);
        for (int v : p) {
            if (v < 0 || v >= int(npts) || seen[v]) throw std::runtime_error("group generators: not a permutation");
            seen[v] = 1;
        }
    }
    std::vector<int> id(npts);
    for (size_t i = 0; i < npts; ++i) id[i] = int(i);

    // breadth-first word closure: identity first, then words by length,
    // ties by lexicographic generator sequence
    std::vector<std::vector<int>> elems{id};
    std::map<std::vector<int>, int> index{{id, 0}};
    std::queue<int> bfs;
    bfs.push(0);
    while (!bfs.empty()) {
        int cur = bfs.front();
        bfs.pop();
        for (const auto& gen : perms) {
            auto nxt = perm_compose(elems[cur], gen);
            if (index.count(nxt)) continue;
            if (int(elems.size()) >= kMaxGroupOrder)
                throw std::runtime_error("group generators: order exceeds supported bound 24");
            index[nxt] = int(elems.size());
            elems.push_back(nxt);
            bfs.push(index[nxt]);
        }
    }
    int n = int(elems.size());
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) table[a][b] = index.at(perm_compose(elems[a], elems[b]));
    return group_from_table(std::move(table), std::move(label));
}

GroupPtr catalog_group(const std::string& name) {
    auto cyclic = [](int k, std::string label) {
        std::vector<std::vector<int>> table(k, std::vector<int>(k));
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) table[a][b] = (a + b) % k;
        return group_from_table(std::move(table), std::move(label));
    };
    if (name == "trivial" || name == "C1") return group_from_table({{0}}, "C1");
    for (int k = 2; k <= 12; ++k)
        if (name == "C" + std::to_string(k)) return cyclic(k, name);
    if (name == "C2xC2") return group_from_generators({{1, 0, 2, 3}, {0, 1, 3, 2}}, name);
    if (name == "S3") return group_from_generators({{1, 0, 2}, {1, 2, 0}}, name);
    if (name == "D4") return group_from_generators({{1, 2, 3, 0}, {0, 3, 2, 1}}, name);
    if (name == "Q8") {
        // regular action on {1, i, -1, -i, j, k, -j, -k} = indices 0..7
        std::vector<int> qi = {1, 2, 3, 0, 5, 6, 7, 4};  // left mult by i
        std::vector<int> qj = {4, 7, 6, 5, 2, 1, 0, 3};  // left mult by j
        return group_from_generators({qi, qj}, name);
    }
    if (name == "D6") return group_from_generators({{1, 2, 3, 4, 5, 0}, {0, 5, 4, 3, 2, 1}}, name);
    if (name == "A4") return group_from_generators({{1, 2, 0, 3}, {1, 0, 3, 2}}, name);
    throw std::runtime_error("unknown catalog group: " + name);
}

bool Subgroup::contains(int g) const {
    return std::binary_search(elems.begin(), elems.end(), g);
}

namespace {

std::vector<int> closure(const FiniteGroup& g, std::vector<int> seed) {
    std::set<int> s(seed.begin(), seed.end());
    s.insert(0);
    for (;;) {
        size_t before = s.size();
        std::vector<int> cur(s.begin(), s.end());
        for (int a : cur)
            for (int b : cur) s.insert(g.mul(a, b));
        for (int a : cur) s.insert(g.invert(a));
        if (s.size() == before) break;
    }
    return {s.begin(), s.end()};
}

}  // namespace

int SubgroupLattice::find_subgroup(const std::vector<int>& sorted_elems) const {
    for (int i = 0; i < num_subgroups(); ++i)
        if (subs[i].elems == sorted_elems) return i;
    return -1;
}

int SubgroupLattice::conjugate_subgroup(int s, int g) const {
    const FiniteGroup& G = *grp;
    std::vector<int> conj;
    conj.reserve(subs[s].elems.size());
    int gi = G.invert(g);
    for (int h : subs[s].elems) conj.push_back(G.mul(G.mul(gi, h), g));
    std::sort(conj.begin(), conj.end());
    int idx = find_subgroup(conj);
    if (idx < 0) throw std::runtime_error("conjugate_subgroup: closure missing (corrupt lattice)");
    return idx;
}

bool SubgroupLattice::operator==(const SubgroupLattice& o) const {
    if (!(*grp == *o.grp)) return false;
    if (subs.size() != o.subs.size()) return false;
    for (size_t i = 0; i < subs.size(); ++i)
        if (subs[i].elems != o.subs[i].elems) return false;
    return true;
}

LatticePtr subgroup_lattice(GroupPtr g) {
    const FiniteGroup& G = *g;
    if (G.n > kMaxGroupOrder) throw std::runtime_error("subgroup_lattice: order exceeds bound");
    std::set<std::vector<int>> found;
    found.insert({0});
    for (int x = 1; x < G.n; ++x) found.insert(closure(G, {x}));
    // close under joins
    for (;;) {
        size_t before = found.size();
        std::vector<std::vector<int>> cur(found.begin(), found.end());
        for (size_t i = 0; i < cur.size(); ++i)
            for (size_t j = i + 1; j < cur.size(); ++j) {
                std::vector<int> seed = cur[i];
                seed.insert(seed.end(), cur[j].begin(), cur[j].end());
                found.insert(closure(G, seed));
            }
        if (found.size() == before) break;
    }

    auto lat = std::make_shared<SubgroupLattice>();
    lat->grp = g;
    std::vector<std::vector<int>> all(found.begin(), found.end());
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    for (auto& e : all) lat->subs.push_back(Subgroup{std::move(e)});

    int ns = lat->num_subgroups();
    lat->leq.assign(ns, std::vector<char>(ns, 0));
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j)
            lat->leq[i][j] = std::includes(lat->subs[j].elems.begin(), lat->subs[j].elems.end(),
                                           lat->subs[i].elems.begin(), lat->subs[i].elems.end());

    // conjugacy classes of subgroups
    lat->cls_of.assign(ns, -1);
    std::vector<std::vector<int>> classes;
    for (int i = 0; i < ns; ++i) {
        if (lat->cls_of[i] >= 0) continue;
        std::vector<int> members;
        for (int x = 0; x < G.n; ++x) {
            int c = lat->conjugate_subgroup(i, x);
            if (std::find(members.begin(), members.end(), c) == members.end()) members.push_back(c);
        }
        std::sort(members.begin(), members.end());
        for (int m : members) lat->cls_of[m] = int(classes.size());
        classes.push_back(members);
    }
    // order classes by (|H| asc, lex-least member element list); members are
    // already sorted by lattice index whose order refines exactly that key
    std::vector<int> order(classes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ea = lat->subs[classes[a][0]].elems;
        const auto& eb = lat->subs[classes[b][0]].elems;
        if (ea.size() != eb.size()) return ea.size() < eb.size();
        return ea < eb;
    });
    std::vector<int> newcls(classes.size());
    for (size_t i = 0; i < order.size(); ++i) newcls[order[i]] = int(i);
    for (int s = 0; s < ns; ++s) lat->cls_of[s] = newcls[lat->cls_of[s]];
    lat->classes.assign(classes.size(), {});
    for (size_t i = 0; i < order.size(); ++i) lat->classes[i] = classes[order[i]];
    lat->cls_rep.resize(classes.size());
    for (size_t c = 0; c < lat->classes.size(); ++c) lat->cls_rep[c] = lat->classes[c][0];

    int nc = lat->num_classes();
    lat->subconj.assign(nc, std::vector<char>(nc, 0));
    for (int ci = 0; ci < nc; ++ci)
        for (int cj = 0; cj < nc; ++cj) {
            bool ok = false;
            for (int m : lat->classes[cj])
                if (lat->leq[lat->cls_rep[ci]][m]) ok = true;
            lat->subconj[ci][cj] = ok;
        }
    return lat;
}

WeylData weyl_group(const SubgroupLattice& lat, int sub_idx) {
    const FiniteGroup& G = *lat.grp;
    const auto& H = lat.subs[sub_idx].elems;
    WeylData w;
    w.sub = sub_idx;
    for (int g = 0; g < G.n; ++g)
        if (lat.conjugate_subgroup(sub_idx, g) == sub_idx) w.normalizer.push_back(g);

    // cosets of H in N, ordered by least element
    std::vector<int> which(G.n, -1);
    std::vector<int> reps;
    for (int n : w.normalizer) {
        if (which[n] >= 0) continue;
        int c = int(reps.size());
        for (int h : H) which[G.mul(n, h)] = c;
        reps.push_back(n);
    }
    int m = int(reps.size());
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) table[a][b] = which[G.mul(reps[a], reps[b])];
    w.weyl = group_from_table(std::move(table), "W");
    w.coset_rep = reps;
    w.to_weyl.assign(G.n, -1);
    for (int n : w.normalizer) w.to_weyl[n] = which[n];
    return w;
}

DoubleCosetData double_cosets(const SubgroupLattice& lat, int k, int j, int h) {
    if (!lat.leq[j][k] || !lat.leq[h][k]) throw std::runtime_error("double_cosets: J, H must lie in K");
    const FiniteGroup& G = *lat.grp;
    const auto& K = lat.subs[k].elems;
    const auto& J = lat.subs[j].elems;
    const auto& H = lat.subs[h].elems;
    DoubleCosetData d;
    d.k = k;
    d.j = j;
    d.h = h;
    std::set<int> seen;
    for (int g : K) {
        if (seen.count(g)) continue;
        std::vector<int> cell;
        for (int a : J)
            for (int b : H) {
                int x = G.mul(G.mul(a, g), b);
                if (seen.insert(x).second) cell.push_back(x);
            }
        std::sort(cell.begin(), cell.end());
        d.reps.push_back(cell.front());
        d.cosets.push_back(cell);
    }
    for (int g : d.reps) {
        int jg = lat.conjugate_subgroup(j, g);
        std::vector<int> meet;
        std::set_intersection(H.begin(), H.end(), lat.subs[jg].elems.begin(), lat.subs[jg].elems.end(),
                              std::back_inserter(meet));
        int idx = lat.find_subgroup(meet);
        if (idx < 0) throw std::runtime_error("double_cosets: intersection not in lattice");
        d.intersection.push_back(idx);
    }
    return d;
}

int SubgroupContext::up(int h_sub) const {
    std::vector<int> elems;
    for (int e : lat->subs[h_sub].elems) elems.push_back(to_parent[e]);
    std::sort(elems.begin(), elems.end());
    int idx = parent->find_subgroup(elems);
    if (idx < 0) throw std::runtime_error("context: subgroup not found in parent lattice");
    return idx;
}

int SubgroupContext::down(int parent_sub) const {
    std::vector<int> elems;
    for (int e : parent->subs[parent_sub].elems) {
        if (from_parent[e] < 0) throw std::runtime_error("context: subgroup not inside H");
        elems.push_back(from_parent[e]);
    }
    std::sort(elems.begin(), elems.end());
    int idx = lat->find_subgroup(elems);
    if (idx < 0) throw std::runtime_error("context: subgroup not found in sub lattice");
    return idx;
}

SubgroupContext make_context(LatticePtr parent, int sub_idx) {
    SubgroupContext c;
    c.parent = parent;
    c.sub_idx = sub_idx;
    c.to_parent = parent->subs[sub_idx].elems;  // ascending, identity(0) first
    const FiniteGroup& G = *parent->grp;
    c.from_parent.assign(G.n, -1);
    for (size_t i = 0; i < c.to_parent.size(); ++i) c.from_parent[c.to_parent[i]] = int(i);
    int m = int(c.to_parent.size());
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) table[a][b] = c.from_parent[G.mul(c.to_parent[a], c.to_parent[b])];
    auto grp = group_from_table(std::move(table), G.label.empty() ? "" : G.label + "-sub");
    c.lat = subgroup_lattice(grp);
    return c;
}

const SubgroupContext& context_cached(LatticePtr parent, int sub_idx) {
    static std::mutex mu;
    static std::map<std::pair<const SubgroupLattice*, int>, std::unique_ptr<SubgroupContext>> cache;
    static std::vector<LatticePtr> pins;  // keep keyed lattices alive
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(parent.get(), sub_idx);
    auto it = cache.find(key);
    if (it == cache.end()) {
        pins.push_back(parent);
        it = cache.emplace(key, std::make_unique<SubgroupContext>(make_context(parent, sub_idx))).first;
    }
    return *it->second;
}

int coset_rep(const SubgroupLattice& lat, int g, int sub_idx) {
    const FiniteGroup& G = *lat.grp;
    int best = -1;
    for (int h : lat.subs[sub_idx].elems) {
        int x = G.mul(g, h);
        if (best < 0 || x < best) best = x;
    }
    return best;
}

}  // namespace equik
