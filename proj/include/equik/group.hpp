/*
 * Finite groups by multiplication table, subgroup lattices, conjugacy classes
 * of subgroups, Weyl groups, and double cosets.  Groups are built from a small
 * catalog or from permutation generators (order <= 24).
 */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace equik {

struct FiniteGroup {
    int n = 0;
    std::vector<std::vector<int>> mult;  // mult[a][b] = a*b
    std::vector<int> inv;
    std::string label;

    int mul(int a, int b) const { return mult[a][b]; }
    int invert(int a) const { return inv[a]; }

    // throws on broken identity/inverse/associativity
    void validate() const;

    bool operator==(const FiniteGroup& o) const { return n == o.n && mult == o.mult; }
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr group_from_table(std::vector<std::vector<int>> table, std::string label = "");

// Closure of permutations on <= 8 points; elements ordered by breadth-first
// word discovery (identity first, ties by lexicographic generator word).
GroupPtr group_from_generators(const std::vector<std::vector<int>>& perms, std::string label = "");

// trivial, C1..C12, C2xC2, S3, D4, Q8, D6, A4
GroupPtr catalog_group(const std::string& name);

constexpr int kMaxGroupOrder = 24;

struct Subgroup {
    std::vector<int> elems;  // sorted
    bool contains(int g) const;
};

struct WeylData {
    int sub = -1;                 // subgroup index in the lattice
    std::vector<int> normalizer;  // sorted elements of N_G(H)
    GroupPtr weyl;                // W = N/H as its own group
    std::vector<int> coset_rep;   // W element -> least element of its N-coset
    std::vector<int> to_weyl;     // G element -> W element, or -1 outside N
};

struct DoubleCosetData {
    int k = -1, j = -1, h = -1;          // subgroup indices, J,H <= K
    std::vector<int> reps;               // least element per double coset J\K/H
    std::vector<std::vector<int>> cosets;  // elements of each J g H
    std::vector<int> intersection;       // subgroup index of H n J^gamma
};

struct SubgroupLattice {
    GroupPtr grp;
    std::vector<Subgroup> subs;             // all subgroups, sorted by (size, elems)
    std::vector<int> cls_of;                // subgroup -> class index
    std::vector<std::vector<int>> classes;  // class -> member subgroup indices
    std::vector<int> cls_rep;               // class -> representative subgroup index
    std::vector<std::vector<char>> leq;     // leq[i][j]: subs[i] subset of subs[j]
    std::vector<std::vector<char>> subconj; // subconj[ci][cj]: (H_ci) <= (H_cj)

    int num_subgroups() const { return int(subs.size()); }
    int num_classes() const { return int(classes.size()); }
    int group_index() const { return num_subgroups() - 1; }
    int trivial_index() const { return 0; }

    int find_subgroup(const std::vector<int>& sorted_elems) const;  // -1 if absent
    int conjugate_subgroup(int s, int g) const;                     // index of H^g = g^-1 H g
    bool contains(int sub_idx, int g) const { return subs[sub_idx].contains(g); }

    bool operator==(const SubgroupLattice& o) const;
};

using LatticePtr = std::shared_ptr<const SubgroupLattice>;

LatticePtr subgroup_lattice(GroupPtr g);

WeylData weyl_group(const SubgroupLattice& lat, int sub_idx);

DoubleCosetData double_cosets(const SubgroupLattice& lat, int k, int j, int h);

// H <= G realized as a group in its own right.  Element i of the subgroup
// group corresponds to parent element to_parent[i]; the numbering is by
// ascending parent index, so nested contexts stay consistent.
struct SubgroupContext {
    LatticePtr parent;
    int sub_idx = -1;
    LatticePtr lat;
    std::vector<int> to_parent;
    std::vector<int> from_parent;  // -1 outside H

    // subgroup-of-H index -> subgroup-of-parent index
    int up(int h_sub) const;
    // subgroup-of-parent index (must be inside H) -> subgroup-of-H index
    int down(int parent_sub) const;
};

SubgroupContext make_context(LatticePtr parent, int sub_idx);

// Memoized make_context (thread safe); contexts are pure values.
const SubgroupContext& context_cached(LatticePtr parent, int sub_idx);

// Least element of the coset g*H (elements of the subgroup given by index).
int coset_rep(const SubgroupLattice& lat, int g, int sub_idx);

}  // namespace equik
