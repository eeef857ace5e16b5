/*
 * Totally ordered finite G-sets with strictly associative coproducts,
 * products, and pullbacks; orbits and stabilizers; the table of marks and the
 * Burnside ring.
 *
 * Element payloads are flattened atom tuples.  A product element carries the
 * concatenation of its factors' tuples and products are ordered by payload
 * (ties keep row-major generation order), which makes the canonical choices
 * associative as literal record values, not just up to isomorphism.
 */
#pragma once

#include "equik/group.hpp"
#include "equik/intmat.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace equik {

struct GSet {
    GroupPtr grp;
    int size = 0;
    std::vector<std::vector<long long>> payload;  // one atom tuple per element
    std::vector<std::vector<int>> act;            // act[g][x]

    int apply(int g, int x) const { return act[g][x]; }
    void validate() const;  // group action laws

    bool operator==(const GSet& o) const;
};

struct GMap {
    GSet dom, cod;
    std::vector<int> img;

    void validate() const;  // equivariance
    bool operator==(const GMap& o) const { return dom == o.dom && cod == o.cod && img == o.img; }
};

GSet empty_gset(GroupPtr g);
GSet make_gset(GroupPtr g, std::vector<std::vector<int>> action);  // payload [i] per element

// G/H with cosets ordered by least element, acting by left translation.
GSet canonical_orbit(const SubgroupLattice& lat, int sub_idx);
// id of the coset g*H inside canonical_orbit(lat, sub_idx)
int orbit_coset_id(const SubgroupLattice& lat, int sub_idx, int g);
// least group element of coset with given id
long long orbit_coset_rep(const GSet& orbit, int coset);

GMap identity_map(const GSet& x);
GMap compose_maps(const GMap& f, const GMap& g);  // g after f

std::vector<int> fixed_points(const GSet& x, const std::vector<int>& subgroup_elems);

GSet coproduct_gset(const GSet& a, const GSet& b);
// product with projections
struct ProductResult {
    GSet set;
    GMap p1, p2;
};
ProductResult product_gset(const GSet& a, const GSet& b);

struct PullbackResult {
    GSet set;
    GMap p1, p2;
};
PullbackResult pullback_over(const GMap& f, const GMap& g);

struct OrbitDecomposition {
    std::vector<std::vector<int>> orbits;       // element ids, by least element order
    std::vector<int> stabilizer;                // subgroup index of stab(least element), per orbit
    std::vector<std::pair<int, int>> census;    // (class index, multiplicity), classes ascending
    GSet canonical;                             // disjoint union of canonical orbits
    GMap iso;                                   // x -> canonical
};
OrbitDecomposition orbit_decomposition(const SubgroupLattice& lat, const GSet& x);

// mark vector over subgroup classes ascending: marks[c] = |X^{H_c}|
std::vector<long long> marks_of(const SubgroupLattice& lat, const GSet& x);

// Rows list orbit classes from [G/G] down to [G/e]; columns are subgroup
// classes ascending, so row r holds the marks of the orbit of class
// (num_classes-1-r).  Zero strictly right of the anti-diagonal, and the
// anti-diagonal entries |W(H)| are positive.
struct TableOfMarks {
    IMat m;
    long long mark(int orbit_cls, int subgroup_cls) const;
};
TableOfMarks table_of_marks(const SubgroupLattice& lat);

struct BurnsideElement {
    std::vector<long long> coeff;  // of [G/H_c], classes ascending
    bool operator==(const BurnsideElement& o) const { return coeff == o.coeff; }
};

std::vector<long long> burnside_marks(const TableOfMarks& t, const BurnsideElement& b);
// unique solution of the triangular system; throws if non-integral
BurnsideElement burnside_from_marks(const TableOfMarks& t, const std::vector<long long>& marks);
BurnsideElement burnside_mul(const TableOfMarks& t, const BurnsideElement& a, const BurnsideElement& b);
BurnsideElement burnside_add(const BurnsideElement& a, const BurnsideElement& b);
BurnsideElement burnside_of_gset(const SubgroupLattice& lat, const GSet& x);

std::optional<GMap> gset_isomorphism(const SubgroupLattice& lat, const GSet& x, const GSet& y);

// K x_H Z for Z an H-set (H given by context inside the parent lattice):
// elements [x, z] with x a least coset representative of K/H, ordered by
// (x, z); the action permutes cosets with residual H-elements hitting z.
GSet induced_gset(const SubgroupContext& ctx, const GSet& z);

}  // namespace equik
