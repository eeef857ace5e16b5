/*
 * Coefficient systems: functors O_G^op -> finitely generated free Z-modules,
 * stored per subgroup with one integer matrix per orbit-category morphism.
 * Coefficient rings add levelwise multiplication whose structure maps are
 * ring homomorphisms.
 *
 * Conventions: a morphism G/H -> G/K is keyed by (H, K, g) where g is the
 * least element of the image coset gK of eH (so H^g <= K).  The stored matrix
 * is the contravariant one, mapping Z^{rank K} -> Z^{rank H}, and
 * mor(f2 o f1) = mor(f1) * mor(f2).
 */
#pragma once

#include "equik/group.hpp"
#include "equik/gset.hpp"
#include "equik/intmat.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace equik {

struct MorKey {
    int src = -1, dst = -1, rep = 0;
    auto operator<=>(const MorKey&) const = default;
};

// all valid morphism keys G/src -> G/dst (reps ascending)
std::vector<MorKey> orbit_morphisms(const SubgroupLattice& lat, int src, int dst);
// key of the canonical quotient G/H -> G/K for H <= K
MorKey quotient_morphism(const SubgroupLattice& lat, int h, int k);
// key of f2 o f1
MorKey compose_morphisms(const SubgroupLattice& lat, const MorKey& f1, const MorKey& f2);

struct CoefficientSystem {
    LatticePtr lat;
    std::vector<int> rank;
    std::map<MorKey, IMat> mor;

    const IMat& map_of(const MorKey& k) const;
    int level_rank(int sub) const { return rank[sub]; }

    bool operator==(const CoefficientSystem& o) const;
};

struct CoeffMorphism {
    LatticePtr lat;
    std::vector<IMat> level;  // level[h]: rank_N[h] x rank_M[h]

    bool is_zero() const;
    bool is_identity() const;
};

CoefficientSystem zero_system(LatticePtr lat);
CoefficientSystem constant_system(LatticePtr lat);  // A_{G/G}, rank 1 everywhere
CoefficientSystem free_system(LatticePtr lat, const GSet& x);
CoefficientSystem direct_sum(const CoefficientSystem& m, const CoefficientSystem& n);

struct BoxResult {
    CoefficientSystem sys;
};
CoefficientSystem box_product(const CoefficientSystem& m, const CoefficientSystem& n);

CoeffMorphism identity_morphism(const CoefficientSystem& m);
CoeffMorphism zero_morphism(const CoefficientSystem& m, const CoefficientSystem& n);
CoeffMorphism compose(const CoeffMorphism& first, const CoeffMorphism& then);
CoeffMorphism morphism_sum(const CoeffMorphism& a, const CoeffMorphism& b);
bool morphism_valid(const CoefficientSystem& m, const CoefficientSystem& n, const CoeffMorphism& f);
bool morphism_invertible(const CoeffMorphism& f);
CoeffMorphism morphism_inverse(const CoeffMorphism& f);
// direct sum of morphisms, blockwise
CoeffMorphism morphism_direct_sum(const CoeffMorphism& a, const CoeffMorphism& b);

// Z-basis of natural transformations m -> n, via integer kernel solving.
std::vector<CoeffMorphism> hom_system(const CoefficientSystem& m, const CoefficientSystem& n);

// Levelwise ring structure on top of a coefficient system.
struct LevelRing {
    std::vector<IMat> left;  // left[i] = matrix of multiplication by basis e_i
    IMat unit;               // column vector
    std::optional<IMat> aug; // row vector: ring map to Z, when available
};

struct CoefficientRing {
    CoefficientSystem sys;
    std::vector<LevelRing> ring;  // per subgroup

    const LevelRing& at(int sub) const { return ring[sub]; }
};

// finite-rank free Z-algebra with a G-action by ring automorphisms
struct GRingWithAction {
    int rank = 0;
    std::vector<IMat> left;
    IMat unit;
    GroupPtr grp;
    std::vector<IMat> action;  // per group element
    std::optional<IMat> aug;

    std::vector<std::string> validate() const;
};

GRingWithAction gring_group_ring(GroupPtr pi, GroupPtr g,
                                 const std::vector<std::vector<int>>& action_on_pi);
GRingWithAction gring_trivial_z(GroupPtr g);

CoefficientRing constant_ring(LatticePtr lat);  // the unit coefficient ring Z-bar
CoefficientRing fp_system(LatticePtr lat, const GRingWithAction& r);

// Coefficient ring of group rings Z[pi_H] from per-subgroup groups and
// contravariant homomorphisms (one per orbit morphism).
struct GroupRingSpec {
    std::vector<GroupPtr> pi;                       // per subgroup
    std::map<MorKey, std::vector<int>> hom;         // element map pi[dst] -> pi[src]
};
CoefficientRing group_ring_system(LatticePtr lat, const GroupRingSpec& spec);

std::vector<std::string> validate_system(const CoefficientSystem& m);
std::vector<std::string> validate_ring(const CoefficientRing& s);

}  // namespace equik
