/*
 * Twisted group rings, modules over coefficient rings, projective modules as
 * idempotent images of free modules, the isotropy filtration with its split
 * exact sequences, evaluation and Phi lifts, K0-level class vectors, the
 * comparison functor F to twisted group ring modules, and perfect complexes.
 */
#pragma once

#include "equik/coeff.hpp"
#include "equik/functor.hpp"

#include <optional>
#include <vector>

namespace equik {

// R_theta[W]: basis (r-basis i, w), index i*|W| + w, multiplication
// (r1 w1)(r2 w2) = (r1 r2^{w1}) w1 w2.
struct TwistedGroupRing {
    int base_rank = 0;
    std::vector<IMat> base_left;
    IMat base_unit;
    std::optional<IMat> base_aug;
    GroupPtr w;
    std::vector<IMat> action;  // per element of w, acting on the base

    int rank() const { return base_rank * w->n; }
    int idx(int i, int wi) const { return i * w->n + wi; }
    IMat unit() const;
    std::optional<IMat> aug() const;
    IMat basis_vec(int i, int wi) const;
    IMat left_op(const IMat& v) const;  // multiplication operator by the column v
    IMat mul(const IMat& a, const IMat& b) const;
    std::vector<std::string> validate() const;
};

TwistedGroupRing twisted_group_ring(int base_rank, std::vector<IMat> base_left, IMat base_unit,
                                    std::optional<IMat> base_aug, GroupPtr w, std::vector<IMat> action);

// S^{H_c}_theta[W_G H_c] for the representative of conjugacy class c
TwistedGroupRing twisted_ring_at_class(const CoefficientRing& s, int cls);

// For twisted rings of monomial type (group-ring base, permutation action):
// the group of monomials (r-basis, w) under ring multiplication.
GroupPtr monomial_group(const TwistedGroupRing& t);

// module over a twisted ring, given by action matrices per ring basis element
struct TwistedModule {
    TwistedGroupRing ring;
    int rank = 0;
    std::vector<IMat> act;

    IMat act_op(const IMat& rvec) const;
    std::vector<std::string> validate() const;
};

TwistedModule free_twisted_module(const TwistedGroupRing& ring, int n);
// Z-basis of module morphisms a -> b (rank_b x rank_a matrices)
std::vector<IMat> twisted_hom(const TwistedModule& a, const TwistedModule& b);
// aug-rank: free rank of Z tensored over the ring (needs ring augmentation)
std::optional<long long> twisted_aug_rank(const TwistedModule& m);

struct TwistedPresentation {
    int generators = 0;
    IMat idem;  // idempotent on the free module of that many generators
    IMat onto;  // free -> module surjection
    IMat section;
};
// idempotent presentation over the twisted ring; nullopt certifies that the
// module is not projective (no section of the generator surjection exists)
std::optional<TwistedPresentation> twisted_idempotent_presentation(const TwistedModule& m);

// ---- modules over coefficient rings ----

struct CoeffModule {
    CoefficientSystem sys;
    std::vector<std::vector<IMat>> act;  // act[subgroup][ring basis]
};
std::vector<std::string> validate_module(const CoefficientRing& s, const CoeffModule& m);

// the free module S_X = S box A_X with its levelwise action
CoeffModule free_coeff_module(const CoefficientRing& s, const GSet& x);
// action operator of a ring element at one level of S_X
IMat free_level_act(const CoefficientRing& s, const GSet& x, int sub, int ring_basis);

struct ProjectiveModule {
    CoefficientRing ring;
    GSet x;
    CoefficientSystem ambient;  // S_X
    CoeffMorphism idem;         // e with e o e = e, an S-module endomorphism

    std::vector<IMat> level_basis() const;  // im(e) per subgroup, HNF columns
};

ProjectiveModule free_module(const CoefficientRing& s, const GSet& x);
ProjectiveModule projective_from_idempotent(const CoefficientRing& s, const GSet& x, const CoeffMorphism& e);
ProjectiveModule projective_direct_sum(const ProjectiveModule& p, const ProjectiveModule& q);

// Z-basis of S-module morphisms S_X -> S_Y
std::vector<CoeffMorphism> free_module_hom(const CoefficientRing& s, const GSet& x, const GSet& y);
// morphism S_X -> S_Y determined by generator images (one column in
// S_Y^{H_o} per orbit o of X, orbits in least-element order)
CoeffMorphism free_hom_from_values(const CoefficientRing& s, const GSet& x, const GSet& y,
                                   const std::vector<IMat>& values);
// Z-basis of Hom(im e, im f), as ambient morphisms phi = f o psi o e
std::vector<CoeffMorphism> module_hom(const ProjectiveModule& p, const ProjectiveModule& q);
// is the endomorphism an S-module map on S_X?
bool is_module_endo(const CoefficientRing& s, const GSet& x, const CoeffMorphism& f);

struct IsotropySplit {
    ProjectiveModule sub;             // P_cls, presented by e o pi o e
    std::vector<IMat> p_basis;        // basis of P levelwise
    std::vector<IMat> sub_basis;      // basis of P_cls levelwise
    CoeffModule quotient;             // P / P_cls with inherited action
    std::vector<IMat> proj;           // P -> quotient, in the chosen bases
    std::vector<IMat> retraction;     // P -> P_cls, in the chosen bases
};
// requires P to vanish at classes above cls; throws with a certificate
// message when torsion or a failed retraction shows the input broke the
// projectivity contract
IsotropySplit isotropy_split(const ProjectiveModule& p, int cls);

struct EvalResult {
    TwistedModule module;   // on the image lattice basis
    IMat lattice;           // columns: basis of P^{H_cls} in S_X^{H_cls}
    IMat level_idempotent;  // e at that level
};
EvalResult evaluate_level(const ProjectiveModule& p, int cls);

// lift of an idempotent over S^{H_cls}_theta on n generators to a projective
// coefficient module on n copies of G/H_cls
ProjectiveModule phi_lift(const CoefficientRing& s, int cls, int n, const IMat& idem);
// the level idempotent of p at H_cls, written on the free twisted module
// basis of n(G/H_cls); inverse direction of phi_lift
IMat phi_coordinates(const CoefficientRing& s, int cls, int n, const ProjectiveModule& lifted);

struct K0Component {
    long long zrank = 0;
    std::optional<long long> augrank;
    std::optional<long long> reduced;  // zrank minus the free contribution
};
struct K0ClassVector {
    std::vector<K0Component> comp;  // per conjugacy class, ascending
};
K0ClassVector k0_class_vector(const ProjectiveModule& p);

// F(M) = M(H/e) / sum of restriction images from higher levels, a module
// over the twisted group ring at the trivial subgroup.
struct ComparisonF {
    TwistedModule module;
    std::vector<long long> torsion;  // invariant factors killed in the quotient
    IMat proj;                       // M^e -> quotient coordinates
    IMat section;
};
ComparisonF comparison_F(const CoefficientRing& s, const CoeffModule& m);
ComparisonF comparison_F_projective(const ProjectiveModule& p);
// Phi(N): N at the trivial level, zero above (the right adjoint section of F)
CoeffModule comparison_Phi(const CoefficientRing& s, const TwistedModule& n);

// ---- perfect complexes ----

struct PerfectComplex {
    CoefficientRing ring;
    std::vector<ProjectiveModule> mods;  // degrees 0..n
    std::vector<CoeffMorphism> d;        // d[k]: mods[k+1] -> mods[k] (ambient maps)
};
void validate_complex(const PerfectComplex& c);  // shapes, module maps, dd = 0

struct HomologyGroup {
    long long free_rank = 0;
    std::vector<long long> torsion;
    bool operator==(const HomologyGroup& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
};

struct PerfectInvariants {
    // homology[subgroup][degree]
    std::vector<std::vector<HomologyGroup>> homology;
    K0ClassVector euler;
    std::vector<bool> bounded;  // per class: evaluations above it are exact
};
PerfectInvariants perfect_invariants(const PerfectComplex& c);

}  // namespace equik
