/*
 * Induction, restriction, and conjugation of coefficient systems, with the
 * explicit isomorphisms the calculus runs on: Frobenius reciprocity, the
 * double coset decomposition, adjunction units/counits, realization of spans
 * as functors P(w), and 2-cells as matrices of natural transformations.
 *
 * Systems over a subgroup H live over the lattice of H-as-a-group; subgroup
 * element numbering is ascending in the parent, so nested contexts agree and
 * block representatives (least coset elements) are the same computed in any
 * enclosing group.
 */
#pragma once

#include "equik/coeff.hpp"
#include "equik/span.hpp"

#include <optional>
#include <vector>

namespace equik {

// ---- restriction ----
// m over ctx.parent's group lattice; result over ctx.lat
CoefficientSystem restrict_system(const CoefficientSystem& m, const SubgroupContext& ctx);
CoeffMorphism restrict_morphism(const CoeffMorphism& f, const SubgroupContext& ctx);
// rings restrict levelwise (restriction is strong monoidal)
CoefficientRing restrict_ring(const CoefficientRing& s, const SubgroupContext& ctx);

// ---- induction ----
// m over ctx.lat (the group H); result over ctx.parent (the group K)
CoefficientSystem induce_system(const CoefficientSystem& m, const SubgroupContext& ctx);
CoeffMorphism induce_morphism(const CoeffMorphism& f, const SubgroupContext& ctx);

// Block data of the induced system at level J of K: coset representatives x
// (least elements, ascending) with J^x <= H, the corresponding level of m,
// and rank offsets.
struct InducedLevel {
    std::vector<int> reps;
    std::vector<int> sub_level;  // subgroup index in m's lattice
    std::vector<int> offset;
    int total = 0;
};
InducedLevel induced_level(const CoefficientSystem& m, const SubgroupContext& ctx, int j);

// ---- conjugation ----
// m over the lattice of subgroup at ambient index h_at; g an ambient element.
// Pure relabeling: levels L of H^g take the value of m at L^{g^-1}.
CoefficientSystem conjugate_system(const CoefficientSystem& m, LatticePtr ambient, int h_at, int g);
CoeffMorphism conjugate_morphism(const CoeffMorphism& f, LatticePtr ambient, int h_at, int g);

// ---- adjunction ----
// counit I^B_A R^B_A M -> M, for M over ctx.parent (the group B), A = ctx subgroup
CoeffMorphism adjunction_counit(const CoefficientSystem& m, const SubgroupContext& ctx);
// unit N -> R^B_A I^B_A N, for N over ctx.lat
CoeffMorphism adjunction_unit(const CoefficientSystem& n, const SubgroupContext& ctx);
// I^C_A R^C_A M => I^C_B R^C_B M for A <= B <= C, M over the lattice of C
CoeffMorphism eps_chain(const CoefficientSystem& m, LatticePtr c_lat, int a_in_c, int b_in_c);

struct AdjunctionWitness {
    CoeffMorphism unit;    // at R^C_A M
    CoeffMorphism counit;  // at R^C_B M  (I^B_A R^B_A R^C_B M -> R^C_B M)
    CoeffMorphism eps;     // I^C_A R^C_A M -> I^C_B R^C_B M
};
AdjunctionWitness adjunction_witness(const CoefficientSystem& m, LatticePtr c_lat, int a_in_c, int b_in_c);

// I^C_B I^B_A m -> I^C_A m, for m over the lattice of A (A <= B <= C);
// inner = I^B_A m must be supplied (it determines block layouts).
CoeffMorphism induction_composition_iso(const CoefficientSystem& m, LatticePtr c_lat, int a_in_c, int b_in_c);

// ---- Frobenius reciprocity ----
struct FrobeniusResult {
    CoefficientSystem lhs;  // M box I(N)
    CoefficientSystem rhs;  // I(R(M) box N)
    CoeffMorphism iso;      // lhs -> rhs
};
FrobeniusResult frobenius_iso(const CoefficientSystem& m, const CoefficientSystem& n,
                              const SubgroupContext& ctx);  // ctx: H inside K; m over K, n over H

// ---- double coset formula ----
struct DoubleCosetIso {
    CoefficientSystem lhs;                 // R^K_H I^K_J (m), over lattice of H
    CoefficientSystem rhs;                 // direct sum over gamma of I R c_gamma (m)
    std::vector<CoefficientSystem> parts;  // the summands, in gamma order
    DoubleCosetData cosets;
    CoeffMorphism iso;                     // lhs -> rhs
};
DoubleCosetIso double_coset_iso(LatticePtr ambient, int k, int j, int h, const CoefficientSystem& m);

// ---- spans as functors ----
struct SpanFunctorResult {
    CoefficientSystem value;               // over the lattice of K
    std::vector<CoefficientSystem> atoms;  // summands in normal-form order
    SpanNormalForm nf;
};
// m over the lattice of the span's source subgroup H
SpanFunctorResult span_functor(const Span& w, const CoefficientSystem& m);

// optional custom choice of the y elements (y[i] must satisfy t(X_i^e) = y_i K);
// used to check that the realized functor does not depend on those choices
SpanFunctorResult span_functor_with_y(const Span& w, const CoefficientSystem& m, const std::vector<int>& y);

// P(w) on morphisms: atomwise conjugate/induce/restrict of phi
CoeffMorphism span_functor_morphism(const Span& w, const CoeffMorphism& phi);

struct TwoCellMatrix {
    SpanFunctorResult dom, cod;
    // entries[i][j]: morphism atom_i -> atom_j, empty when phi misses
    std::vector<std::vector<std::optional<CoeffMorphism>>> entries;
    CoeffMorphism total;  // P(dom)(m) -> P(cod)(m)
};
TwoCellMatrix two_cell_transform(const Span2Cell& cell, const CoefficientSystem& m);

// Composition isomorphism P(w2 * w1)(m) -> P(w2)(P(w1)(m)), constructed
// deterministically from the normal forms (not found by search).
struct CompositionIso {
    CoefficientSystem lhs;  // P(w2 * w1)(m)
    CoefficientSystem rhs;  // P(w2)(P(w1)(m))
    CoeffMorphism iso;
};
CompositionIso span_composition_iso(const Span& w1, const Span& w2, const CoefficientSystem& m);

}  // namespace equik
