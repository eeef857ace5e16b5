/*
 * Admissible G-simplicial complexes, fixed subcomplexes, equivariant cellular
 * chains as perfect complexes of free modules over the constant system,
 * chain-level transfers, and the equivariant Euler class in the Burnside ring.
 */
#pragma once

#include "equik/gset.hpp"
#include "equik/module.hpp"

#include <vector>

namespace equik {

struct GSimplicialComplex {
    LatticePtr lat;
    GSet vertices;
    // simp[d]: sorted vertex tuples of the d-simplices, in lexicographic order
    std::vector<std::vector<std::vector<int>>> simp;
    // act[d][g][i]: index of g * simp[d][i]
    std::vector<std::vector<std::vector<int>>> act;

    int dim() const { return int(simp.size()) - 1; }
    GSet simplex_gset(int d) const;
};

// validates face closure, the action, and admissibility (stabilizers fix
// simplices vertexwise); throws with the offending simplex otherwise
GSimplicialComplex load_complex(LatticePtr lat, const GSet& vertices,
                                const std::vector<std::vector<int>>& simplices);
// same but without the admissibility requirement, for complexes that still
// need subdividing
GSimplicialComplex load_complex_raw(LatticePtr lat, const GSet& vertices,
                                    const std::vector<std::vector<int>>& simplices);
bool is_admissible(const GSimplicialComplex& x);

// accepts non-admissible input; the result is always admissible
GSimplicialComplex barycentric_subdivide(const GSimplicialComplex& x);

struct FixedSubcomplex {
    std::vector<std::vector<std::vector<int>>> simp;  // per dimension
    long long euler = 0;
};
FixedSubcomplex fixed_subcomplex(const GSimplicialComplex& x, const std::vector<int>& subgroup_elems);

// orientation corrections: sign of each simplex relative to its orbit
// representative (well defined by admissibility)
std::vector<std::vector<long long>> orientation_signs(const GSimplicialComplex& x);

// chains as a perfect complex of free modules over the constant system;
// degree-n module is S_{X_n} and boundaries carry the orientation signs
PerfectComplex equivariant_chain_complex(const GSimplicialComplex& x);

// reduced variant: degree 0 is the free module on vertices minus the
// basepoint, which must be vertex 0 and fixed by the whole group
PerfectComplex reduced_chain_complex(const GSimplicialComplex& x);

struct EulerClass {
    BurnsideElement cls;
    std::vector<long long> marks;  // chi(X^H) per class, ascending
};
EulerClass equivariant_euler_class(const GSimplicialComplex& x);

// coefficient of [G/H] in the Euler class, per conjugacy class
std::vector<long long> component_rank_vector(const GSimplicialComplex& x);

// the wedge of [K:H] copies of a based H-complex along the basepoint, as a
// K-complex (ctx embeds H into the parent group K); the basepoint must be
// vertex 0 and H-fixed
GSimplicialComplex transfer_complex(const SubgroupContext& ctx, const GSimplicialComplex& y);

// octahedron boundary with the reflection that fixes the equator, over C2
GSimplicialComplex octahedron_c2(LatticePtr c2lat);
// free antipodal square circle over C2
GSimplicialComplex antipodal_circle_c2(LatticePtr c2lat);

}  // namespace equik
