/*
 * Exact integer matrices and lattice algorithms: Smith and Hermite normal
 * forms, integer kernels, linear solving.  Everything in equik reduces to
 * these routines; all arithmetic is overflow-checked 64-bit.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace equik {

struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

long long checked_add(long long a, long long b);
long long checked_sub(long long a, long long b);
long long checked_mul(long long a, long long b);

// Dense row-major integer matrix.
struct IMat {
    int rows = 0;
    int cols = 0;
    std::vector<long long> a;

    IMat() = default;
    IMat(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c), 0) {}

    static IMat identity(int n);

    long long& operator()(int r, int c) { return a[size_t(r) * cols + c]; }
    long long operator()(int r, int c) const { return a[size_t(r) * cols + c]; }

    bool operator==(const IMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const IMat& o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_identity() const;

    IMat transpose() const;
    IMat negated() const;

    void swap_rows(int i, int j);
    void swap_cols(int i, int j);

    std::string to_string() const;
};

IMat mat_mul(const IMat& x, const IMat& y);
IMat mat_add(const IMat& x, const IMat& y);
IMat mat_sub(const IMat& x, const IMat& y);
IMat mat_scale(const IMat& x, long long s);
IMat kron(const IMat& x, const IMat& y);

// [x | y] and [x ; y]
IMat hstack(const IMat& x, const IMat& y);
IMat vstack(const IMat& x, const IMat& y);

// block_diag of a list
IMat block_diag(const std::vector<IMat>& blocks);

// Writes src into dst at offset (r0, c0).
void paste(IMat& dst, const IMat& src, int r0, int c0);
IMat submatrix(const IMat& m, int r0, int c0, int nr, int nc);

// U*A*V = D with U, V unimodular and D diagonal, d1 | d2 | ... >= 0.
struct SmithResult {
    IMat U, D, V;
    int rank = 0;
    std::vector<long long> diag() const;
};
SmithResult smith(const IMat& A);

// H = U*A with U unimodular, H in row Hermite normal form (pivots positive,
// entries above pivots reduced, zero rows at the bottom).
struct HermiteResult {
    IMat H, U;
    int rank = 0;
};
HermiteResult hermite_rows(const IMat& A);

// Canonical basis of the lattice spanned by the columns of A, returned as the
// columns of the result (column count = rank).
IMat column_lattice_basis(const IMat& A);

// Canonical basis of {x : A x = 0} as columns.
IMat kernel_basis(const IMat& A);

// Integer solution X of A X = B, if one exists.
std::optional<IMat> solve(const IMat& A, const IMat& B);

// Inverse of an integrally invertible square matrix (throws if not).
IMat int_inverse(const IMat& A);
bool is_int_invertible(const IMat& A);

// Exact |det| == 1 test via modular determinants against the Hadamard bound;
// safe for matrices whose entries would make another normal form overflow.
bool is_unimodular(const IMat& A);

// Coordinates of the columns of V in the column-lattice basis B
// (B assumed full column rank); nullopt if some column is not in the lattice.
std::optional<IMat> lattice_coords(const IMat& basis, const IMat& v);

// Elementary divisors > 1 of the quotient (ambient lattice Z^n) / (columns of A),
// together with the free rank of the quotient.
struct QuotientShape {
    std::vector<long long> torsion;  // invariant factors > 1
    int free_rank = 0;
};
QuotientShape quotient_shape(int ambient_dim, const IMat& sublattice_cols);

}  // namespace equik
