#include "equik/intmat.hpp"

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <numeric>
#include <sstream>

namespace equik {

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in add");
    return r;
}

long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in sub");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in mul");
    return r;
}

IMat IMat::identity(int n) {
    IMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

bool IMat::is_zero() const {
    for (long long v : a)
        if (v != 0) return false;
    return true;
}

bool IMat::is_identity() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

IMat IMat::transpose() const {
    IMat t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IMat IMat::negated() const {
    IMat t = *this;
    for (auto& v : t.a) v = checked_sub(0, v);
    return t;
}

void IMat::swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < cols; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IMat::swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < rows; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

std::string IMat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows; ++i) {
        os << (i ? " [" : "[");
        for (int j = 0; j < cols; ++j) os << (*this)(i, j) << (j + 1 < cols ? "," : "");
        os << "]" << (i + 1 < rows ? "\n" : "");
    }
    os << "]";
    return os.str();
}

IMat mat_mul(const IMat& x, const IMat& y) {
    if (x.cols != y.rows) throw std::runtime_error("mat_mul: shape mismatch");
    IMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            long long v = x(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                z(i, j) = checked_add(z(i, j), checked_mul(v, y(k, j)));
        }
    return z;
}

IMat mat_add(const IMat& x, const IMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::runtime_error("mat_add: shape mismatch");
    IMat z = x;
    for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = checked_add(z.a[i], y.a[i]);
    return z;
}

IMat mat_sub(const IMat& x, const IMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::runtime_error("mat_sub: shape mismatch");
    IMat z = x;
    for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = checked_sub(z.a[i], y.a[i]);
    return z;
}

IMat mat_scale(const IMat& x, long long s) {
    IMat z = x;
    for (auto& v : z.a) v = checked_mul(v, s);
    return z;
}

IMat kron(const IMat& x, const IMat& y) {
    IMat z(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            long long v = x(i, j);
            if (v == 0) continue;
            for (int p = 0; p < y.rows; ++p)
                for (int q = 0; q < y.cols; ++q)
                    z(i * y.rows + p, j * y.cols + q) = checked_mul(v, y(p, q));
        }
    return z;
}

IMat hstack(const IMat& x, const IMat& y) {
    if (x.rows != y.rows) throw std::runtime_error("hstack: row mismatch");
    IMat z(x.rows, x.cols + y.cols);
    paste(z, x, 0, 0);
    paste(z, y, 0, x.cols);
    return z;
}

IMat vstack(const IMat& x, const IMat& y) {
    if (x.cols != y.cols) throw std::runtime_error("vstack: col mismatch");
    IMat z(x.rows + y.rows, x.cols);
    paste(z, x, 0, 0);
    paste(z, y, x.rows, 0);
    return z;
}

IMat block_diag(const std::vector<IMat>& blocks) {
    int r = 0, c = 0;
    for (const auto& b : blocks) {
        r += b.rows;
        c += b.cols;
    }
    IMat z(r, c);
    int r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
        paste(z, b, r0, c0);
        r0 += b.rows;
        c0 += b.cols;
    }
    return z;
}

void paste(IMat& dst, const IMat& src, int r0, int c0) {
    for (int i = 0; i < src.rows; ++i)
        for (int j = 0; j < src.cols; ++j) dst(r0 + i, c0 + j) = src(i, j);
}

IMat submatrix(const IMat& m, int r0, int c0, int nr, int nc) {
    IMat z(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) z(i, j) = m(r0 + i, c0 + j);
    return z;
}

std::vector<long long> SmithResult::diag() const {
    std::vector<long long> d;
    int n = std::min(D.rows, D.cols);
    for (int i = 0; i < n; ++i)
        if (D(i, i) != 0) d.push_back(D(i, i));
    return d;
}

namespace {

// Quotient minimizing the remainder magnitude; keeps transform entries small.
long long balanced_quot(long long a, long long b) {
    long long q = a / b, r = a % b;
    if (std::llabs(r) * 2 > std::llabs(b)) q += ((a < 0) == (b < 0)) ? 1 : -1;
    return q;
}

// Row transforms touching A and the bookkeeping matrix U simultaneously.
void row_addmul(IMat& A, IMat& U, int dst, int src, long long f) {
    if (f == 0) return;
    for (int c = 0; c < A.cols; ++c) A(dst, c) = checked_add(A(dst, c), checked_mul(f, A(src, c)));
    for (int c = 0; c < U.cols; ++c) U(dst, c) = checked_add(U(dst, c), checked_mul(f, U(src, c)));
}

void col_addmul(IMat& A, IMat& V, int dst, int src, long long f) {
    if (f == 0) return;
    for (int r = 0; r < A.rows; ++r) A(r, dst) = checked_add(A(r, dst), checked_mul(f, A(r, src)));
    for (int r = 0; r < V.rows; ++r) V(r, dst) = checked_add(V(r, dst), checked_mul(f, V(r, src)));
}

void negate_row(IMat& A, IMat& U, int i) {
    for (int c = 0; c < A.cols; ++c) A(i, c) = checked_sub(0, A(i, c));
    for (int c = 0; c < U.cols; ++c) U(i, c) = checked_sub(0, U(i, c));
}

}  // namespace

namespace {

long long gcd_ll(long long a, long long b, long long& s, long long& t) {
    // extended gcd, g >= 0
    long long s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        long long q = a / b;
        long long r = a - q * b;
        a = b;
        b = r;
        long long s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
        long long t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (a < 0) {
        a = -a;
        s0 = -s0;
        t0 = -t0;
    }
    s = s0;
    t = t0;
    return a;
}

}  // namespace

SmithResult smith(const IMat& Ain) {
    SmithResult res;
    IMat A = Ain;
    IMat U = IMat::identity(A.rows);
    IMat V = IMat::identity(A.cols);
    int n = std::min(A.rows, A.cols);
    int t = 0;
    // phase 1: diagonalize
    for (; t < n; ++t) {
        int pi = -1, pj = -1;
        long long best = 0;
        for (int i = t; i < A.rows; ++i)
            for (int j = t; j < A.cols; ++j) {
                long long v = std::llabs(A(i, j));
                if (v != 0 && (pi < 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        A.swap_rows(t, pi);
        U.swap_rows(t, pi);
        A.swap_cols(t, pj);
        V.swap_cols(t, pj);
        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < A.rows; ++i) {
                if (A(i, t) == 0) continue;
                long long q = balanced_quot(A(i, t), A(t, t));
                row_addmul(A, U, i, t, -q);
                if (A(i, t) != 0) {
                    A.swap_rows(t, i);
                    U.swap_rows(t, i);
                    clean = false;
                }
            }
            for (int j = t + 1; j < A.cols; ++j) {
                if (A(t, j) == 0) continue;
                long long q = balanced_quot(A(t, j), A(t, t));
                col_addmul(A, V, j, t, -q);
                if (A(t, j) != 0) {
                    A.swap_cols(t, j);
                    V.swap_cols(t, j);
                    clean = false;
                }
            }
            if (clean) break;
        }
        if (A(t, t) < 0) negate_row(A, U, t);
    }
    // phase 2: enforce divisibility pairwise on the diagonal
    for (;;) {
        bool fixed_any = false;
        for (int i = 0; i + 1 < t; ++i)
            for (int j = i + 1; j < t; ++j) {
                long long a = A(i, i), b = A(j, j);
                if (b % a == 0) continue;
                // [a 0; 0 b] -> [g 0; 0 ab/g] by a 2x2 unimodular sandwich
                long long s, tt;
                long long g = gcd_ll(a, b, s, tt);
                long long l_a = a / g, l_b = b / g;
                // columns: C_j += C_i
                col_addmul(A, V, j, i, 1);
                // rows: (R_i, R_j) <- [[s, tt], [-l_b, l_a]] * (R_i, R_j)
                for (int c = 0; c < A.cols; ++c) {
                    long long xi = A(i, c), xj = A(j, c);
                    A(i, c) = checked_add(checked_mul(s, xi), checked_mul(tt, xj));
                    A(j, c) = checked_add(checked_mul(-l_b, xi), checked_mul(l_a, xj));
                }
                for (int c = 0; c < U.cols; ++c) {
                    long long xi = U(i, c), xj = U(j, c);
                    U(i, c) = checked_add(checked_mul(s, xi), checked_mul(tt, xj));
                    U(j, c) = checked_add(checked_mul(-l_b, xi), checked_mul(l_a, xj));
                }
                // now row i = [sa, g], row j = [-l, 0] on columns (i, j)
                col_addmul(A, V, i, j, -balanced_quot(A(i, i), A(i, j)));
                // clean residue in column i of row i if any (sa - q g)
                if (A(i, i) != 0) throw std::runtime_error("smith: divisibility step failed");
                A.swap_cols(i, j);
                V.swap_cols(i, j);
                if (A(i, i) < 0) negate_row(A, U, i);
                if (A(j, j) < 0) negate_row(A, U, j);
                fixed_any = true;
            }
        if (!fixed_any) break;
    }
    res.U = U;
    res.D = A;
    res.V = V;
    res.rank = t;
    return res;
}

HermiteResult hermite_rows(const IMat& Ain) {
    HermiteResult res;
    IMat A = Ain;
    IMat U = IMat::identity(A.rows);
    int r = 0;
    for (int c = 0; c < A.cols && r < A.rows; ++c) {
        // eliminate below row r in column c via gcd chain, smallest pivot first
        for (;;) {
            int pi = -1;
            long long best = 0;
            for (int i = r; i < A.rows; ++i) {
                long long v = std::llabs(A(i, c));
                if (v != 0 && (pi < 0 || v < best)) {
                    best = v;
                    pi = i;
                }
            }
            if (pi < 0) break;
            A.swap_rows(r, pi);
            U.swap_rows(r, pi);
            bool any = false;
            for (int i = r + 1; i < A.rows; ++i) {
                if (A(i, c) == 0) continue;
                long long q = balanced_quot(A(i, c), A(r, c));
                row_addmul(A, U, i, r, -q);
                if (A(i, c) != 0) any = true;
            }
            if (!any) break;
        }
        if (A(r, c) == 0) continue;
        if (A(r, c) < 0) negate_row(A, U, r);
        // reduce entries above the pivot
        for (int i = 0; i < r; ++i) {
            long long q = A(i, c) / A(r, c);
            if (A(i, c) % A(r, c) < 0) q -= 1;  // floor division for canonical 0 <= entry < pivot
            row_addmul(A, U, i, r, -q);
        }
        ++r;
    }
    res.H = A;
    res.U = U;
    res.rank = r;
    return res;
}

IMat column_lattice_basis(const IMat& A) {
    HermiteResult h = hermite_rows(A.transpose());
    IMat b(A.rows, h.rank);
    for (int i = 0; i < h.rank; ++i)
        for (int j = 0; j < A.rows; ++j) b(j, i) = h.H(i, j);
    return b;
}

IMat kernel_basis(const IMat& A) {
    // rows u of U with u * A^T = 0 span the kernel of x -> A x
    HermiteResult h = hermite_rows(A.transpose());
    int n = A.cols;
    int k = n - h.rank;
    IMat raw(n, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) raw(j, i) = h.U(h.rank + i, j);
    return column_lattice_basis(raw);
}

std::optional<IMat> solve(const IMat& A, const IMat& B) {
    if (A.rows != B.rows) throw std::runtime_error("solve: shape mismatch");
    SmithResult s = smith(A);
    IMat C = mat_mul(s.U, B);
    IMat Y(A.cols, B.cols);
    for (int i = 0; i < A.rows; ++i) {
        long long d = (i < std::min(A.rows, A.cols)) ? s.D(i, i) : 0;
        for (int j = 0; j < B.cols; ++j) {
            if (d == 0) {
                if (C(i, j) != 0) return std::nullopt;
            } else {
                if (C(i, j) % d != 0) return std::nullopt;
                if (i < A.cols) Y(i, j) = C(i, j) / d;
            }
        }
    }
    return mat_mul(s.V, Y);
}

bool is_int_invertible(const IMat& A) {
    if (A.rows != A.cols) return false;
    auto x = solve(A, IMat::identity(A.rows));
    return x.has_value();
}

IMat int_inverse(const IMat& A) {
    if (A.rows != A.cols) throw std::runtime_error("int_inverse: not square");
    auto x = solve(A, IMat::identity(A.rows));
    if (!x) throw std::runtime_error("int_inverse: matrix not invertible over Z");
    return *x;
}

namespace {

long long det_mod_p(IMat A, long long p) {
    for (auto& v : A.a) {
        v %= p;
        if (v < 0) v += p;
    }
    int n = A.rows;
    long long det = 1;
    auto mulmod = [&](long long a, long long b) { return (long long)((__int128)a * b % p); };
    auto powmod = [&](long long a, long long e) {
        long long r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (A(r, c) != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            A.swap_rows(piv, c);
            det = p - det;
            if (det == p) det = 0;
        }
        det = mulmod(det, A(c, c));
        long long inv = powmod(A(c, c), p - 2);
        for (int r = c + 1; r < n; ++r) {
            if (A(r, c) == 0) continue;
            long long f = mulmod(A(r, c), inv);
            for (int k = c; k < n; ++k) {
                A(r, k) = (A(r, k) - mulmod(f, A(c, k))) % p;
                if (A(r, k) < 0) A(r, k) += p;
            }
        }
    }
    return det % p;
}

bool is_prime_u32(long long x) {
    if (x < 2) return false;
    for (long long d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

}  // namespace

bool is_unimodular(const IMat& A) {
    if (A.rows != A.cols) return false;
    int n = A.rows;
    if (n == 0) return true;
    // bits of the Hadamard bound on |det|
    long double logdet = 0;
    for (int i = 0; i < n; ++i) {
        long double s = 0;
        for (int j = 0; j < n; ++j) s += (long double)A(i, j) * A(i, j);
        if (s == 0) return false;
        logdet += 0.5L * std::log2(s);
    }
    int need = int(logdet) + 3;
    long long p = (1LL << 31) - 1;
    int bits = 0;
    int sign = 0;  // +1 or -1 once known
    while (bits < need) {
        while (!is_prime_u32(p)) --p;
        long long d = det_mod_p(A, p);
        if (d == 1) {
            if (sign == -1) return false;
            sign = 1;
        } else if (d == p - 1) {
            if (sign == 1) return false;
            sign = -1;
        } else {
            return false;
        }
        bits += 30;
        --p;
    }
    return true;
}

std::optional<IMat> lattice_coords(const IMat& basis, const IMat& v) {
    if (basis.cols == 0) {
        if (!v.is_zero()) return std::nullopt;
        return IMat(0, v.cols);
    }
    return solve(basis, v);
}

QuotientShape quotient_shape(int ambient_dim, const IMat& sub) {
    QuotientShape q;
    if (sub.cols == 0) {
        q.free_rank = ambient_dim;
        return q;
    }
    if (sub.rows != ambient_dim) throw std::runtime_error("quotient_shape: shape mismatch");
    SmithResult s = smith(sub);
    for (long long d : s.diag())
        if (d > 1) q.torsion.push_back(d);
    q.free_rank = ambient_dim - s.rank;
    return q;
}

}  // namespace equik
