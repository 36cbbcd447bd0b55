#pragma once

#include "rlsq/dense_matrix.hpp"

namespace rlsq {

/// Householder QR factorization M = Q R with Q held implicitly.
///
/// reflectors(i,k), i > k, holds the tail of the k-th Householder vector
/// (its leading entry is 1 by convention); tau[k] is the reflector
/// coefficient. r is the n x n upper-triangular factor with a nonnegative
/// diagonal, strict lower entries exactly zero.
struct QRFactors {
    std::size_t rows = 0;
    std::size_t cols = 0;
    DenseMatrix reflectors; // m x n, strictly-lower part used
    Vec tau;                // n coefficients
    DenseMatrix r;          // n x n upper triangular, diag >= 0
};

/// Factor a tall matrix (rows >= cols). Throws RankDeficiencyError when any
/// |R_ii| < n*u*||M||_F; the refinement drivers treat that as fatal since
/// full column rank is assumed throughout.
QRFactors householder_qr(const DenseMatrix& m);

/// Same factorization without the rank check. Callers inspect r's diagonal
/// themselves (used by the Krylov combine, which truncates collinear columns).
QRFactors householder_qr_unchecked(const DenseMatrix& m);

/// v <- Q^T v (v has length rows)
void apply_q_transpose(const QRFactors& f, Vec& v);

/// v <- Q v
void apply_q(const QRFactors& f, Vec& v);

/// Materialize the thin Q (rows x cols, orthonormal columns).
DenseMatrix thin_q(const QRFactors& f);

/// Solve r z = y (or r^T z = y when transposed) by substitution.
/// Throws SingularTriangularError on a zero diagonal entry.
Vec tri_solve(const DenseMatrix& r, const Vec& y, bool transposed = false);

/// min_x ||M x - b|| via the factorization: x = R^{-1} (Q^T b)[0:n].
Vec qr_least_squares(const QRFactors& f, const Vec& b);

/// Convenience: factor-and-solve. The backward-stable reference solver.
Vec qr_least_squares(const DenseMatrix& m, const Vec& b);

} // namespace rlsq
