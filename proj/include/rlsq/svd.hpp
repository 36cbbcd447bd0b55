#pragma once

#include "rlsq/dense_matrix.hpp"
#include "rlsq/qr.hpp"

namespace rlsq {

/// Thin SVD M = U diag(sigma) V^T with sigma nonincreasing,
/// U (m x n) and V (n x n) orthonormal.
struct SVDFactors {
    DenseMatrix u;
    Vec sigma;
    DenseMatrix v;
};

/// Thin SVD of a tall matrix (rows >= cols). Reduces to the triangular
/// factor by Householder QR, then runs one-sided Jacobi on it (sweep cap
/// 60, relative off-diagonal tolerance n*u). Throws SvdConvergenceError
/// if the cap is hit.
SVDFactors thin_svd(const DenseMatrix& m);

/// Largest singular value. Wide matrices are transposed first.
double spectral_norm(const DenseMatrix& m);

} // namespace rlsq
