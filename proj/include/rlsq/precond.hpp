#pragma once

#include <cstdint>
#include <optional>

#include "rlsq/dense_matrix.hpp"
#include "rlsq/qr.hpp"
#include "rlsq/sketch.hpp"

namespace rlsq {

/// Right preconditioner from the sketched QR: the upper-triangular R factor
/// of S*A. A R^{-1} has singular values in [1/(1+eta), 1/(1-eta)] up to
/// roundoff, for eta the embedding distortion of S on range(A).
struct Preconditioner {
    DenseMatrix r; // n x n upper triangular, nonsingular
    std::uint64_t source_seed = 0;
    std::optional<double> distortion_hint;
};

/// Factor S*A and keep R. Throws RankDeficiencyError when S*A is
/// numerically rank deficient; callers may resample the sketch seed.
Preconditioner build_preconditioner(const DenseMatrix& a, const SketchOperator& s);

/// build_preconditioner plus the full QR factors of S*A (the refinement
/// drivers use Q for the sketch-and-solve initial iterate).
struct PrecondBuild {
    Preconditioner p;
    QRFactors sa_qr;
};
PrecondBuild build_preconditioner_with_factors(const DenseMatrix& a, const SketchOperator& s);

/// z = R^{-1} v
Vec apply_rinv(const Preconditioner& p, const Vec& v);

/// z = R^{-T} v
Vec apply_rinv_t(const Preconditioner& p, const Vec& v);

/// z = (R^T R)^{-1} v as two triangular solves; R^T R is never formed.
Vec normal_solve(const Preconditioner& p, const Vec& v);

} // namespace rlsq
