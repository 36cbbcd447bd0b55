#pragma once

#include <cstdint>

#include "rlsq/dense_matrix.hpp"

namespace rlsq {

enum class SketchKind { SparseSign, Gaussian };

/// Random subspace embedding S in R^{s x m}, applied as a linear map.
///
/// Sparse-sign operators store per-column nonzero rows and values; every
/// column has exactly zeta nonzeros of magnitude 1/sqrt(zeta), so
/// ||S e_j|| = 1. Gaussian operators store a dense s x m payload with
/// i.i.d. N(0, 1/s) entries. Construction is a pure function of
/// (kind, s, m, zeta, seed): same parameters, same bits.
class SketchOperator {
public:
    SketchKind kind() const { return kind_; }
    std::size_t sketch_rows() const { return s_; }
    std::size_t ambient_dim() const { return m_; }
    std::size_t zeta() const { return zeta_; }
    std::uint64_t seed() const { return seed_; }

    // sparse payload, column j occupies entries [j*zeta, (j+1)*zeta)
    const std::vector<std::uint32_t>& nonzero_rows() const { return rows_; }
    const Vec& nonzero_values() const { return vals_; }

    const DenseMatrix& dense_payload() const { return dense_; }

    /// S * M (costs O(zeta*m*k) for the sparse kind).
    DenseMatrix apply(const DenseMatrix& m) const;

    /// S * v
    Vec apply(const Vec& v) const;

    /// Wrap an explicit dense map (diagnostics and tests; bypasses the
    /// random fill).
    static SketchOperator explicit_dense(DenseMatrix payload, std::uint64_t seed = 0);

    friend SketchOperator make_sparse_sign(std::size_t s, std::size_t m, std::size_t zeta,
                                           std::uint64_t seed);
    friend SketchOperator make_gaussian(std::size_t s, std::size_t m, std::uint64_t seed);

private:
    SketchOperator() = default;

    SketchKind kind_ = SketchKind::Gaussian;
    std::size_t s_ = 0;
    std::size_t m_ = 0;
    std::size_t zeta_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::uint32_t> rows_;
    Vec vals_;
    DenseMatrix dense_;
};

/// Sparse-sign embedding: each column gets zeta distinct uniformly random
/// rows (Floyd's sampling) holding independent fair signs times 1/sqrt(zeta).
SketchOperator make_sparse_sign(std::size_t s, std::size_t m, std::size_t zeta,
                                std::uint64_t seed);

/// Dense Gaussian embedding with i.i.d. N(0, 1/s) entries.
SketchOperator make_gaussian(std::size_t s, std::size_t m, std::uint64_t seed);

/// Same construction parameters, different seed. Used to resample a
/// failed embedding.
SketchOperator resample(const SketchOperator& s, std::uint64_t new_seed);

/// Default sparse-sign nonzeros per column for an n-column target matrix:
/// ceil(2*log2(n)), at least 2, capped by the sketch dimension.
std::size_t default_zeta(std::size_t n, std::size_t s);

/// Explicit s x m matrix equal to the operator (tests, small diagnostics).
DenseMatrix densify(const SketchOperator& s);

/// Embedding distortion of S restricted to range(A): with Q an orthonormal
/// basis of range(A), returns max(sigma_max(S Q) - 1, 1 - sigma_min(S Q)).
double measure_distortion(const SketchOperator& s, const DenseMatrix& a);

} // namespace rlsq
