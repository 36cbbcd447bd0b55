#pragma once

#include "rlsq/dense_matrix.hpp"
#include "rlsq/precond.hpp"

namespace rlsq {

enum class MetaKind { SketchSolve, Krylov };

/// Configuration of the single-shot approximate solver used as the
/// refinement kernel. krylov_k is the Krylov step count (ignored by
/// SketchSolve).
struct MetaConfig {
    MetaKind kind = MetaKind::Krylov;
    int krylov_k = 2;
};

/// One sketch-and-solve step: (R^T R)^{-1} r_A.
Vec sketch_solve_meta(const Preconditioner& p, const Vec& r_a);

/// Krylov-enhanced sketch-and-solve on an m-space residual r: builds the
/// iterates y_0 = (R^T R)^{-1} A^T r,
/// y_{i+1} = y_i + (R^T R)^{-1} A^T (r - A y_i), and returns the
/// least-squares combination Y a with a = argmin ||A Y a - r||. Collinear
/// columns of A Y are truncated before the combine.
Vec krylov_meta(const DenseMatrix& a, const Preconditioner& p, const Vec& r, int k);

/// Normal-equation form of krylov_meta for an n-space right-hand side z
/// (approximates argmin_y ||(A^T A) y - z||): iterates use z - A^T A y_i
/// and the combine minimizes ||R^{-T}(z - A^T A Y a)||, the computable
/// proxy for the A-norm of the error.
Vec krylov_meta_normal(const DenseMatrix& a, const Preconditioner& p, const Vec& z, int k);

/// Meta-solver bound to a problem and preconditioner. Pure; safe to share
/// across threads.
class MetaSolver {
public:
    MetaSolver(const DenseMatrix& a, const Preconditioner& p, MetaConfig cfg)
        : a_(&a), p_(&p), cfg_(cfg) {}

    /// m-space residual -> correction (the SIR kernel).
    Vec solve_residual(const Vec& r) const;

    /// n-space normal-equation rhs -> correction (the SRR kernel).
    Vec solve_normal(const Vec& z) const;

    const MetaConfig& config() const { return cfg_; }

private:
    const DenseMatrix* a_;
    const Preconditioner* p_;
    MetaConfig cfg_;
};

} // namespace rlsq
