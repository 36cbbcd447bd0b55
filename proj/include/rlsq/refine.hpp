#pragma once

#include <functional>
#include <limits>

#include "rlsq/dense_matrix.hpp"
#include "rlsq/meta_solver.hpp"
#include "rlsq/metrics.hpp"
#include "rlsq/precond.hpp"
#include "rlsq/sketch.hpp"

namespace rlsq {

/// Early-stop detector: stop once the correction norm stays below
/// update_tol * ||x|| for `patience` consecutive outer iterations.
/// update_tol = 0 disables early stopping (fixed iteration counts).
struct StopRule {
    int max_outer = 50;
    double update_tol = 4.0 * std::numeric_limits<double>::epsilon();
    int patience = 2;
};

enum class Scheme { Sir, Srr, Sirr };

/// Which refinement composition to run and with what budget.
struct RefinePlan {
    Scheme scheme = Scheme::Sirr;
    int n_outer = 50;  // outer iterations (Sir / Sirr)
    int srr_depth = 4; // recursion depth (Srr / Sirr)
    MetaConfig meta;
    StopRule stop;
};

RefinePlan sir_plan(int n_outer = 50, MetaConfig meta = {}, StopRule stop = {});
RefinePlan srr_plan(int depth = 4, MetaConfig meta = {}, StopRule stop = {});
RefinePlan sirr_plan(int n_outer = 50, int srr_depth = 4, MetaConfig meta = {},
                     StopRule stop = {});

struct IterRecord {
    double forward_err = std::numeric_limits<double>::quiet_NaN();
    double residual_err = std::numeric_limits<double>::quiet_NaN();
    double kw_backward_err = std::numeric_limits<double>::quiet_NaN();
    double update_norm = 0.0;
};

/// Per-solve outcome: final iterate, one record per outer iteration
/// (index 0 is the initial iterate), and exact meta-call accounting
/// (SIR: outers+1; SRR depth d: 2^d; SIRR: 1 + outers * 2^depth).
struct SolveReport {
    Vec x_hat;
    std::vector<IterRecord> iterates;
    bool converged = false;
    bool diverged = false;
    long meta_calls = 0;
    double wall_time_s = 0.0;
};

/// Optional per-iterate error evaluation, supplied by the harness when the
/// planted truth is known. Called with the current iterate.
using TraceFn = std::function<ErrorTriple(const Vec& x_hat)>;

/// Sketched iterative refinement: x_0 = meta(b), then
/// x_i = x_{i-1} + meta(b - A x_{i-1}). The residual is recomputed from
/// scratch every iteration. A 10x growth of the correction norm across
/// three consecutive iterations flags divergence and returns the partial
/// report.
SolveReport sir(const DenseMatrix& a, const Vec& b, const Preconditioner& p,
                const RefinePlan& plan, const TraceFn& trace = {});

/// Sketched recursive refinement on a normal-equation right-hand side:
/// level 0 is one meta call, level i is
/// f_i(z) = f_{i-1}(z) + f_{i-1}(z - A^T A f_{i-1}(z)), with A^T A z always
/// evaluated as A^T (A z). meta_calls, when given, is incremented once per
/// meta invocation (2^depth total).
Vec srr(const DenseMatrix& a, const Vec& r_a, const Preconditioner& p, const MetaSolver& meta,
        int depth, long* meta_calls = nullptr);

/// The composite solver: sketch-and-solve start x_0 = (SA)^+ (S b) from the
/// QR of SA, then outer refinement steps whose corrector is a fixed-depth
/// SRR. On a rank-deficient sketch the seed is re-derived up to 3 times
/// before giving up.
SolveReport sirr(const DenseMatrix& a, const Vec& b, const SketchOperator& s,
                 const RefinePlan& plan, const TraceFn& trace = {});

/// SRR alone: successive recursion depths applied to the original
/// r_A = A^T b (the residual-size comparison solver). Runs the full depth
/// schedule; iterate d of the report is the depth-d result.
SolveReport srr_standalone(const DenseMatrix& a, const Vec& b, const SketchOperator& s,
                           const RefinePlan& plan, const TraceFn& trace = {});

} // namespace rlsq
