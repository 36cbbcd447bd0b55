#include "rlsq/refine.hpp"

#include <chrono>
#include <cmath>

#include "rlsq/rng.hpp"

namespace rlsq {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void record_iterate(SolveReport& rep, const Vec& x, double update_norm, const TraceFn& trace) {
    IterRecord rec;
    rec.update_norm = update_norm;
    if (trace) {
        const ErrorTriple e = trace(x);
        rec.forward_err = e.forward;
        rec.residual_err = e.residual;
        rec.kw_backward_err = e.backward_kw;
    }
    rep.iterates.push_back(rec);
}

// Correction norms grew through three consecutive iterations, by 10x
// overall, and past every earlier value. The last guard keeps roundoff
// jitter at a stagnation floor from masquerading as divergence.
bool diverging(const std::vector<IterRecord>& its) {
    const std::size_t k = its.size();
    if (k < 4) return false;
    const double u0 = its[k - 4].update_norm;
    const double u1 = its[k - 3].update_norm;
    const double u2 = its[k - 2].update_norm;
    const double u3 = its[k - 1].update_norm;
    if (!(u3 > u2 && u2 > u1 && u1 > u0 && u3 > 10.0 * u0)) return false;
    for (std::size_t i = 0; i + 4 < k; ++i)
        if (its[i].update_norm >= u3) return false;
    return true;
}

struct OuterLoopState {
    int plateau = 0;
};

// Returns true when the loop should stop (sets converged/diverged flags).
// update_tol = 0 runs the loop to its full budget: no plateau stop and no
// divergence break (fixed-iteration replays must be exact).
bool update_stop_state(SolveReport& rep, OuterLoopState& st, const StopRule& stop,
                       double update_norm, double x_norm) {
    if (stop.update_tol <= 0.0) return false;
    if (update_norm <= stop.update_tol * x_norm)
        ++st.plateau;
    else
        st.plateau = 0;
    if (st.plateau >= stop.patience) {
        rep.converged = true;
        return true;
    }
    if (diverging(rep.iterates)) {
        rep.diverged = true;
        return true;
    }
    return false;
}

PrecondBuild build_with_resample(const DenseMatrix& a, const SketchOperator& s) {
    for (int attempt = 0;; ++attempt) {
        const SketchOperator trial =
            attempt == 0 ? s : resample(s, CounterRng::derive(s.seed(), attempt));
        try {
            return build_preconditioner_with_factors(a, trial);
        } catch (const RankDeficiencyError&) {
            if (attempt == 3)
                throw RankDeficiencyError(
                    "sirr: sketched matrix rank deficient after 3 resampled seeds");
        }
    }
}

} // namespace

RefinePlan sir_plan(int n_outer, MetaConfig meta, StopRule stop) {
    return {Scheme::Sir, n_outer, 0, meta, stop};
}

RefinePlan srr_plan(int depth, MetaConfig meta, StopRule stop) {
    return {Scheme::Srr, 0, depth, meta, stop};
}

RefinePlan sirr_plan(int n_outer, int srr_depth, MetaConfig meta, StopRule stop) {
    return {Scheme::Sirr, n_outer, srr_depth, meta, stop};
}

SolveReport sir(const DenseMatrix& a, const Vec& b, const Preconditioner& p,
                const RefinePlan& plan, const TraceFn& trace) {
    if (plan.scheme != Scheme::Sir) throw InvalidParameterError("sir: plan.scheme must be Sir");
    if (b.size() != a.rows()) throw ShapeError("sir: rhs length != rows(A)");
    const auto t0 = Clock::now();
    const MetaSolver meta(a, p, plan.meta);

    SolveReport rep;
    Vec x = meta.solve_residual(b);
    rep.meta_calls = 1;
    record_iterate(rep, x, norm2(x), trace);

    OuterLoopState st;
    const int cap = std::min(plan.n_outer, plan.stop.max_outer);
    for (int i = 1; i <= cap; ++i) {
        const Vec r = sub(b, matvec(a, x));
        const Vec c = meta.solve_residual(r);
        ++rep.meta_calls;
        axpy(1.0, c, x);
        const double un = norm2(c);
        record_iterate(rep, x, un, trace);
        if (update_stop_state(rep, st, plan.stop, un, norm2(x))) break;
    }
    rep.x_hat = std::move(x);
    rep.wall_time_s = seconds_since(t0);
    return rep;
}

Vec srr(const DenseMatrix& a, const Vec& r_a, const Preconditioner& p, const MetaSolver& meta,
        int depth, long* meta_calls) {
    if (depth < 0) throw InvalidParameterError("srr: depth must be >= 0");
    if (depth == 0) {
        if (meta_calls) ++*meta_calls;
        return meta.solve_normal(r_a);
    }
    const Vec u = srr(a, r_a, p, meta, depth - 1, meta_calls);
    const Vec z = sub(r_a, matvec_t(a, matvec(a, u)));
    const Vec v = srr(a, z, p, meta, depth - 1, meta_calls);
    return add(u, v);
}

SolveReport sirr(const DenseMatrix& a, const Vec& b, const SketchOperator& s,
                 const RefinePlan& plan, const TraceFn& trace) {
    if (plan.scheme != Scheme::Sirr) throw InvalidParameterError("sirr: plan.scheme must be Sirr");
    if (b.size() != a.rows()) throw ShapeError("sirr: rhs length != rows(A)");
    const auto t0 = Clock::now();

    const PrecondBuild built = build_with_resample(a, s);
    const MetaSolver meta(a, built.p, plan.meta);

    SolveReport rep;
    // x_0 = (SA)^+ (S b), a plain sketch-and-solve start
    Vec x = qr_least_squares(built.sa_qr, s.apply(b));
    rep.meta_calls = 1;
    record_iterate(rep, x, norm2(x), trace);

    OuterLoopState st;
    const int cap = std::min(plan.n_outer, plan.stop.max_outer);
    for (int i = 1; i <= cap; ++i) {
        const Vec r = sub(b, matvec(a, x));
        const Vec c = srr(a, matvec_t(a, r), built.p, meta, plan.srr_depth, &rep.meta_calls);
        axpy(1.0, c, x);
        const double un = norm2(c);
        record_iterate(rep, x, un, trace);
        if (update_stop_state(rep, st, plan.stop, un, norm2(x))) break;
    }
    rep.x_hat = std::move(x);
    rep.wall_time_s = seconds_since(t0);
    return rep;
}

SolveReport srr_standalone(const DenseMatrix& a, const Vec& b, const SketchOperator& s,
                           const RefinePlan& plan, const TraceFn& trace) {
    if (plan.scheme != Scheme::Srr)
        throw InvalidParameterError("srr_standalone: plan.scheme must be Srr");
    if (b.size() != a.rows()) throw ShapeError("srr_standalone: rhs length != rows(A)");
    const auto t0 = Clock::now();

    const PrecondBuild built = build_with_resample(a, s);
    const MetaSolver meta(a, built.p, plan.meta);
    const Vec r_a = matvec_t(a, b);

    SolveReport rep;
    Vec x = meta.solve_normal(r_a);
    rep.meta_calls = 1;
    record_iterate(rep, x, norm2(x), trace);

    // unfolded recursion: the depth-d result extends the depth-(d-1) one,
    // so the whole depth schedule costs exactly 2^depth meta calls
    double last_update = norm2(x);
    for (int d = 1; d <= plan.srr_depth; ++d) {
        const Vec z = sub(r_a, matvec_t(a, matvec(a, x)));
        const Vec c = srr(a, z, built.p, meta, d - 1, &rep.meta_calls);
        axpy(1.0, c, x);
        last_update = norm2(c);
        record_iterate(rep, x, last_update, trace);
    }
    rep.converged =
        plan.stop.update_tol > 0.0 && last_update <= plan.stop.update_tol * norm2(x);
    rep.x_hat = std::move(x);
    rep.wall_time_s = seconds_since(t0);
    return rep;
}

} // namespace rlsq
