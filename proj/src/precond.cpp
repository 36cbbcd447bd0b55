#include "rlsq/precond.hpp"

namespace rlsq {

PrecondBuild build_preconditioner_with_factors(const DenseMatrix& a, const SketchOperator& s) {
    if (s.ambient_dim() != a.rows())
        throw ShapeError("build_preconditioner: sketch ambient dim != rows(A)");
    if (s.sketch_rows() < a.cols())
        throw ShapeError("build_preconditioner: sketch dim below cols(A)");
    QRFactors f = householder_qr(s.apply(a)); // throws on rank-deficient S*A
    PrecondBuild out;
    out.p.r = f.r;
    out.p.source_seed = s.seed();
    out.sa_qr = std::move(f);
    return out;
}

Preconditioner build_preconditioner(const DenseMatrix& a, const SketchOperator& s) {
    return build_preconditioner_with_factors(a, s).p;
}

Vec apply_rinv(const Preconditioner& p, const Vec& v) { return tri_solve(p.r, v, false); }

Vec apply_rinv_t(const Preconditioner& p, const Vec& v) { return tri_solve(p.r, v, true); }

Vec normal_solve(const Preconditioner& p, const Vec& v) {
    return apply_rinv(p, apply_rinv_t(p, v));
}

} // namespace rlsq
