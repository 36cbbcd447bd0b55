#include "rlsq/meta_solver.hpp"

#include <cmath>
#include <limits>

namespace rlsq {

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon();

// Small least squares min ||M a - b|| with collinear-column truncation:
// columns whose R diagonal falls under cols*u*||M||_F are dropped and get
// a zero coefficient. An all-zero M yields a = 0.
Vec lsq_truncated(const DenseMatrix& m, const Vec& b) {
    const std::size_t ncols = m.cols();
    std::vector<std::size_t> keep(ncols);
    for (std::size_t j = 0; j < ncols; ++j) keep[j] = j;

    const double tol = static_cast<double>(ncols) * kU * frobenius_norm(m);
    DenseMatrix work = m;
    for (;;) {
        if (keep.empty()) return Vec(ncols, 0.0);
        QRFactors f = householder_qr_unchecked(work);
        std::size_t bad = keep.size();
        for (std::size_t j = 0; j < keep.size(); ++j) {
            if (std::abs(f.r(j, j)) <= tol) { // <=: an exactly-zero matrix degrades to a = 0
                bad = j;
                break;
            }
        }
        if (bad == keep.size()) {
            const Vec a_kept = qr_least_squares(f, b);
            Vec a(ncols, 0.0);
            for (std::size_t j = 0; j < keep.size(); ++j) a[keep[j]] = a_kept[j];
            return a;
        }
        keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(bad));
        DenseMatrix next(m.rows(), keep.size());
        for (std::size_t j = 0; j < keep.size(); ++j)
            for (std::size_t i = 0; i < m.rows(); ++i) next(i, j) = m(i, keep[j]);
        work = std::move(next);
    }
}

} // namespace

Vec sketch_solve_meta(const Preconditioner& p, const Vec& r_a) { return normal_solve(p, r_a); }

Vec krylov_meta(const DenseMatrix& a, const Preconditioner& p, const Vec& r, int k) {
    if (k < 1) throw InvalidParameterError("krylov_meta: need k >= 1");
    const std::size_t n = a.cols();

    std::vector<Vec> ys;
    ys.reserve(static_cast<std::size_t>(k) + 1);
    ys.push_back(normal_solve(p, matvec_t(a, r)));
    for (int i = 1; i <= k; ++i) {
        const Vec resid = sub(r, matvec(a, ys.back()));
        Vec y = ys.back();
        axpy(1.0, normal_solve(p, matvec_t(a, resid)), y);
        ys.push_back(std::move(y));
    }

    DenseMatrix ay(a.rows(), ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) set_column(ay, j, matvec(a, ys[j]));
    const Vec coeff = lsq_truncated(ay, r);

    Vec out(n, 0.0);
    for (std::size_t j = 0; j < ys.size(); ++j) axpy(coeff[j], ys[j], out);
    return out;
}

Vec krylov_meta_normal(const DenseMatrix& a, const Preconditioner& p, const Vec& z, int k) {
    if (k < 1) throw InvalidParameterError("krylov_meta_normal: need k >= 1");
    const std::size_t n = a.cols();
    // the Krylov space lives in R^n, so more than n basis vectors add nothing
    k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), n - 1));

    // A^T A y computed as A^T (A y); the Gram matrix is never formed
    auto normal_product = [&](const Vec& y) { return matvec_t(a, matvec(a, y)); };

    std::vector<Vec> ys;
    ys.reserve(static_cast<std::size_t>(k) + 1);
    ys.push_back(normal_solve(p, z));
    for (int i = 1; i <= k; ++i) {
        const Vec resid = sub(z, normal_product(ys.back()));
        Vec y = ys.back();
        axpy(1.0, normal_solve(p, resid), y);
        ys.push_back(std::move(y));
    }

    DenseMatrix w(n, ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j)
        set_column(w, j, apply_rinv_t(p, normal_product(ys[j])));
    const Vec coeff = lsq_truncated(w, apply_rinv_t(p, z));

    Vec out(n, 0.0);
    for (std::size_t j = 0; j < ys.size(); ++j) axpy(coeff[j], ys[j], out);
    return out;
}

Vec MetaSolver::solve_residual(const Vec& r) const {
    if (cfg_.kind == MetaKind::SketchSolve) return sketch_solve_meta(*p_, matvec_t(*a_, r));
    return krylov_meta(*a_, *p_, r, cfg_.krylov_k);
}

Vec MetaSolver::solve_normal(const Vec& z) const {
    if (cfg_.kind == MetaKind::SketchSolve) return sketch_solve_meta(*p_, z);
    return krylov_meta_normal(*a_, *p_, z, cfg_.krylov_k);
}

} // namespace rlsq
