#include "rlsq/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rlsq {

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 60;

struct JacobiResult {
    DenseMatrix u; // n x n
    Vec sigma;
    DenseMatrix v; // n x n
};

// One-sided Jacobi on a square matrix: right rotations orthogonalize the
// columns of W; at convergence W = U diag(sigma) and the accumulated
// rotations form V, so the input equals U diag(sigma) V^T.
JacobiResult one_sided_jacobi(DenseMatrix w) {
    const std::size_t n = w.rows();
    DenseMatrix v = DenseMatrix::identity(n);
    const double tol = static_cast<double>(n) * kU;

    bool converged = (n <= 1);
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* wp = w.col(p);
                double* wq = w.col(q);
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    app += wp[i] * wp[i];
                    aqq += wq[i] * wq[i];
                    apq += wp[i] * wq[i];
                }
                if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
                converged = false;

                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;

                for (std::size_t i = 0; i < n; ++i) {
                    const double xp = wp[i], xq = wq[i];
                    wp[i] = cs * xp - sn * xq;
                    wq[i] = sn * xp + cs * xq;
                }
                double* vp = v.col(p);
                double* vq = v.col(q);
                for (std::size_t i = 0; i < n; ++i) {
                    const double xp = vp[i], xq = vq[i];
                    vp[i] = cs * xp - sn * xq;
                    vq[i] = sn * xp + cs * xq;
                }
            }
        }
    }
    if (!converged)
        throw SvdConvergenceError("thin_svd: Jacobi sweeps did not converge within cap");

    JacobiResult res;
    res.sigma.assign(n, 0.0);
    res.u = DenseMatrix(n, n);
    res.v = std::move(v);

    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w(i, j) * w(i, j);
        res.sigma[j] = std::sqrt(s);
    }

    // sort descending, stable in the original column order
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return res.sigma[a] > res.sigma[b]; });

    DenseMatrix w_sorted(n, n), v_sorted(n, n);
    Vec sig_sorted(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        sig_sorted[j] = res.sigma[src];
        for (std::size_t i = 0; i < n; ++i) {
            w_sorted(i, j) = w(i, src);
            v_sorted(i, j) = res.v(i, src);
        }
    }
    res.sigma = std::move(sig_sorted);
    res.v = std::move(v_sorted);

    // left vectors: normalized columns of W; exactly-zero columns get an
    // orthonormal completion so U keeps orthonormal columns
    for (std::size_t j = 0; j < n; ++j) {
        if (res.sigma[j] > 0.0) {
            const double inv = 1.0 / res.sigma[j];
            for (std::size_t i = 0; i < n; ++i) res.u(i, j) = w_sorted(i, j) * inv;
        } else {
            Vec cand(n, 0.0);
            for (std::size_t basis = 0; basis < n; ++basis) {
                std::fill(cand.begin(), cand.end(), 0.0);
                cand[basis] = 1.0;
                for (std::size_t k = 0; k < j; ++k) {
                    double d = 0.0;
                    for (std::size_t i = 0; i < n; ++i) d += res.u(i, k) * cand[i];
                    for (std::size_t i = 0; i < n; ++i) cand[i] -= d * res.u(i, k);
                }
                const double nrm = norm2(cand);
                if (nrm > 0.5) { // basis vector mostly outside current span
                    for (std::size_t i = 0; i < n; ++i) res.u(i, j) = cand[i] / nrm;
                    break;
                }
            }
        }
    }
    return res;
}

} // namespace

SVDFactors thin_svd(const DenseMatrix& m) {
    if (m.rows() < m.cols()) throw ShapeError("thin_svd: matrix must have rows >= cols");
    const std::size_t rows = m.rows(), cols = m.cols();
    if (cols == 0) return {DenseMatrix(rows, 0), {}, DenseMatrix(0, 0)};

    QRFactors f = householder_qr_unchecked(m);
    JacobiResult jr = one_sided_jacobi(f.r);

    // U = Q * [U_r; 0]
    SVDFactors out;
    out.sigma = std::move(jr.sigma);
    out.v = std::move(jr.v);
    out.u = DenseMatrix(rows, cols);
    Vec ext(rows);
    for (std::size_t j = 0; j < cols; ++j) {
        std::fill(ext.begin(), ext.end(), 0.0);
        for (std::size_t i = 0; i < cols; ++i) ext[i] = jr.u(i, j);
        apply_q(f, ext);
        set_column(out.u, j, ext);
    }
    return out;
}

double spectral_norm(const DenseMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    if (m.rows() >= m.cols()) return thin_svd(m).sigma[0];
    return thin_svd(transpose(m)).sigma[0];
}

} // namespace rlsq
