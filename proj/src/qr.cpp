#include "rlsq/qr.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rlsq {

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon();

// Householder reflector mapping x to +||x|| e1 (nonnegative R diagonal).
// Normalized so the leading entry of v is 1: H = I - tau v v^T with
// tau = (beta - alpha)/beta, beta = ||x||. The leading component
// alpha - beta is computed as -tail/(alpha + beta) when alpha > 0 to
// dodge cancellation.
struct Reflector {
    double tau;  // 0 means identity
    double beta; // new leading entry, >= 0
};

Reflector make_reflector(double alpha, double tail_sq, double* v_tail, std::size_t tail_len) {
    const double beta = std::sqrt(alpha * alpha + tail_sq);
    if (beta == 0.0) return {0.0, 0.0};
    if (tail_sq == 0.0 && alpha >= 0.0) return {0.0, alpha};
    double v1;
    if (alpha <= 0.0)
        v1 = alpha - beta;
    else
        v1 = -tail_sq / (alpha + beta);
    const double inv_v1 = 1.0 / v1;
    for (std::size_t i = 0; i < tail_len; ++i) v_tail[i] *= inv_v1;
    return {(beta - alpha) / beta, beta};
}

QRFactors factor(const DenseMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows < cols) throw ShapeError("householder_qr: matrix must have rows >= cols");

    DenseMatrix work = m;
    QRFactors f;
    f.rows = rows;
    f.cols = cols;
    f.reflectors = DenseMatrix(rows, cols);
    f.tau.assign(cols, 0.0);
    f.r = DenseMatrix(cols, cols);

    Vec v(rows);
    for (std::size_t k = 0; k < cols; ++k) {
        double* wk = work.col(k);
        double tail_sq = 0.0;
        for (std::size_t i = k + 1; i < rows; ++i) {
            v[i] = wk[i];
            tail_sq += wk[i] * wk[i];
        }
        const Reflector h = make_reflector(wk[k], tail_sq, v.data() + k + 1, rows - k - 1);
        f.tau[k] = h.tau;
        wk[k] = h.beta;
        for (std::size_t i = k + 1; i < rows; ++i) {
            f.reflectors(i, k) = v[i];
            wk[i] = 0.0;
        }
        if (h.tau != 0.0) {
            // apply H_k to the trailing columns
            for (std::size_t j = k + 1; j < cols; ++j) {
                double* wj = work.col(j);
                double d = wj[k];
                for (std::size_t i = k + 1; i < rows; ++i) d += v[i] * wj[i];
                d *= h.tau;
                wj[k] -= d;
                for (std::size_t i = k + 1; i < rows; ++i) wj[i] -= d * v[i];
            }
        }
    }
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i <= j; ++i) f.r(i, j) = work(i, j);
    return f;
}

} // namespace

QRFactors householder_qr_unchecked(const DenseMatrix& m) { return factor(m); }

QRFactors householder_qr(const DenseMatrix& m) {
    QRFactors f = factor(m);
    const double tol = static_cast<double>(m.cols()) * kU * frobenius_norm(m);
    for (std::size_t k = 0; k < f.cols; ++k) {
        if (std::abs(f.r(k, k)) < tol)
            throw RankDeficiencyError("householder_qr: column " + std::to_string(k) +
                                      " numerically rank deficient");
    }
    return f;
}

void apply_q_transpose(const QRFactors& f, Vec& v) {
    if (v.size() != f.rows) throw ShapeError("apply_q_transpose: length mismatch");
    for (std::size_t k = 0; k < f.cols; ++k) {
        const double tau = f.tau[k];
        if (tau == 0.0) continue;
        double d = v[k];
        for (std::size_t i = k + 1; i < f.rows; ++i) d += f.reflectors(i, k) * v[i];
        d *= tau;
        v[k] -= d;
        for (std::size_t i = k + 1; i < f.rows; ++i) v[i] -= d * f.reflectors(i, k);
    }
}

void apply_q(const QRFactors& f, Vec& v) {
    if (v.size() != f.rows) throw ShapeError("apply_q: length mismatch");
    for (std::size_t kk = f.cols; kk-- > 0;) {
        const double tau = f.tau[kk];
        if (tau == 0.0) continue;
        double d = v[kk];
        for (std::size_t i = kk + 1; i < f.rows; ++i) d += f.reflectors(i, kk) * v[i];
        d *= tau;
        v[kk] -= d;
        for (std::size_t i = kk + 1; i < f.rows; ++i) v[i] -= d * f.reflectors(i, kk);
    }
}

DenseMatrix thin_q(const QRFactors& f) {
    DenseMatrix q(f.rows, f.cols);
    Vec e(f.rows);
    for (std::size_t j = 0; j < f.cols; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        apply_q(f, e);
        set_column(q, j, e);
    }
    return q;
}

Vec tri_solve(const DenseMatrix& r, const Vec& y, bool transposed) {
    const std::size_t n = r.rows();
    if (r.cols() != n) throw ShapeError("tri_solve: matrix must be square");
    if (y.size() != n) throw ShapeError("tri_solve: rhs length mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (r(i, i) == 0.0)
            throw SingularTriangularError("tri_solve: zero diagonal at " + std::to_string(i));

    Vec z(n);
    if (!transposed) {
        // back substitution for upper-triangular r
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= r(ii, j) * z[j];
            z[ii] = s / r(ii, ii);
        }
    } else {
        // forward substitution for r^T
        for (std::size_t i = 0; i < n; ++i) {
            double s = y[i];
            for (std::size_t j = 0; j < i; ++j) s -= r(j, i) * z[j];
            z[i] = s / r(i, i);
        }
    }
    return z;
}

Vec qr_least_squares(const QRFactors& f, const Vec& b) {
    Vec qtb = b;
    apply_q_transpose(f, qtb);
    qtb.resize(f.cols);
    return tri_solve(f.r, qtb);
}

Vec qr_least_squares(const DenseMatrix& m, const Vec& b) {
    return qr_least_squares(householder_qr(m), b);
}

} // namespace rlsq
