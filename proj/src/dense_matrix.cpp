#include "rlsq/dense_matrix.hpp"

#include <cmath>

namespace rlsq {

bool DenseMatrix::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

Vec matvec(const DenseMatrix& m, const Vec& v) {
    if (v.size() != m.cols()) throw ShapeError("matvec: vector length != cols");
    Vec y(m.rows(), 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const double* cj = m.col(j);
        const double vj = v[j];
        for (std::size_t i = 0; i < m.rows(); ++i) y[i] += cj[i] * vj;
    }
    return y;
}

Vec matvec_t(const DenseMatrix& m, const Vec& v) {
    if (v.size() != m.rows()) throw ShapeError("matvec_t: vector length != rows");
    Vec y(m.cols(), 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const double* cj = m.col(j);
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += cj[i] * v[i];
        y[j] = s;
    }
    return y;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        double* cj = c.col(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double* ak = a.col(k);
            const double bkj = b(k, j);
            for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw ShapeError("axpy: length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ShapeError("sub: length mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw ShapeError("add: length mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec scale(double alpha, const Vec& v) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = alpha * v[i];
    return r;
}

double frobenius_norm(const DenseMatrix& m) {
    double s = 0.0;
    for (double x : m.data()) s += x * x;
    return std::sqrt(s);
}

Vec column(const DenseMatrix& m, std::size_t j) {
    return Vec(m.col(j), m.col(j) + m.rows());
}

void set_column(DenseMatrix& m, std::size_t j, const Vec& v) {
    if (v.size() != m.rows()) throw ShapeError("set_column: length mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = v[i];
}

} // namespace rlsq
