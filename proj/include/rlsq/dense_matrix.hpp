#pragma once

#include <cstddef>
#include <vector>

#include "rlsq/errors.hpp"

namespace rlsq {

using Vec = std::vector<double>;

/// Dense real matrix in column-major order.
///
/// The universal carrier for A, b (as m x 1), Q, R and the Krylov basis.
/// Entries are IEEE doubles; all kernels use a fixed summation order so
/// results are reproducible run to run.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    double* col(std::size_t j) { return data_.data() + j * rows_; }
    const double* col(std::size_t j) const { return data_.data() + j * rows_; }

    Vec& data() { return data_; }
    const Vec& data() const { return data_; }

    /// True when every entry is neither NaN nor infinite.
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec data_;
};

// --- elementary kernels -------------------------------------------------

/// y = M v
Vec matvec(const DenseMatrix& m, const Vec& v);

/// y = M^T v
Vec matvec_t(const DenseMatrix& m, const Vec& v);

/// C = A B
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

double norm2(const Vec& v);
double dot(const Vec& a, const Vec& b);

/// y += alpha * x
void axpy(double alpha, const Vec& x, Vec& y);

/// a - b, elementwise
Vec sub(const Vec& a, const Vec& b);

/// a + b, elementwise
Vec add(const Vec& a, const Vec& b);

Vec scale(double alpha, const Vec& v);

double frobenius_norm(const DenseMatrix& m);

/// Matrix column j as a vector.
Vec column(const DenseMatrix& m, std::size_t j);

void set_column(DenseMatrix& m, std::size_t j, const Vec& v);

} // namespace rlsq
