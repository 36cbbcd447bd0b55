#include "rlsq/sketch.hpp"

#include <algorithm>
#include <cmath>

#include "rlsq/qr.hpp"
#include "rlsq/rng.hpp"
#include "rlsq/svd.hpp"

namespace rlsq {

SketchOperator SketchOperator::explicit_dense(DenseMatrix payload, std::uint64_t seed) {
    SketchOperator op;
    op.kind_ = SketchKind::Gaussian;
    op.s_ = payload.rows();
    op.m_ = payload.cols();
    op.seed_ = seed;
    op.dense_ = std::move(payload);
    return op;
}

SketchOperator make_sparse_sign(std::size_t s, std::size_t m, std::size_t zeta,
                                std::uint64_t seed) {
    // s > m is permitted: the saturated small cases are useful in tests
    if (zeta < 1 || zeta > s) throw InvalidParameterError("make_sparse_sign: need 1 <= zeta <= s");

    SketchOperator op;
    op.kind_ = SketchKind::SparseSign;
    op.s_ = s;
    op.m_ = m;
    op.zeta_ = zeta;
    op.seed_ = seed;
    op.rows_.resize(zeta * m);
    op.vals_.resize(zeta * m);

    const double mag = 1.0 / std::sqrt(static_cast<double>(zeta));
    CounterRng rng(seed);
    std::vector<std::uint32_t> picked;
    picked.reserve(zeta);
    for (std::size_t j = 0; j < m; ++j) {
        // Floyd's sampling: zeta distinct rows, uniform over {0..s-1}
        picked.clear();
        for (std::size_t t = s - zeta; t < s; ++t) {
            const auto r = static_cast<std::uint32_t>(rng.uniform_below(t + 1));
            if (std::find(picked.begin(), picked.end(), r) != picked.end())
                picked.push_back(static_cast<std::uint32_t>(t));
            else
                picked.push_back(r);
        }
        std::sort(picked.begin(), picked.end());
        for (std::size_t t = 0; t < zeta; ++t) {
            op.rows_[j * zeta + t] = picked[t];
            op.vals_[j * zeta + t] = (rng.next_u64() & 1u) ? mag : -mag;
        }
    }
    return op;
}

SketchOperator make_gaussian(std::size_t s, std::size_t m, std::uint64_t seed) {
    if (s > m) throw InvalidParameterError("make_gaussian: need s <= m");
    SketchOperator op;
    op.kind_ = SketchKind::Gaussian;
    op.s_ = s;
    op.m_ = m;
    op.seed_ = seed;
    op.dense_ = DenseMatrix(s, m);
    const double sd = 1.0 / std::sqrt(static_cast<double>(s));
    CounterRng rng(seed);
    for (double& x : op.dense_.data()) x = sd * rng.gaussian();
    return op;
}

SketchOperator resample(const SketchOperator& s, std::uint64_t new_seed) {
    if (s.kind() == SketchKind::SparseSign)
        return make_sparse_sign(s.sketch_rows(), s.ambient_dim(), s.zeta(), new_seed);
    return make_gaussian(s.sketch_rows(), s.ambient_dim(), new_seed);
}

std::size_t default_zeta(std::size_t n, std::size_t s) {
    const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
    auto z = static_cast<std::size_t>(std::ceil(2.0 * lg));
    z = std::max<std::size_t>(z, 2);
    return std::min(z, s);
}

DenseMatrix SketchOperator::apply(const DenseMatrix& m) const {
    if (m.rows() != m_) throw ShapeError("sketch apply: rows != ambient dim");
    if (kind_ == SketchKind::Gaussian) return matmul(dense_, m);

    DenseMatrix out(s_, m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const double* mc = m.col(c);
        double* oc = out.col(c);
        for (std::size_t j = 0; j < m_; ++j) {
            const double x = mc[j];
            const std::size_t base = j * zeta_;
            for (std::size_t t = 0; t < zeta_; ++t) oc[rows_[base + t]] += vals_[base + t] * x;
        }
    }
    return out;
}

Vec SketchOperator::apply(const Vec& v) const {
    if (v.size() != m_) throw ShapeError("sketch apply: length != ambient dim");
    if (kind_ == SketchKind::Gaussian) return matvec(dense_, v);

    Vec out(s_, 0.0);
    for (std::size_t j = 0; j < m_; ++j) {
        const double x = v[j];
        const std::size_t base = j * zeta_;
        for (std::size_t t = 0; t < zeta_; ++t) out[rows_[base + t]] += vals_[base + t] * x;
    }
    return out;
}

DenseMatrix densify(const SketchOperator& s) {
    if (s.kind() == SketchKind::Gaussian) return s.dense_payload();
    DenseMatrix d(s.sketch_rows(), s.ambient_dim());
    const std::size_t zeta = s.zeta();
    for (std::size_t j = 0; j < s.ambient_dim(); ++j)
        for (std::size_t t = 0; t < zeta; ++t)
            d(s.nonzero_rows()[j * zeta + t], j) = s.nonzero_values()[j * zeta + t];
    return d;
}

double measure_distortion(const SketchOperator& s, const DenseMatrix& a) {
    const DenseMatrix q = thin_q(householder_qr(a));
    const Vec sv = thin_svd(s.apply(q)).sigma;
    return std::max(sv.front() - 1.0, 1.0 - sv.back());
}

} // namespace rlsq
