#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rlsq/rng.hpp"
#include "rlsq/sketch.hpp"
#include "rlsq/svd.hpp"
#include "test_support.hpp"

using namespace rlsq;
using test::random_matrix;

namespace {
constexpr double kU = std::numeric_limits<double>::epsilon();
}

TEST_CASE("sparse sign saturated column") {
    SketchOperator s = make_sparse_sign(4, 1, 4, 123);
    DenseMatrix d = densify(s);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(d(i, 0)) == doctest::Approx(0.5));
}

TEST_CASE("sparse sign column structure at scale") {
    SketchOperator s = make_sparse_sign(200, 2000, 8, 1);
    const double mag = 1.0 / std::sqrt(8.0);
    for (std::size_t j = 0; j < 2000; ++j) {
        std::set<std::uint32_t> rows;
        for (std::size_t t = 0; t < 8; ++t) {
            rows.insert(s.nonzero_rows()[j * 8 + t]);
            CHECK(std::abs(s.nonzero_values()[j * 8 + t]) == doctest::Approx(mag));
        }
        CHECK(rows.size() == 8); // exactly 8 distinct rows
        CHECK(*rows.rbegin() < 200);
    }
}

TEST_CASE("sparse sign columns have unit norm") {
    SketchOperator s = make_sparse_sign(50, 300, 11, 9);
    for (std::size_t j : {std::size_t{0}, std::size_t{150}, std::size_t{299}}) {
        Vec ej(300, 0.0);
        ej[j] = 1.0;
        CHECK(norm2(s.apply(ej)) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("sparse sign parameter validation") {
    CHECK_THROWS_AS(make_sparse_sign(4, 10, 5, 0), InvalidParameterError); // zeta > s
    CHECK_THROWS_AS(make_sparse_sign(4, 10, 0, 0), InvalidParameterError); // zeta < 1
    CHECK_THROWS_AS(make_gaussian(20, 10, 0), InvalidParameterError);      // s > m
}

TEST_CASE("determinism: same parameters, same bits") {
    SketchOperator a = make_sparse_sign(30, 100, 4, 77);
    SketchOperator b = make_sparse_sign(30, 100, 4, 77);
    CHECK(a.nonzero_rows() == b.nonzero_rows());
    CHECK(a.nonzero_values() == b.nonzero_values());

    DenseMatrix m = random_matrix(100, 3, 5);
    CHECK(a.apply(m).data() == b.apply(m).data());

    SketchOperator c = make_sparse_sign(30, 100, 4, 78);
    CHECK(a.nonzero_rows() != c.nonzero_rows());
}

TEST_CASE("sparse apply equals densified product bitwise") {
    SketchOperator s = make_sparse_sign(6, 4, 2, 3);
    DenseMatrix m = random_matrix(4, 3, 8);
    DenseMatrix via_sparse = s.apply(m);
    DenseMatrix via_dense = matmul(densify(s), m);
    CHECK(via_sparse.data() == via_dense.data());
}

TEST_CASE("gaussian embedding basics") {
    SketchOperator s = make_gaussian(3, 3, 4);
    Vec zero(3, 0.0);
    CHECK(s.apply(zero) == zero);

    // identity pass-through: S * I = payload
    SketchOperator g = make_gaussian(5, 9, 10);
    DenseMatrix prod = g.apply(DenseMatrix::identity(9));
    CHECK(prod.data() == g.dense_payload().data());
}

TEST_CASE("gaussian entries have variance 1/s") {
    // 1e5 samples across one operator
    SketchOperator s = make_gaussian(50, 2000, 42);
    double sum = 0.0, sq = 0.0;
    const auto& d = s.dense_payload().data();
    for (double x : d) {
        sum += x;
        sq += x * x;
    }
    const double nsamples = static_cast<double>(d.size());
    const double mean = sum / nsamples;
    const double var = sq / nsamples - mean * mean;
    CHECK(var == doctest::Approx(1.0 / 50.0).epsilon(0.1));
}

TEST_CASE("gaussian norm preservation in expectation") {
    // E||Sx||^2 = ||x||^2: average over 2000 seeds, fixed unit x
    const std::size_t m = 100, s_dim = 50;
    Vec x = test::random_vector(m, 4242);
    const double xn = norm2(x);
    for (double& v : x) v /= xn;

    double acc = 0.0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        SketchOperator s = make_gaussian(s_dim, m, 1000 + static_cast<std::uint64_t>(t));
        const double nrm = norm2(s.apply(x));
        acc += nrm * nrm;
    }
    const double mean = acc / trials;
    CHECK(mean > 0.9);
    CHECK(mean < 1.1);
}

TEST_CASE("measure_distortion of an exact isometry is tiny") {
    DenseMatrix a = random_matrix(40, 6, 3);
    SketchOperator identity_map = SketchOperator::explicit_dense(DenseMatrix::identity(40));
    CHECK(measure_distortion(identity_map, a) <= 100.0 * 6.0 * kU);
}

TEST_CASE("distortion of gaussian embeddings at s = 4n") {
    const std::size_t m = 2000, n = 50, s_dim = 200;
    DenseMatrix a = random_matrix(m, n, 17);
    for (int t = 0; t < 20; ++t) {
        SketchOperator s = make_gaussian(s_dim, m, 500 + static_cast<std::uint64_t>(t));
        CHECK(measure_distortion(s, a) < 0.7);
    }
}

TEST_CASE("distortion of sparse sign embeddings at s = 4n") {
    const std::size_t m = 2000, n = 50, s_dim = 200;
    DenseMatrix a = random_matrix(m, n, 18);
    for (int t = 0; t < 20; ++t) {
        SketchOperator s = make_sparse_sign(s_dim, m, 8, 700 + static_cast<std::uint64_t>(t));
        CHECK(measure_distortion(s, a) < 0.8);
    }
}

TEST_CASE("median distortion is nonincreasing in s") {
    const std::size_t m = 800, n = 25;
    DenseMatrix a = random_matrix(m, n, 23);
    auto median_eta = [&](std::size_t s_dim) {
        std::vector<double> etas;
        for (int t = 0; t < 20; ++t) {
            SketchOperator s = make_sparse_sign(s_dim, m, default_zeta(n, s_dim),
                                                9000 + static_cast<std::uint64_t>(t));
            etas.push_back(measure_distortion(s, a));
        }
        std::sort(etas.begin(), etas.end());
        return 0.5 * (etas[9] + etas[10]);
    };
    const double e2 = median_eta(2 * n);
    const double e4 = median_eta(4 * n);
    const double e8 = median_eta(8 * n);
    CHECK(e4 <= e2);
    CHECK(e8 <= e4);
}

TEST_CASE("resample keeps parameters, changes seed") {
    SketchOperator s = make_sparse_sign(16, 64, 4, 1);
    SketchOperator r = resample(s, 2);
    CHECK(r.kind() == SketchKind::SparseSign);
    CHECK(r.sketch_rows() == 16);
    CHECK(r.ambient_dim() == 64);
    CHECK(r.zeta() == 4);
    CHECK(r.seed() == 2);
    CHECK(r.nonzero_rows() != s.nonzero_rows());
}
