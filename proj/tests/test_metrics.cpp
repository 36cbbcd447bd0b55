#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "rlsq/metrics.hpp"
#include "rlsq/problems.hpp"
#include "rlsq/qr.hpp"
#include "test_support.hpp"

using namespace rlsq;

namespace {
constexpr double kU = std::numeric_limits<double>::epsilon();
}

TEST_CASE("forward_error basics") {
    Vec x{1.0, 2.0};
    CHECK(forward_error(x, x) == 0.0);
    CHECK(forward_error(scale(2.0, x), x) == doctest::Approx(1.0));
    CHECK(forward_error(Vec{1.0, 2.2}, Vec{1.0, 2.0}) ==
          doctest::Approx(0.2 / std::sqrt(5.0)));
    CHECK_THROWS_AS(forward_error(x, Vec{0.0, 0.0}), MetricError);
}

TEST_CASE("residual_error basics") {
    DenseMatrix eye = DenseMatrix::identity(2);
    Vec x_star{3.0, 4.0};
    Vec b{4.0, 4.0}; // b - x* = (1, 0)
    CHECK(residual_error(eye, b, x_star, x_star) == 0.0);
    Vec x_hat{3.0, 5.0}; // x* + (0, 1)
    CHECK(residual_error(eye, b, x_hat, x_star) == doctest::Approx(1.0));
    CHECK_THROWS_AS(residual_error(eye, x_star, x_star, x_star), MetricError);
}

TEST_CASE("residual_error equals its definitional cross-check") {
    LSProblem prob = gen_synthetic(100, 10, 1e3, 1e-2, 110);
    Vec x_hat = *prob.x_star;
    x_hat[3] += 1e-5;
    const double via_op = residual_error(prob.a, prob.b, x_hat, *prob.x_star);
    const double r_star_n = norm2(sub(prob.b, matvec(prob.a, *prob.x_star)));
    const double r_hat_gap =
        norm2(sub(sub(prob.b, matvec(prob.a, *prob.x_star)), sub(prob.b, matvec(prob.a, x_hat))));
    CHECK(std::abs(via_op - r_hat_gap / r_star_n) < 1e-14);
}

TEST_CASE("kw_backward_error vanishes on an exact solution") {
    // consistent system solved exactly
    DenseMatrix a = test::random_matrix(20, 4, 111);
    Vec w = test::random_vector(4, 112);
    Vec b = matvec(a, w);
    SVDFactors svd = thin_svd(a);
    CHECK(kw_backward_error(a, svd, b, qr_least_squares(a, b)) < 1e-14);
}

TEST_CASE("kw_backward_error on the rational planted instance") {
    // A = [[1,0],[0,1],[1,1]], b = (1,2,4); x* = (4/3, 7/3), A^T r* = 0
    DenseMatrix a(3, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    a(2, 0) = 1.0;
    a(2, 1) = 1.0;
    Vec b{1.0, 2.0, 4.0};
    Vec x_star{4.0 / 3.0, 7.0 / 3.0};
    SVDFactors svd = thin_svd(a);
    CHECK(kw_backward_error(a, svd, b, x_star) <= 10.0 * kU);
}

TEST_CASE("kw_backward_error of the QR baseline sits at the stable level") {
    LSProblem prob = gen_synthetic(2000, 50, 1e8, 1e-3, 113);
    SVDFactors svd = thin_svd(prob.a);
    const Vec x = qr_least_squares(prob.a, prob.b);
    const double be = kw_backward_error(prob.a, svd, prob.b, x);
    CHECK(be <= 100.0 * 50.0 * kU);
    // sandwich: the estimate sits within sqrt(2) of the true backward
    // error, so the stable reference level is also bounded below zero
    CHECK(be >= 0.0);
}

TEST_CASE("kw_backward_error padding invariance") {
    LSProblem prob = gen_synthetic(50, 6, 1e2, 1e-2, 114);
    Vec x_hat = *prob.x_star;
    x_hat[0] += 1e-7;
    SVDFactors svd = thin_svd(prob.a);
    const double base = kw_backward_error(prob.a, svd, prob.b, x_hat);

    // append 5 zero rows to (A, b)
    DenseMatrix a2(55, 6);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t i = 0; i < 50; ++i) a2(i, j) = prob.a(i, j);
    Vec b2 = prob.b;
    b2.resize(55, 0.0);
    SVDFactors svd2 = thin_svd(a2);
    const double padded = kw_backward_error(a2, svd2, b2, x_hat);
    CHECK(std::abs(padded - base) <= 10.0 * kU + 1e-12 * base);
}

TEST_CASE("kw_backward_error is monotone in the residual scale") {
    LSProblem prob = gen_synthetic(60, 5, 1e2, 1e-1, 115);
    SVDFactors svd = thin_svd(prob.a);
    Vec x_hat = *prob.x_star;
    x_hat[1] += 1e-4;

    // double the residual by moving b away along r_hat, holding x_hat
    const Vec r_hat = sub(prob.b, matvec(prob.a, x_hat));
    Vec b2 = add(prob.b, r_hat);
    const double be1 = kw_backward_error(prob.a, svd, prob.b, x_hat);
    const double be2 = kw_backward_error(prob.a, svd, b2, x_hat);
    CHECK(be2 >= be1 - 10.0 * kU);
}

TEST_CASE("wedin_floor plug-in arithmetic") {
    WedinFloor f1 = wedin_floor(1.0, 1.0, 1.0, 0.0);
    CHECK(f1.forward_floor == doctest::Approx(kU));

    WedinFloor f2 = wedin_floor(1.0, 1e8, 1.0, 1e-3);
    CHECK(f2.forward_floor == doctest::Approx(kU * (1e8 + 1e13)));

    WedinFloor f3 = wedin_floor(1.0, 1e4, 1.0, 1e-1);
    CHECK(f3.residual_floor == doctest::Approx(kU * (1e4 * 1e-1 + 1.0)));

    CHECK_THROWS_AS(wedin_floor(1.0, 0.5, 1.0, 0.0), InvalidParameterError);
}
