#include "rlsq/metrics.hpp"

#include <cmath>
#include <limits>

namespace rlsq {

namespace {
constexpr double kU = std::numeric_limits<double>::epsilon();
}

double forward_error(const Vec& x_hat, const Vec& x_star) {
    if (x_hat.size() != x_star.size()) throw ShapeError("forward_error: length mismatch");
    const double denom = norm2(x_star);
    if (denom == 0.0) throw MetricError("forward_error: reference solution is zero");
    return norm2(sub(x_star, x_hat)) / denom;
}

double residual_error(const DenseMatrix& a, const Vec& b, const Vec& x_hat, const Vec& x_star) {
    const double denom = norm2(sub(b, matvec(a, x_star)));
    if (denom == 0.0) throw MetricError("residual_error: optimal residual is zero");
    return norm2(matvec(a, sub(x_star, x_hat))) / denom;
}

double kw_backward_error(const DenseMatrix& a, const SVDFactors& svd_a, const Vec& b,
                         const Vec& x_hat, double theta) {
    if (theta <= 0.0) throw InvalidParameterError("kw_backward_error: theta must be positive");
    const Vec r_hat = sub(b, matvec(a, x_hat));
    const double xsq = dot(x_hat, x_hat);
    const double denom = 1.0 + theta * theta * xsq;
    const double rsq = dot(r_hat, r_hat);
    const double mu = theta * theta * rsq / denom;

    const Vec utr = matvec_t(svd_a.u, r_hat);
    double acc = 0.0;
    for (std::size_t i = 0; i < svd_a.sigma.size(); ++i) {
        const double s2 = svd_a.sigma[i] * svd_a.sigma[i];
        acc += s2 * utr[i] * utr[i] / (s2 + mu);
    }
    return theta / std::sqrt(denom) * std::sqrt(acc);
}

WedinFloor wedin_floor(double norm_a, double kappa, double x_star_norm, double r_star_norm) {
    if (kappa < 1.0) throw InvalidParameterError("wedin_floor: kappa must be >= 1");
    WedinFloor f;
    f.forward_floor = kU * (kappa * x_star_norm + kappa * kappa * r_star_norm / norm_a);
    f.residual_floor = kU * (kappa * r_star_norm + norm_a * x_star_norm);
    return f;
}

} // namespace rlsq
