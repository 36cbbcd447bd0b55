#pragma once

#include "rlsq/dense_matrix.hpp"
#include "rlsq/svd.hpp"

namespace rlsq {

/// The three error metrics recorded per iterate.
struct ErrorTriple {
    double forward = 0.0;
    double residual = 0.0;
    double backward_kw = 0.0;
};

/// ||x* - x_hat|| / ||x*||. Throws MetricError when x* = 0.
double forward_error(const Vec& x_hat, const Vec& x_star);

/// ||A (x* - x_hat)|| / ||b - A x*||, the suboptimality of x_hat.
/// Throws MetricError when the optimal residual is zero.
double residual_error(const DenseMatrix& a, const Vec& b, const Vec& x_hat, const Vec& x_star);

/// Karlson-Walden backward-error estimate
///
///   BE_theta(x) = theta / sqrt(1 + theta^2 ||x||^2)
///                 * || (A^T A + mu I)^{-1/2} A^T (b - A x) ||,
///   mu = theta^2 ||b - A x||^2 / (1 + theta^2 ||x||^2),
///
/// evaluated through the SVD of A as
/// sqrt( sum_i sigma_i^2 (u_i^T r)^2 / (sigma_i^2 + mu) ). Estimates the
/// true backward error within a factor sqrt(2) from below.
double kw_backward_error(const DenseMatrix& a, const SVDFactors& svd_a, const Vec& b,
                         const Vec& x_hat, double theta = 1.0);

/// Perturbation-theoretic best-achievable error levels for a backward
/// stable solver (reference lines; no n^{3/2} factor):
///   forward  = u (kappa ||x*|| + kappa^2 ||r*|| / ||A||)
///   residual = u (kappa ||r*|| + ||A|| ||x*||)
struct WedinFloor {
    double forward_floor = 0.0;
    double residual_floor = 0.0;
};
WedinFloor wedin_floor(double norm_a, double kappa, double x_star_norm, double r_star_norm);

} // namespace rlsq
