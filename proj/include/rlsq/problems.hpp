#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rlsq/dense_matrix.hpp"

namespace rlsq {

/// A least-squares instance, optionally with the planted truth. When
/// planted: ||x*|| = 1, ||r*|| = beta, A^T r* = 0 (r* lies in the
/// orthogonal complement of range(A)) and b = A x* + r* exactly as
/// constructed. sigma_1(A) = 1 and sigma_n(A) = 1/kappa up to roundoff.
struct LSProblem {
    DenseMatrix a;
    Vec b;
    std::optional<Vec> x_star;
    std::optional<Vec> r_star;
    double kappa = 1.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
};

/// Synthetic instance A = U1 Sigma V^T with Haar-distributed orthogonal
/// factors and log-equispaced singular values between 1 and 1/kappa;
/// x* is a normalized Gaussian direction and the planted residual is a
/// normalized Gaussian direction projected off range(A), scaled to beta.
/// The full m x m Haar factor is never materialized.
LSProblem gen_synthetic(std::size_t m, std::size_t n, double kappa, double beta,
                        std::uint64_t seed);

/// Problems of increasing difficulty d log-equispaced in [1e0, 1e16]:
/// each level has kappa = d and beta = u * d.
std::vector<LSProblem> gen_difficulty_sweep(std::size_t m, std::size_t n, std::size_t levels,
                                            std::uint64_t master_seed = 0);

/// Serialize as a directory {A.mtx, b.mtx, meta.txt}; meta.txt holds
/// key=value lines (kappa, beta, seed). The planted truth is not stored.
void save_problem_dir(const LSProblem& p, const std::string& dir);
LSProblem load_problem_dir(const std::string& dir);

} // namespace rlsq
