#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlsq/meta_solver.hpp"

namespace rlsq::bench {

/// Grid description for one experiment run. Validated in full before any
/// computation starts.
struct ExperimentSpec {
    std::string name; // convergence | sweep | residual_size | failrate | nscale
    std::size_t m = 2000;
    std::size_t n = 50;
    std::size_t s = 200;
    std::vector<double> kappas{1e4, 1e8, 1e12};
    std::vector<double> betas{1e-1, 1e-3};
    int seeds = 1;   // distinct problem seeds per grid point
    int repeats = 1; // replicates per seed (fresh sketch each)
    std::vector<std::string> solvers{"sirr", "sir", "srr", "qr_direct"};
    std::string out_path;
    MetaConfig meta{MetaKind::Krylov, 2};
    int srr_depth = 4;
    int max_outer = 50;
    int threads = 0; // 0 = logical cores
    std::uint64_t master_seed = 0;

    std::size_t sweep_levels = 17; // sweep
    double ratio_min = 1.1;        // failrate: s/n grid
    double ratio_max = 4.0;
    double ratio_step = 0.05;
    std::vector<std::size_t> n_list{100, 200, 400}; // nscale (m fixed at 10000)
};

/// Relative residual error above this level counts as a failed run
/// (failrate experiment and the `failed` CSV column).
inline constexpr double kFailResidualTol = 1e-5;

/// Per-iteration error traces on the convergence grid; qr_direct levels
/// appear as single constant rows.
void run_convergence(const ExperimentSpec& spec);

/// Difficulty sweep: levels log-equispaced in [1e0, 1e16] with
/// kappa = difficulty, beta = u * difficulty; final errors per solver.
void run_sweep(const ExperimentSpec& spec);

/// Final errors across the beta grid (SRR vs SIRR residual-size dichotomy).
void run_residual_size(const ExperimentSpec& spec);

/// Fail counts across the s/n grid.
void run_failrate(const ExperimentSpec& spec);

/// Error growth against n at s = 4n, m = 10000.
void run_nscale(const ExperimentSpec& spec);

struct SolveOptions {
    std::string out_path = "x.mtx";
    std::size_t sketch_dim = 0; // 0 = 4n
    MetaConfig meta{MetaKind::Krylov, 2};
    int srr_depth = 4;
    int max_outer = 50;
    std::uint64_t master_seed = 0;
};

/// Solve a MatrixMarket instance with SIRR, write x to opts.out_path and
/// print the Karlson-Walden estimate plus the iteration count.
/// Returns a process exit code: 0 ok, 1 solver failure, 2 usage/IO.
int run_solve(const std::string& a_path, const std::string& b_path, const SolveOptions& opts);

} // namespace rlsq::bench
