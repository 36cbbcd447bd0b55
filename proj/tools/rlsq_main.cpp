// Command-line harness: `rlsq solve` for single instances, `rlsq bench
// <experiment>` for the CSV-emitting experiment grids. Flags mirror
// environment variables with the RLSQ_ prefix.

#include <CLI11.hpp>

#include <iostream>

#include "rlsq/bench.hpp"
#include "rlsq/errors.hpp"

namespace {

using rlsq::MetaKind;
using rlsq::bench::ExperimentSpec;

struct BenchArgs {
    ExperimentSpec spec;
    std::string meta_name = "krylov";
};

void add_common_bench_options(CLI::App* cmd, BenchArgs& args) {
    cmd->add_option("--m", args.spec.m, "rows of A")->envname("RLSQ_M");
    cmd->add_option("--n", args.spec.n, "cols of A")->envname("RLSQ_N");
    cmd->add_option("--s", args.spec.s, "sketch dimension")->envname("RLSQ_S");
    cmd->add_option("--kappa", args.spec.kappas, "condition numbers (comma separated)")
        ->delimiter(',')
        ->envname("RLSQ_KAPPA");
    cmd->add_option("--beta", args.spec.betas, "planted residual norms (comma separated)")
        ->delimiter(',')
        ->envname("RLSQ_BETA");
    cmd->add_option("--seeds", args.spec.seeds, "problem seeds per grid point")
        ->envname("RLSQ_SEEDS");
    cmd->add_option("--repeats", args.spec.repeats, "replicates per seed")
        ->envname("RLSQ_REPEATS");
    cmd->add_option("--solvers", args.spec.solvers,
                    "solvers to run (sirr, sir, srr, qr_direct)")
        ->delimiter(',')
        ->envname("RLSQ_SOLVERS");
    cmd->add_option("--meta", args.meta_name, "meta solver: sketch | krylov")
        ->check(CLI::IsMember({"sketch", "krylov"}))
        ->envname("RLSQ_META");
    cmd->add_option("--krylov-k", args.spec.meta.krylov_k, "Krylov step count")
        ->envname("RLSQ_KRYLOV_K");
    cmd->add_option("--srr-depth", args.spec.srr_depth, "SRR recursion depth")
        ->envname("RLSQ_SRR_DEPTH");
    cmd->add_option("--max-outer", args.spec.max_outer, "outer iteration cap")
        ->envname("RLSQ_MAX_OUTER");
    cmd->add_option("--out", args.spec.out_path, "output CSV path")
        ->required()
        ->envname("RLSQ_OUT");
    cmd->add_option("--threads", args.spec.threads, "worker threads (0 = logical cores)")
        ->envname("RLSQ_THREADS");
    cmd->add_option("--master-seed", args.spec.master_seed, "master seed for all RNG streams")
        ->envname("RLSQ_MASTER_SEED");
}

void finish_spec(BenchArgs& args, const std::string& name) {
    args.spec.name = name;
    args.spec.meta.kind = args.meta_name == "sketch" ? MetaKind::SketchSolve : MetaKind::Krylov;
}

int dispatch(const std::function<void()>& run) {
    try {
        run();
        return 0;
    } catch (const rlsq::InvalidParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rlsq::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rlsq::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rlsq::Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rlsq: randomized least-squares solvers (SIR / SRR / SIRR)"};
    app.require_subcommand(1);

    // --- solve ---
    auto* solve_cmd = app.add_subcommand("solve", "solve min ||Ax - b|| from MatrixMarket files");
    std::string a_path, b_path;
    rlsq::bench::SolveOptions sopts;
    std::string solve_meta = "krylov";
    solve_cmd->add_option("A", a_path, "matrix file (MatrixMarket array)")->required();
    solve_cmd->add_option("b", b_path, "right-hand side file")->required();
    solve_cmd->add_option("--out", sopts.out_path, "solution output path")->envname("RLSQ_OUT");
    solve_cmd->add_option("--s", sopts.sketch_dim, "sketch dimension (default 4n)")
        ->envname("RLSQ_S");
    solve_cmd->add_option("--meta", solve_meta, "meta solver: sketch | krylov")
        ->check(CLI::IsMember({"sketch", "krylov"}))
        ->envname("RLSQ_META");
    solve_cmd->add_option("--krylov-k", sopts.meta.krylov_k, "Krylov step count")
        ->envname("RLSQ_KRYLOV_K");
    solve_cmd->add_option("--srr-depth", sopts.srr_depth, "SRR recursion depth")
        ->envname("RLSQ_SRR_DEPTH");
    solve_cmd->add_option("--max-outer", sopts.max_outer, "outer iteration cap")
        ->envname("RLSQ_MAX_OUTER");
    solve_cmd->add_option("--master-seed", sopts.master_seed, "sketch seed source")
        ->envname("RLSQ_MASTER_SEED");

    // --- bench ---
    auto* bench_cmd = app.add_subcommand("bench", "experiment grids; results go to CSV");
    bench_cmd->require_subcommand(1);

    BenchArgs conv;
    auto* conv_cmd =
        bench_cmd->add_subcommand("convergence", "per-iteration error traces");
    add_common_bench_options(conv_cmd, conv);

    BenchArgs sweep;
    sweep.spec.m = 5000;
    sweep.spec.n = 200;
    sweep.spec.s = 600;
    sweep.spec.solvers = {"sirr", "qr_direct"};
    auto* sweep_cmd = bench_cmd->add_subcommand("sweep", "difficulty sweep, 1e0..1e16");
    add_common_bench_options(sweep_cmd, sweep);
    sweep_cmd->add_option("--levels", sweep.spec.sweep_levels, "difficulty levels")
        ->envname("RLSQ_LEVELS");

    BenchArgs rsize;
    rsize.spec.betas = {1e-1, 1e-3, 1e-5, 1e-7, 1e-9};
    rsize.spec.solvers = {"sirr", "srr", "qr_direct"};
    auto* rsize_cmd =
        bench_cmd->add_subcommand("residual-size", "SRR vs SIRR across residual norms");
    add_common_bench_options(rsize_cmd, rsize);

    BenchArgs fail;
    fail.spec.n = 100;
    fail.spec.seeds = 100;
    fail.spec.solvers = {"sirr"};
    auto* fail_cmd = bench_cmd->add_subcommand("failrate", "fail counts across the s/n grid");
    add_common_bench_options(fail_cmd, fail);
    fail_cmd->add_option("--ratio-min", fail.spec.ratio_min, "smallest s/n")
        ->envname("RLSQ_RATIO_MIN");
    fail_cmd->add_option("--ratio-max", fail.spec.ratio_max, "largest s/n")
        ->envname("RLSQ_RATIO_MAX");
    fail_cmd->add_option("--ratio-step", fail.spec.ratio_step, "s/n grid step")
        ->envname("RLSQ_RATIO_STEP");

    BenchArgs nscale;
    nscale.spec.m = 10000;
    nscale.spec.kappas = {1e8};
    nscale.spec.betas = {1e-3};
    nscale.spec.solvers = {"sirr", "qr_direct"};
    auto* nscale_cmd = bench_cmd->add_subcommand("nscale", "error growth against n (s = 4n)");
    add_common_bench_options(nscale_cmd, nscale);
    nscale_cmd->add_option("--n-list", nscale.spec.n_list, "n grid (comma separated)")
        ->delimiter(',')
        ->envname("RLSQ_N_LIST");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (solve_cmd->parsed()) {
        sopts.meta.kind = solve_meta == "sketch" ? MetaKind::SketchSolve : MetaKind::Krylov;
        return rlsq::bench::run_solve(a_path, b_path, sopts);
    }
    if (conv_cmd->parsed()) {
        finish_spec(conv, "convergence");
        return dispatch([&] { rlsq::bench::run_convergence(conv.spec); });
    }
    if (sweep_cmd->parsed()) {
        finish_spec(sweep, "sweep");
        return dispatch([&] { rlsq::bench::run_sweep(sweep.spec); });
    }
    if (rsize_cmd->parsed()) {
        finish_spec(rsize, "residual_size");
        return dispatch([&] { rlsq::bench::run_residual_size(rsize.spec); });
    }
    if (fail_cmd->parsed()) {
        finish_spec(fail, "failrate");
        return dispatch([&] { rlsq::bench::run_failrate(fail.spec); });
    }
    if (nscale_cmd->parsed()) {
        finish_spec(nscale, "nscale");
        return dispatch([&] { rlsq::bench::run_nscale(nscale.spec); });
    }
    return 2;
}
