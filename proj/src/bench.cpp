#include "rlsq/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "rlsq/matrix_market.hpp"
#include "rlsq/metrics.hpp"
#include "rlsq/parallel.hpp"
#include "rlsq/problems.hpp"
#include "rlsq/refine.hpp"
#include "rlsq/rng.hpp"

namespace rlsq::bench {

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon();
constexpr const char* kHeader =
    "experiment,solver,m,n,s,kappa,beta,seed,iteration,forward_err,residual_err,"
    "backward_kw,meta_calls,wall_time_s,converged,failed";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

struct Row {
    std::string experiment;
    std::string solver;
    std::size_t m = 0, n = 0, s = 0;
    double kappa = 1.0, beta = 0.0;
    long seed = 0;
    long iteration = 0;
    double forward_err = std::numeric_limits<double>::quiet_NaN();
    double residual_err = std::numeric_limits<double>::quiet_NaN();
    double backward_kw = std::numeric_limits<double>::quiet_NaN();
    long meta_calls = 0;
    double wall_time_s = 0.0;
    bool converged = false;
    bool failed = false;

    // identifies the (solver, instance) pair; iteration deliberately
    // excluded so resumption works with data-dependent trace lengths
    std::string prefix_key() const {
        std::ostringstream os;
        os << solver << '|' << m << '|' << n << '|' << s << '|' << fmt(kappa) << '|' << fmt(beta)
           << '|' << seed;
        return os.str();
    }

    std::string full_key() const { return prefix_key() + '|' + std::to_string(iteration); }

    std::string to_csv() const {
        std::ostringstream os;
        os << experiment << ',' << solver << ',' << m << ',' << n << ',' << s << ',' << fmt(kappa)
           << ',' << fmt(beta) << ',' << seed << ',' << iteration << ',' << fmt(forward_err) << ','
           << fmt(residual_err) << ',' << fmt(backward_kw) << ',' << meta_calls << ','
           << fmt(wall_time_s) << ',' << (converged ? 1 : 0) << ',' << (failed ? 1 : 0);
        return os.str();
    }
};

// Append-only CSV writer with per-instance flush. Existing rows are read
// back on open so an interrupted run resumes by skipping completed work.
class CsvSink {
public:
    CsvSink(const std::string& path, const std::vector<std::string>& metadata) {
        bool fresh = true;
        {
            std::ifstream in(path);
            if (in) {
                std::string line;
                while (std::getline(in, line)) {
                    fresh = false;
                    if (line.empty() || line[0] == '#' || line.rfind("experiment,", 0) == 0)
                        continue;
                    ingest(line);
                }
            }
        }
        out_.open(path, std::ios::app);
        if (!out_) throw IoError("cannot open for writing: " + path);
        if (fresh) {
            for (const auto& m : metadata) out_ << "# " << m << "\n";
            out_ << kHeader << "\n";
            out_.flush();
        }
    }

    bool has_instance(const std::string& prefix_key) const {
        return prefixes_.count(prefix_key) > 0;
    }

    /// Copy of the resume state taken before the parallel region; workers
    /// read the snapshot while the commit thread mutates the live sets.
    std::set<std::string> snapshot_prefixes() const { return prefixes_; }

    void write_group(const std::vector<Row>& rows) {
        std::string block;
        for (const Row& r : rows) {
            if (full_.count(r.full_key())) continue;
            block += r.to_csv();
            block += '\n';
            full_.insert(r.full_key());
            prefixes_.insert(r.prefix_key());
        }
        if (!block.empty()) {
            out_ << block;
            out_.flush();
        }
    }

private:
    void ingest(const std::string& line) {
        // columns: experiment,solver,m,n,s,kappa,beta,seed,iteration,...
        std::vector<std::string> cols;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cols.push_back(cur);
                cur.clear();
            } else
                cur += c;
        }
        cols.push_back(cur);
        if (cols.size() < 9) return;
        std::string prefix = cols[1];
        for (int i = 2; i <= 7; ++i) prefix += '|' + cols[static_cast<std::size_t>(i)];
        prefixes_.insert(prefix);
        full_.insert(prefix + '|' + cols[8]);
    }

    std::ofstream out_;
    std::set<std::string> prefixes_;
    std::set<std::string> full_;
};

struct ProblemBundle {
    LSProblem prob;
    SVDFactors svd;
};

ProblemBundle make_bundle(std::size_t m, std::size_t n, double kappa, double beta,
                          std::uint64_t pseed) {
    ProblemBundle b;
    b.prob = gen_synthetic(m, n, kappa, beta, pseed);
    b.svd = thin_svd(b.prob.a);
    return b;
}

TraceFn make_tracer(const ProblemBundle& b) {
    return [&b](const Vec& x) {
        ErrorTriple e;
        e.forward = forward_error(x, *b.prob.x_star);
        try {
            e.residual = residual_error(b.prob.a, b.prob.b, x, *b.prob.x_star);
        } catch (const MetricError&) {
            e.residual = std::numeric_limits<double>::quiet_NaN(); // consistent system
        }
        e.backward_kw = kw_backward_error(b.prob.a, b.svd, b.prob.b, x);
        return e;
    };
}

// problem seed shared across sketch dimensions and replicates of one
// instance; sketch seed distinct per (s, replicate)
std::uint64_t problem_seed(std::uint64_t master, std::size_t m, std::size_t n, double kappa,
                           double beta, long seed_idx) {
    std::ostringstream os;
    os << "problem|" << m << '|' << n << '|' << fmt(kappa) << '|' << fmt(beta) << '|' << seed_idx;
    return CounterRng::derive(master, fnv1a(os.str()));
}

std::uint64_t sketch_seed(std::uint64_t master, std::size_t m, std::size_t n, std::size_t s,
                          double kappa, double beta, long seed_col) {
    std::ostringstream os;
    os << "sketch|" << m << '|' << n << '|' << s << '|' << fmt(kappa) << '|' << fmt(beta) << '|'
       << seed_col;
    return CounterRng::derive(master, fnv1a(os.str()));
}

Row base_row(const ExperimentSpec& spec, const std::string& solver, std::size_t s, double kappa,
             double beta, long seed_col) {
    Row r;
    r.experiment = spec.name;
    r.solver = solver;
    r.m = spec.m;
    r.n = spec.n;
    r.s = s;
    r.kappa = kappa;
    r.beta = beta;
    r.seed = seed_col;
    return r;
}

bool residual_failed(double residual_err) {
    return std::isfinite(residual_err) && residual_err > kFailResidualTol;
}

// rows for one solver on one instance; never throws
std::vector<Row> run_solver_rows(const ExperimentSpec& spec, const std::string& solver,
                                 const ProblemBundle& bundle, std::size_t s_dim, long seed_col,
                                 bool per_iteration) {
    Row proto = base_row(spec, solver, s_dim, bundle.prob.kappa, bundle.prob.beta, seed_col);
    proto.n = bundle.prob.a.cols();
    proto.m = bundle.prob.a.rows();
    const TraceFn trace = make_tracer(bundle);

    try {
        if (solver == "qr_direct") {
            const auto t0 = std::chrono::steady_clock::now();
            const Vec x = qr_least_squares(bundle.prob.a, bundle.prob.b);
            proto.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                    .count();
            const ErrorTriple e = trace(x);
            proto.forward_err = e.forward;
            proto.residual_err = e.residual;
            proto.backward_kw = e.backward_kw;
            proto.converged = true;
            proto.failed = residual_failed(e.residual);
            return {proto};
        }

        const std::uint64_t sseed = sketch_seed(spec.master_seed, proto.m, proto.n, s_dim,
                                                bundle.prob.kappa, bundle.prob.beta, seed_col);
        const SketchOperator s_op =
            make_sparse_sign(s_dim, proto.m, default_zeta(proto.n, s_dim), sseed);

        SolveReport rep;
        if (solver == "sirr") {
            rep = sirr(bundle.prob.a, bundle.prob.b, s_op,
                       sirr_plan(spec.max_outer, spec.srr_depth, spec.meta,
                                 StopRule{spec.max_outer}),
                       trace);
        } else if (solver == "sir") {
            const Preconditioner p = build_preconditioner(bundle.prob.a, s_op);
            rep = sir(bundle.prob.a, bundle.prob.b, p,
                      sir_plan(spec.max_outer, spec.meta, StopRule{spec.max_outer}), trace);
        } else if (solver == "srr") {
            rep = srr_standalone(bundle.prob.a, bundle.prob.b, s_op,
                                 srr_plan(spec.srr_depth, spec.meta, StopRule{spec.max_outer}),
                                 trace);
        } else {
            throw InvalidParameterError("unknown solver: " + solver);
        }

        std::vector<Row> rows;
        const std::size_t first = per_iteration ? 0 : rep.iterates.size() - 1;
        for (std::size_t it = first; it < rep.iterates.size(); ++it) {
            Row r = proto;
            r.iteration = static_cast<long>(it);
            r.forward_err = rep.iterates[it].forward_err;
            r.residual_err = rep.iterates[it].residual_err;
            r.backward_kw = rep.iterates[it].kw_backward_err;
            r.meta_calls = rep.meta_calls;
            r.wall_time_s = rep.wall_time_s;
            r.converged = rep.converged;
            r.failed = rep.diverged || residual_failed(rep.iterates.back().residual_err);
            rows.push_back(std::move(r));
        }
        return rows;
    } catch (const Error& err) {
        proto.failed = true;
        proto.converged = false;
        (void)err;
        return {proto};
    }
}

void validate_common(const ExperimentSpec& spec) {
    if (spec.out_path.empty()) throw InvalidParameterError("spec: output path required");
    if (spec.seeds < 1 || spec.repeats < 1)
        throw InvalidParameterError("spec: seeds and repeats must be >= 1");
    if (spec.max_outer < 1) throw InvalidParameterError("spec: max_outer must be >= 1");
    if (spec.srr_depth < 0) throw InvalidParameterError("spec: srr_depth must be >= 0");
    if (spec.solvers.empty()) throw InvalidParameterError("spec: solver list empty");
    for (const auto& s : spec.solvers)
        if (s != "sirr" && s != "sir" && s != "srr" && s != "qr_direct")
            throw InvalidParameterError("spec: unknown solver '" + s + "'");
    for (double k : spec.kappas)
        if (k < 1.0) throw InvalidParameterError("spec: kappa must be >= 1");
    for (double b : spec.betas)
        if (b < 0.0) throw InvalidParameterError("spec: beta must be >= 0");
}

void validate_shape(std::size_t m, std::size_t n, std::size_t s) {
    if (n < 1 || m <= n) throw InvalidParameterError("spec: need m > n >= 1");
    if (s < n || s > m) throw InvalidParameterError("spec: need n <= s <= m");
}

std::vector<std::string> metadata_lines(const ExperimentSpec& spec) {
    std::vector<std::string> md;
    md.push_back("schema=1");
    md.push_back("experiment=" + spec.name);
    md.push_back("master_seed=" + std::to_string(spec.master_seed));
    std::ostringstream cfg;
    cfg << "meta=" << (spec.meta.kind == MetaKind::Krylov ? "krylov" : "sketch")
        << " krylov_k=" << spec.meta.krylov_k << " srr_depth=" << spec.srr_depth
        << " max_outer=" << spec.max_outer;
    md.push_back(cfg.str());
    md.push_back("sketch=sparse_sign zeta=ceil(2*log2(n)) rng=splitmix64-counter");
    md.push_back("note=desk-scale grids; nscale n capped at 400");
    return md;
}

int effective_threads(const ExperimentSpec& spec) {
    return spec.threads > 0 ? spec.threads : default_thread_count();
}

// shared driver for the grid experiments: one task per (kappa, beta, seed)
// instance computing all requested solver rows
void run_grid(const ExperimentSpec& spec, bool per_iteration) {
    validate_common(spec);
    validate_shape(spec.m, spec.n, spec.s);

    struct Key {
        double kappa, beta;
        long seed_col;
        long seed_idx;
    };
    std::vector<Key> grid;
    for (double kappa : spec.kappas)
        for (double beta : spec.betas)
            for (int sd = 0; sd < spec.seeds; ++sd)
                for (int rp = 0; rp < spec.repeats; ++rp)
                    grid.push_back({kappa, beta, static_cast<long>(sd) * spec.repeats + rp, sd});

    CsvSink sink(spec.out_path, metadata_lines(spec));
    const std::set<std::string> preexisting = sink.snapshot_prefixes();

    auto instance_done = [&](const Key& k) {
        for (const auto& solver : spec.solvers) {
            Row probe = base_row(spec, solver, spec.s, k.kappa, k.beta, k.seed_col);
            if (!preexisting.count(probe.prefix_key())) return false;
        }
        return true;
    };

    auto task = [&](std::size_t i) -> std::vector<Row> {
        const Key& k = grid[i];
        if (instance_done(k)) return {};
        const ProblemBundle bundle =
            make_bundle(spec.m, spec.n, k.kappa, k.beta,
                        problem_seed(spec.master_seed, spec.m, spec.n, k.kappa, k.beta, k.seed_idx));
        std::vector<Row> rows;
        for (const auto& solver : spec.solvers) {
            auto sr = run_solver_rows(spec, solver, bundle, spec.s, k.seed_col, per_iteration);
            rows.insert(rows.end(), sr.begin(), sr.end());
        }
        return rows;
    };
    ordered_parallel_run(grid.size(), effective_threads(spec), task,
                         [&](std::size_t, std::vector<Row> rows) { sink.write_group(rows); });
}

} // namespace

void run_convergence(const ExperimentSpec& spec) { run_grid(spec, /*per_iteration=*/true); }

void run_residual_size(const ExperimentSpec& spec) { run_grid(spec, /*per_iteration=*/false); }

void run_sweep(const ExperimentSpec& spec) {
    validate_common(spec);
    validate_shape(spec.m, spec.n, spec.s);
    if (spec.sweep_levels < 2) throw InvalidParameterError("sweep: need levels >= 2");

    struct Key {
        double difficulty;
        long seed_col;
        long seed_idx;
    };
    std::vector<Key> grid;
    for (std::size_t lvl = 0; lvl < spec.sweep_levels; ++lvl) {
        const double d =
            std::pow(10.0, 16.0 * static_cast<double>(lvl) /
                               static_cast<double>(spec.sweep_levels - 1));
        for (int sd = 0; sd < spec.seeds; ++sd)
            for (int rp = 0; rp < spec.repeats; ++rp)
                grid.push_back({d, static_cast<long>(sd) * spec.repeats + rp, sd});
    }

    CsvSink sink(spec.out_path, metadata_lines(spec));
    const std::set<std::string> preexisting = sink.snapshot_prefixes();
    auto task = [&](std::size_t i) -> std::vector<Row> {
        const Key& k = grid[i];
        const double kappa = k.difficulty, beta = kU * k.difficulty;
        bool done = true;
        for (const auto& solver : spec.solvers) {
            Row probe = base_row(spec, solver, spec.s, kappa, beta, k.seed_col);
            if (!preexisting.count(probe.prefix_key())) done = false;
        }
        if (done) return {};
        const ProblemBundle bundle =
            make_bundle(spec.m, spec.n, kappa, beta,
                        problem_seed(spec.master_seed, spec.m, spec.n, kappa, beta, k.seed_idx));
        std::vector<Row> rows;
        for (const auto& solver : spec.solvers) {
            auto sr = run_solver_rows(spec, solver, bundle, spec.s, k.seed_col, false);
            rows.insert(rows.end(), sr.begin(), sr.end());
        }
        return rows;
    };
    ordered_parallel_run(grid.size(), effective_threads(spec), task,
                         [&](std::size_t, std::vector<Row> rows) { sink.write_group(rows); });
}

void run_failrate(const ExperimentSpec& spec) {
    validate_common(spec);
    if (spec.ratio_min < 1.0 || spec.ratio_max < spec.ratio_min || spec.ratio_step <= 0.0)
        throw InvalidParameterError("failrate: bad s/n ratio grid");

    std::vector<std::size_t> s_grid;
    for (double r = spec.ratio_min; r <= spec.ratio_max + 1e-9; r += spec.ratio_step) {
        const auto s = static_cast<std::size_t>(
            std::ceil(r * static_cast<double>(spec.n)));
        if (s_grid.empty() || s_grid.back() != s) s_grid.push_back(s);
    }
    for (std::size_t s : s_grid) validate_shape(spec.m, spec.n, s);

    struct Key {
        double kappa, beta;
        long seed_col;
        long seed_idx;
    };
    std::vector<Key> grid;
    for (double kappa : spec.kappas)
        for (double beta : spec.betas)
            for (int sd = 0; sd < spec.seeds; ++sd)
                for (int rp = 0; rp < spec.repeats; ++rp)
                    grid.push_back({kappa, beta, static_cast<long>(sd) * spec.repeats + rp, sd});

    CsvSink sink(spec.out_path, metadata_lines(spec));
    const std::set<std::string> preexisting = sink.snapshot_prefixes();
    // one task per problem instance; the problem and its SVD are shared
    // across the whole s grid
    auto task = [&](std::size_t i) -> std::vector<Row> {
        const Key& k = grid[i];
        bool done = true;
        for (const auto& solver : spec.solvers)
            for (std::size_t s : s_grid) {
                Row probe = base_row(spec, solver, s, k.kappa, k.beta, k.seed_col);
                if (!preexisting.count(probe.prefix_key())) done = false;
            }
        if (done) return {};
        const ProblemBundle bundle =
            make_bundle(spec.m, spec.n, k.kappa, k.beta,
                        problem_seed(spec.master_seed, spec.m, spec.n, k.kappa, k.beta, k.seed_idx));
        std::vector<Row> rows;
        for (std::size_t s : s_grid)
            for (const auto& solver : spec.solvers) {
                auto sr = run_solver_rows(spec, solver, bundle, s, k.seed_col, false);
                rows.insert(rows.end(), sr.begin(), sr.end());
            }
        return rows;
    };
    ordered_parallel_run(grid.size(), effective_threads(spec), task,
                         [&](std::size_t, std::vector<Row> rows) { sink.write_group(rows); });
}

void run_nscale(const ExperimentSpec& spec) {
    validate_common(spec);
    if (spec.n_list.empty()) throw InvalidParameterError("nscale: empty n list");

    struct Key {
        std::size_t n, s;
        long seed_col;
        long seed_idx;
    };
    std::vector<Key> grid;
    for (std::size_t n : spec.n_list) {
        const std::size_t s = 4 * n;
        validate_shape(spec.m, n, s);
        for (int sd = 0; sd < spec.seeds; ++sd)
            for (int rp = 0; rp < spec.repeats; ++rp)
                grid.push_back({n, s, static_cast<long>(sd) * spec.repeats + rp, sd});
    }
    const double kappa = spec.kappas.empty() ? 1e8 : spec.kappas.front();
    const double beta = spec.betas.empty() ? 1e-3 : spec.betas.front();

    CsvSink sink(spec.out_path, metadata_lines(spec));
    const std::set<std::string> preexisting = sink.snapshot_prefixes();
    auto task = [&](std::size_t i) -> std::vector<Row> {
        const Key& k = grid[i];
        ExperimentSpec local = spec;
        local.n = k.n;
        local.s = k.s;
        bool done = true;
        for (const auto& solver : spec.solvers) {
            Row probe = base_row(local, solver, k.s, kappa, beta, k.seed_col);
            if (!preexisting.count(probe.prefix_key())) done = false;
        }
        if (done) return {};
        const ProblemBundle bundle =
            make_bundle(spec.m, k.n, kappa, beta,
                        problem_seed(spec.master_seed, spec.m, k.n, kappa, beta, k.seed_idx));
        std::vector<Row> rows;
        for (const auto& solver : spec.solvers) {
            auto sr = run_solver_rows(local, solver, bundle, k.s, k.seed_col, false);
            rows.insert(rows.end(), sr.begin(), sr.end());
        }
        return rows;
    };
    ordered_parallel_run(grid.size(), effective_threads(spec), task,
                         [&](std::size_t, std::vector<Row> rows) { sink.write_group(rows); });
}

int run_solve(const std::string& a_path, const std::string& b_path, const SolveOptions& opts) {
    DenseMatrix a;
    Vec b;
    try {
        a = load_matrix_market(a_path);
        b = load_vector_market(b_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (b.size() != a.rows() || a.rows() < a.cols() || a.cols() == 0) {
        std::cerr << "error: incompatible shapes: A is " << a.rows() << "x" << a.cols()
                  << ", b has length " << b.size() << "\n";
        return 2;
    }

    try {
        std::size_t s = opts.sketch_dim ? opts.sketch_dim : 4 * a.cols();
        s = std::min(s, a.rows());
        s = std::max(s, a.cols());
        const SketchOperator s_op = make_sparse_sign(
            s, a.rows(), default_zeta(a.cols(), s), CounterRng::derive(opts.master_seed, 1));
        const SolveReport rep =
            sirr(a, b, s_op,
                 sirr_plan(opts.max_outer, opts.srr_depth, opts.meta, StopRule{opts.max_outer}));

        const SVDFactors svd = thin_svd(a);
        const double kw = kw_backward_error(a, svd, b, rep.x_hat);
        save_vector_market(rep.x_hat, opts.out_path);
        std::cout << "iterations=" << rep.iterates.size() - 1 << " meta_calls=" << rep.meta_calls
                  << " converged=" << (rep.converged ? 1 : 0) << " kw_backward_error=" << fmt(kw)
                  << "\n";
        std::cout << "solution written to " << opts.out_path << "\n";
        return rep.diverged ? 1 : 0;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 1;
    }
}

} // namespace rlsq::bench
