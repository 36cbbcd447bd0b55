#include "rlsq/problems.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "rlsq/matrix_market.hpp"
#include "rlsq/qr.hpp"
#include "rlsq/rng.hpp"

namespace rlsq {

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon();

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
    DenseMatrix g(rows, cols);
    for (double& x : g.data()) x = rng.gaussian();
    return g;
}

// sign-fixed QR of a Gaussian matrix yields an exactly Haar-distributed Q
DenseMatrix haar_columns(std::size_t rows, std::size_t cols, CounterRng& rng) {
    return thin_q(householder_qr(gaussian_matrix(rows, cols, rng)));
}

} // namespace

LSProblem gen_synthetic(std::size_t m, std::size_t n, double kappa, double beta,
                        std::uint64_t seed) {
    if (n < 1 || m <= n) throw InvalidParameterError("gen_synthetic: need m > n >= 1");
    if (kappa < 1.0) throw InvalidParameterError("gen_synthetic: need kappa >= 1");
    if (beta < 0.0) throw InvalidParameterError("gen_synthetic: need beta >= 0");
    if (n == 1 && kappa != 1.0)
        throw InvalidParameterError("gen_synthetic: n = 1 forces kappa = 1");

    CounterRng rng(seed);
    const DenseMatrix v = haar_columns(n, n, rng);
    const DenseMatrix u1 = haar_columns(m, n, rng);

    // sigma_i = kappa^{-(i-1)/(n-1)}, endpoints 1 and 1/kappa inclusive
    Vec sigma(n, 1.0);
    if (n > 1) {
        const double e = std::log(kappa) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) sigma[i] = std::exp(-e * static_cast<double>(i));
    }

    // A = (U1 Sigma) V^T
    DenseMatrix u1s = u1;
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = u1s.col(j);
        for (std::size_t i = 0; i < m; ++i) cj[i] *= sigma[j];
    }
    LSProblem prob;
    prob.a = matmul(u1s, transpose(v));
    prob.kappa = kappa;
    prob.beta = beta;
    prob.seed = seed;

    Vec w(n);
    for (double& x : w) x = rng.gaussian();
    const double wn = norm2(w);
    for (double& x : w) x /= wn;
    prob.x_star = w;

    Vec r(m, 0.0);
    if (beta > 0.0) {
        Vec g(m);
        for (double& x : g) x = rng.gaussian();
        // project off range(A): r_dir = (I - U1 U1^T) g, then scale to beta
        const Vec coeffs = matvec_t(u1, g);
        axpy(-1.0, matvec(u1, coeffs), g);
        const double gn = norm2(g);
        for (std::size_t i = 0; i < m; ++i) r[i] = beta * g[i] / gn;
    }
    prob.r_star = r;

    prob.b = add(matvec(prob.a, *prob.x_star), r);
    return prob;
}

std::vector<LSProblem> gen_difficulty_sweep(std::size_t m, std::size_t n, std::size_t levels,
                                            std::uint64_t master_seed) {
    if (levels < 2) throw InvalidParameterError("gen_difficulty_sweep: need levels >= 2");
    std::vector<LSProblem> out;
    out.reserve(levels);
    for (std::size_t j = 0; j < levels; ++j) {
        const double exponent =
            16.0 * static_cast<double>(j) / static_cast<double>(levels - 1);
        const double difficulty = std::pow(10.0, exponent);
        out.push_back(gen_synthetic(m, n, difficulty, kU * difficulty,
                                    CounterRng::derive(master_seed, j)));
    }
    return out;
}

void save_problem_dir(const LSProblem& p, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + dir);
    save_matrix_market(p.a, dir + "/A.mtx");
    save_vector_market(p.b, dir + "/b.mtx");
    std::ofstream meta(dir + "/meta.txt");
    if (!meta) throw IoError("cannot open for writing: " + dir + "/meta.txt");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", p.kappa);
    meta << "kappa=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", p.beta);
    meta << "beta=" << buf << "\n";
    meta << "seed=" << p.seed << "\n";
}

LSProblem load_problem_dir(const std::string& dir) {
    LSProblem p;
    p.a = load_matrix_market(dir + "/A.mtx");
    p.b = load_vector_market(dir + "/b.mtx");
    std::ifstream meta(dir + "/meta.txt");
    if (!meta) throw IoError("cannot open: " + dir + "/meta.txt");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(meta, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(dir + "/meta.txt:" + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        std::istringstream vs(val);
        if (key == "kappa")
            vs >> p.kappa;
        else if (key == "beta")
            vs >> p.beta;
        else if (key == "seed")
            vs >> p.seed;
        // unknown keys are ignored
        if (vs.fail())
            throw ParseError(dir + "/meta.txt:" + std::to_string(lineno) + ": bad value");
    }
    return p;
}

} // namespace rlsq
