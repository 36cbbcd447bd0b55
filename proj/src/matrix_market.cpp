#include "rlsq/matrix_market.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rlsq {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

} // namespace

void save_matrix_market(const DenseMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << " " << m.cols() << "\n";
    char buf[40];
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g\n", m(i, j));
            out << buf;
        }
    if (!out) throw IoError("write failed: " + path);
}

DenseMatrix load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);

    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) fail(path, 1, "empty file");
    ++lineno;
    {
        std::istringstream hs(line);
        std::string banner, object, format, field, symmetry;
        hs >> banner >> object >> format >> field >> symmetry;
        if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
            fail(path, lineno, "not a MatrixMarket matrix header");
        if (lower(format) == "coordinate")
            fail(path, lineno, "coordinate format not supported (array format only)");
        if (lower(format) != "array") fail(path, lineno, "unknown format '" + format + "'");
        if (lower(field) != "real") fail(path, lineno, "field must be 'real'");
        if (lower(symmetry) != "general") fail(path, lineno, "symmetry must be 'general'");
    }

    // skip comments
    do {
        if (!std::getline(in, line)) fail(path, lineno + 1, "missing size line");
        ++lineno;
    } while (!line.empty() && line[0] == '%');

    long long rows = -1, cols = -1;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols) || rows < 0 || cols < 0)
            fail(path, lineno, "bad size line '" + line + "'");
    }

    DenseMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    std::size_t count = 0;
    const std::size_t total = m.rows() * m.cols();
    while (count < total) {
        if (!std::getline(in, line)) fail(path, lineno + 1, "file ends before all entries read");
        ++lineno;
        std::istringstream ss(line);
        double v;
        while (ss >> v) {
            if (count >= total) fail(path, lineno, "more entries than rows*cols");
            if (!std::isfinite(v)) fail(path, lineno, "non-finite entry");
            m.data()[count++] = v; // column-major, matching file order
        }
        std::string rest;
        if (ss.clear(), ss >> rest; !rest.empty() && rest[0] != '%')
            fail(path, lineno, "unparseable entry '" + rest + "'");
    }
    return m;
}

void save_vector_market(const Vec& v, const std::string& path) {
    DenseMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    save_matrix_market(m, path);
}

Vec load_vector_market(const std::string& path) {
    DenseMatrix m = load_matrix_market(path);
    if (m.cols() != 1) throw ParseError(path + ": expected a single-column vector");
    return m.data();
}

} // namespace rlsq
