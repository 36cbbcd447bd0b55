#pragma once

#include <string>

#include "rlsq/dense_matrix.hpp"

namespace rlsq {

/// Write in MatrixMarket array format (real, general), one entry per line
/// in column-major order, 17 significant digits so values round-trip
/// exactly.
void save_matrix_market(const DenseMatrix& m, const std::string& path);

/// Read a MatrixMarket array file. Coordinate-format files are rejected;
/// malformed content raises ParseError naming the line.
DenseMatrix load_matrix_market(const std::string& path);

/// Vector convenience wrappers (stored as m x 1 arrays).
void save_vector_market(const Vec& v, const std::string& path);
Vec load_vector_market(const std::string& path);

} // namespace rlsq
