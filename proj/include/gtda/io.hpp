#pragma once

#include <string>

#include "gtda/types.hpp"

namespace gtda {

/// Reads a headerless CSV of decimal floats, one observation per line.
/// Rejects ragged rows, non-numeric or non-finite cells, and empty files with
/// a ParseError carrying the 1-based line number.
Matrix load_features(const std::string& path);

/// Reads one positive integer label per line. The class count m is the
/// maximum observed value; a warning is emitted for classes in 1..m that
/// never appear.
LabelVector load_labels(const std::string& path);

/// Largest label in y (0 for an empty vector).
int num_classes(const LabelVector& y);

/// Writes a matrix as headerless CSV with round-trip-exact precision.
void save_matrix_csv(const Matrix& m, const std::string& path);

/// Writes one label per line.
void save_labels(const LabelVector& y, const std::string& path);

}  // namespace gtda
