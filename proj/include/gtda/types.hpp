#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace gtda {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Class labels, 1-based: y_i in {1, ..., m}.
using LabelVector = std::vector<int>;

/// Feature scaling applied jointly to source and target. Std divides each
/// feature by its standard deviation only (zero entries stay zero); ZScore
/// additionally removes the per-feature mean.
enum class NormalizationMode { Std, ZScore };

/// Writes a diagnostic line to stderr. Machine-readable output never goes
/// through here.
void warn(const std::string& message);

}  // namespace gtda
