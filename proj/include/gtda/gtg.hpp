#pragma once

#include <optional>
#include <utility>

#include "gtda/types.hpp"

namespace gtda {

struct DynamicsConfig {
  double eps = 1e-5;    // stop when the Frobenius norm of a step falls below
  int max_iter = 1000;  // hard cap on replicator iterations
};

struct DynamicsResult {
  Matrix profile;       // final mixed strategy profile, n x m
  int iterations = 0;   // steps actually performed
  double tol = 0.0;     // Frobenius norm of the last step
  bool converged = false;
};

/// Builds the initial mixed strategy profile: one row per player, labeled
/// source players first as one-hot rows, then target players. Target rows are
/// uniform 1/m without a prior, otherwise the given prior rows (each must lie
/// in the simplex within 1e-6).
Matrix init_profile(const LabelVector& source_labels, int num_classes,
                    const std::optional<Matrix>& target_prior, int target_count);

/// Pure-strategy payoffs P = W x; P(i,h) is player i's payoff for playing h
/// against the current profile.
Matrix payoff_matrix(const Matrix& x, const SparseMatrix& w);

/// One synchronous replicator step: x'(i,h) = x(i,h) P(i,h) / (x_i . P_i),
/// computed from the same profile for every row. Rows with zero expected
/// payoff are returned unchanged.
Matrix replicator_step(const Matrix& x, const SparseMatrix& w);

/// Iterates replicator_step until the step norm drops below cfg.eps or
/// cfg.max_iter steps were taken. Throws NumericsError if a non-finite value
/// appears (unreachable under the documented preconditions).
DynamicsResult run_dynamics(const Matrix& x0, const SparseMatrix& w,
                            const DynamicsConfig& cfg = {});

/// Quadratic potential sum_ij w_ij <x_i, x_j>. Non-decreasing along the
/// replicator dynamics for symmetric nonnegative w with zero diagonal.
double potential(const Matrix& x, const SparseMatrix& w);

/// Splits off the target block: soft predictions are rows source_count..n-1,
/// hard labels their per-row argmax (ties go to the lowest class index).
std::pair<Matrix, LabelVector> extract_predictions(const Matrix& x, int source_count);

}  // namespace gtda
