#pragma once

#include <string>
#include <vector>

#include "gtda/types.hpp"

namespace gtda {

struct LRConfig {
  /// Inverse regularization strengths tried by cross-validation, one per
  /// decade of the range [1e-3, 1e4].
  std::vector<double> c_grid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
  int folds = 2;
  int max_opt_iters = 500;
  /// Optimizer stop: per-observation max gradient magnitude, i.e. stop when
  /// ||grad||_inf <= opt_tol * n.
  double opt_tol = 1e-6;
};

struct LRModel {
  Matrix weights;  // m x d
  Vector biases;   // m
  int classes = 0;
  double selected_c = 0.0;
};

/// Regularized multinomial cross-entropy
///   sum_i -log softmax(W f_i + b)_{y_i} + (1/(2C)) ||W||_F^2
/// with labels 1-based. Exposed so the analytic gradient can be checked
/// against finite differences.
double lr_objective(const Matrix& weights, const Vector& biases,
                    const Matrix& features, const LabelVector& labels, double c);

/// Analytic gradient of lr_objective with respect to weights and biases.
void lr_gradient(const Matrix& weights, const Vector& biases,
                 const Matrix& features, const LabelVector& labels, double c,
                 Matrix& grad_weights, Vector& grad_biases);

/// Trains the multinomial model on (already standardized) source features.
/// Each C in the grid is scored by mean held-out accuracy under a
/// deterministic stratified interleaved 2-fold split (within each class,
/// even-positioned rows go to fold 1, odd to fold 2); the best C wins with
/// ties broken toward the smaller value, and the model is refit on all rows.
/// Falls back to plain interleaved halves when some class cannot appear in
/// both folds. Throws ConfigError when a class is absent entirely or the
/// grid is invalid.
LRModel train_lr(const Matrix& features, const LabelVector& labels,
                 const LRConfig& cfg = {});

/// Row-wise softmax(W f_i + b) with max-subtraction; rows sum to 1.
Matrix predict_proba(const LRModel& model, const Matrix& features);

/// Model (de)serialization as a small JSON document:
/// {classes, dim, weights (row-major), biases, selected_C}.
void save_lr_model(const LRModel& model, const std::string& path);
LRModel load_lr_model(const std::string& path);

}  // namespace gtda
