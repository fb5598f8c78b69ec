#include "gtda/gtg.hpp"

#include <cmath>
#include <string>

#include "gtda/errors.hpp"

namespace gtda {

Matrix init_profile(const LabelVector& source_labels, int num_classes,
                    const std::optional<Matrix>& target_prior, int target_count) {
  if (num_classes < 1) throw InitError("init_profile: need at least one class");
  if (target_count < 0) throw InitError("init_profile: negative target count");

  const Eigen::Index ns = static_cast<Eigen::Index>(source_labels.size());
  const Eigen::Index nt = target_count;
  const Eigen::Index m = num_classes;

  Matrix x(ns + nt, m);
  for (Eigen::Index i = 0; i < ns; ++i) {
    const int y = source_labels[static_cast<std::size_t>(i)];
    if (y < 1 || y > num_classes) {
      throw InitError("init_profile: label " + std::to_string(y) + " outside 1.." +
                      std::to_string(num_classes));
    }
    x.row(i).setZero();
    x(i, y - 1) = 1.0;
  }

  if (target_prior) {
    if (target_prior->rows() != nt || target_prior->cols() != m) {
      throw InitError("init_profile: prior is " + std::to_string(target_prior->rows()) + "x" +
                      std::to_string(target_prior->cols()) + ", expected " + std::to_string(nt) +
                      "x" + std::to_string(m));
    }
    for (Eigen::Index i = 0; i < nt; ++i) {
      const double sum = target_prior->row(i).sum();
      if (std::abs(sum - 1.0) > 1e-6 || (target_prior->row(i).array() < 0.0).any()) {
        throw InitError("init_profile: prior row " + std::to_string(i) +
                        " is not a distribution (sum " + std::to_string(sum) + ")");
      }
    }
    x.bottomRows(nt) = *target_prior;
  } else if (nt > 0) {
    x.bottomRows(nt).setConstant(1.0 / static_cast<double>(m));
  }
  return x;
}

Matrix payoff_matrix(const Matrix& x, const SparseMatrix& w) {
  if (w.rows() != x.rows() || w.cols() != x.rows()) {
    throw DimensionError("payoff_matrix: profile has " + std::to_string(x.rows()) +
                         " rows, affinity is " + std::to_string(w.rows()) + "x" +
                         std::to_string(w.cols()));
  }
  return w * x;
}

Matrix replicator_step(const Matrix& x, const SparseMatrix& w) {
  const Matrix payoff = payoff_matrix(x, w);
  Matrix next(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double expected = x.row(i).dot(payoff.row(i));
    if (expected > 0.0) {
      next.row(i) = x.row(i).cwiseProduct(payoff.row(i)) / expected;
    } else {
      // Isolated player or zero payoff everywhere it has mass.
      next.row(i) = x.row(i);
    }
  }
  return next;
}

DynamicsResult run_dynamics(const Matrix& x0, const SparseMatrix& w,
                            const DynamicsConfig& cfg) {
  if (cfg.eps <= 0.0) throw ConfigError("run_dynamics: eps must be positive");
  if (cfg.max_iter < 1) throw ConfigError("run_dynamics: max_iter must be >= 1");

  DynamicsResult result;
  result.profile = x0;
  while (result.iterations < cfg.max_iter) {
    Matrix next = replicator_step(result.profile, w);
    if (!next.allFinite()) {
      throw NumericsError("run_dynamics: non-finite profile at iteration " +
                          std::to_string(result.iterations + 1));
    }
    result.tol = (next - result.profile).norm();
    result.profile = std::move(next);
    ++result.iterations;
    if (result.tol < cfg.eps) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double potential(const Matrix& x, const SparseMatrix& w) {
  return (x.cwiseProduct(w * x)).sum();
}

std::pair<Matrix, LabelVector> extract_predictions(const Matrix& x, int source_count) {
  if (source_count < 0 || source_count >= x.rows()) {
    throw DimensionError("extract_predictions: source_count " + std::to_string(source_count) +
                         " out of range for " + std::to_string(x.rows()) + " players");
  }
  Matrix soft = x.bottomRows(x.rows() - source_count);
  LabelVector hard(static_cast<std::size_t>(soft.rows()));
  for (Eigen::Index i = 0; i < soft.rows(); ++i) {
    // Ties go to the lowest class index.
    Eigen::Index best = 0;
    for (Eigen::Index h = 1; h < soft.cols(); ++h) {
      if (soft(i, h) > soft(i, best)) best = h;
    }
    hard[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  return {std::move(soft), std::move(hard)};
}

}  // namespace gtda
