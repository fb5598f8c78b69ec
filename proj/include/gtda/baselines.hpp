#pragma once

#include "gtda/types.hpp"

namespace gtda {

enum class HfSolver { Direct, ConjugateGradient };

struct BaselineConfig {
  double alpha = 0.2;   // label spreading mixing coefficient, in (0, 1)
  double eps = 1e-5;
  int max_iter = 1000;
  HfSolver hf_solver = HfSolver::Direct;
};

struct BaselineStats {
  int iterations = 0;
  double tol = 0.0;
  bool converged = true;
};

/// Label propagation with hard clamping: iterate Y <- D^-1 W Y, reset the
/// first labeled_count rows to their initial one-hot values after every
/// sweep, and renormalize unlabeled rows to sum 1 (rows summing to 0 reset to
/// uniform). Zero-degree rows are skipped and keep their previous value.
Matrix label_propagation(const SparseMatrix& w, const Matrix& y0, int labeled_count,
                         const BaselineConfig& cfg = {}, BaselineStats* stats = nullptr);

/// Label spreading: F <- alpha S F + (1-alpha) Y0 with the symmetrically
/// normalized S = D^-1/2 W D^-1/2, started from F = Y0. Iterate rows are not
/// probability vectors; callers rank classes by row argmax or renormalize.
Matrix label_spreading(const SparseMatrix& w, const Matrix& y0,
                       const BaselineConfig& cfg = {}, BaselineStats* stats = nullptr);

/// Gaussian-fields harmonic solution: solves (D_uu - W_uu) F_u = W_ul Y_L for
/// the unlabeled block and passes labeled rows through. Throws
/// SingularSystemError, naming the affected nodes, when an unlabeled
/// component has no edge to any labeled node.
Matrix harmonic_function(const SparseMatrix& w, const Matrix& y_labeled,
                         int labeled_count, HfSolver solver = HfSolver::Direct);

}  // namespace gtda
