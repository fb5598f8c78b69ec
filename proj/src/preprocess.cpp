#include "gtda/preprocess.hpp"

#include <string>

#include "gtda/errors.hpp"

namespace gtda {

namespace {

// A feature whose deviation is at this level relative to its magnitude is
// constant up to accumulated rounding; dividing by such a "std" would only
// amplify noise.
bool is_degenerate(double stddev, double max_abs) {
  return stddev <= 1e-13 * std::max(1.0, max_abs);
}

}  // namespace

std::pair<Matrix, Matrix> joint_standardize(const Matrix& source,
                                            const Matrix& target,
                                            NormalizationMode mode) {
  if (source.rows() == 0 || target.rows() == 0 || source.cols() == 0 || target.cols() == 0) {
    throw DimensionError("joint_standardize: source and target must be nonempty");
  }
  if (source.cols() != target.cols()) {
    throw DimensionError("joint_standardize: source has " + std::to_string(source.cols()) +
                         " features, target has " + std::to_string(target.cols()));
  }
  if (!source.allFinite()) throw DataError("joint_standardize: source contains NaN or Inf");
  if (!target.allFinite()) throw DataError("joint_standardize: target contains NaN or Inf");

  const Eigen::Index ns = source.rows();
  const Eigen::Index nt = target.rows();
  const Eigen::Index d = source.cols();

  // Statistics are computed on the stacked union so that they do not depend
  // on where the source/target split falls.
  Matrix stacked(ns + nt, d);
  stacked.topRows(ns) = source;
  stacked.bottomRows(nt) = target;

  const double n = static_cast<double>(ns + nt);
  const Eigen::RowVectorXd mean = stacked.colwise().sum() / n;
  const Eigen::RowVectorXd var =
      (stacked.rowwise() - mean).array().square().colwise().sum() / n;  // population variance
  const Eigen::RowVectorXd stddev = var.array().sqrt();
  const Eigen::RowVectorXd max_abs = stacked.cwiseAbs().colwise().maxCoeff();

  for (Eigen::Index j = 0; j < d; ++j) {
    if (is_degenerate(stddev(j), max_abs(j))) {
      if (mode == NormalizationMode::ZScore) {
        stacked.col(j).setZero();
      }
      // Std: constant feature passes through unchanged.
    } else if (mode == NormalizationMode::ZScore) {
      stacked.col(j) = (stacked.col(j).array() - mean(j)) / stddev(j);
    } else {
      stacked.col(j) /= stddev(j);
    }
  }

  return {stacked.topRows(ns), stacked.bottomRows(nt)};
}

}  // namespace gtda
