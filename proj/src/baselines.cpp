#include "gtda/baselines.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gtda/errors.hpp"

namespace gtda {

namespace {

void check_square(const SparseMatrix& w, const Matrix& y, const char* who) {
  if (w.rows() != w.cols() || w.rows() != y.rows()) {
    throw DimensionError(std::string(who) + ": affinity is " + std::to_string(w.rows()) + "x" +
                         std::to_string(w.cols()) + ", profile has " + std::to_string(y.rows()) +
                         " rows");
  }
}

void check_config(const BaselineConfig& cfg, const char* who) {
  if (cfg.eps <= 0.0) throw ConfigError(std::string(who) + ": eps must be positive");
  if (cfg.max_iter < 1) throw ConfigError(std::string(who) + ": max_iter must be >= 1");
}

Vector row_sums(const SparseMatrix& w) {
  return w * Vector::Ones(w.cols());
}

}  // namespace

Matrix label_propagation(const SparseMatrix& w, const Matrix& y0, int labeled_count,
                         const BaselineConfig& cfg, BaselineStats* stats) {
  check_square(w, y0, "label_propagation");
  check_config(cfg, "label_propagation");
  const Eigen::Index n = y0.rows();
  const Eigen::Index m = y0.cols();
  if (labeled_count < 0 || labeled_count > n) {
    throw DimensionError("label_propagation: labeled_count out of range");
  }

  const Vector degree = row_sums(w);
  const Matrix clamp = y0.topRows(labeled_count);
  Matrix y = y0;
  BaselineStats local;
  while (local.iterations < cfg.max_iter) {
    Matrix next = w * y;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (degree(i) > 0.0) {
        next.row(i) /= degree(i);
      } else {
        next.row(i) = y.row(i);  // isolated node, skipped
      }
    }
    next.topRows(labeled_count) = clamp;
    for (Eigen::Index i = labeled_count; i < n; ++i) {
      if (degree(i) <= 0.0) continue;
      const double s = next.row(i).sum();
      if (s > 0.0) {
        next.row(i) /= s;
      } else {
        next.row(i).setConstant(1.0 / static_cast<double>(m));
      }
    }
    local.tol = (next - y).norm();
    y = std::move(next);
    ++local.iterations;
    if (local.tol < cfg.eps) break;
  }
  local.converged = local.tol < cfg.eps;
  if (stats) *stats = local;
  return y;
}

Matrix label_spreading(const SparseMatrix& w, const Matrix& y0,
                       const BaselineConfig& cfg, BaselineStats* stats) {
  check_square(w, y0, "label_spreading");
  check_config(cfg, "label_spreading");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw ConfigError("label_spreading: alpha must lie in (0, 1)");
  }

  const Vector degree = row_sums(w);
  Vector inv_sqrt = degree.unaryExpr([](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; });

  // S = D^-1/2 W D^-1/2; zero-degree nodes get an all-zero row and column.
  SparseMatrix s = w;
  for (int col = 0; col < s.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(s, col); it; ++it) {
      it.valueRef() *= inv_sqrt(it.row()) * inv_sqrt(col);
    }
  }

  Matrix f = y0;
  BaselineStats local;
  while (local.iterations < cfg.max_iter) {
    Matrix next = cfg.alpha * (s * f) + (1.0 - cfg.alpha) * y0;
    local.tol = (next - f).norm();
    f = std::move(next);
    ++local.iterations;
    if (local.tol < cfg.eps) break;
  }
  local.converged = local.tol < cfg.eps;
  if (stats) *stats = local;
  return f;
}

Matrix harmonic_function(const SparseMatrix& w, const Matrix& y_labeled,
                         int labeled_count, HfSolver solver) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n) throw DimensionError("harmonic_function: affinity not square");
  if (labeled_count < 0 || labeled_count > n) {
    throw DimensionError("harmonic_function: labeled_count out of range");
  }
  if (y_labeled.rows() != labeled_count) {
    throw DimensionError("harmonic_function: labeled block has " +
                         std::to_string(y_labeled.rows()) + " rows, expected " +
                         std::to_string(labeled_count));
  }
  const Eigen::Index l = labeled_count;
  const Eigen::Index u = n - l;
  const Eigen::Index m = y_labeled.cols();
  if (u == 0) return y_labeled;

  const Vector degree = row_sums(w);

  // Assemble L_uu = D_uu - W_uu and the boundary term W_ul Y_L in one sweep.
  std::vector<Eigen::Triplet<double>> triplets;
  Matrix rhs = Matrix::Zero(u, m);
  std::vector<int> uf(static_cast<std::size_t>(u));
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&uf](int a) {
    while (uf[static_cast<std::size_t>(a)] != a) {
      uf[static_cast<std::size_t>(a)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(a)])];
      a = uf[static_cast<std::size_t>(a)];
    }
    return a;
  };
  std::vector<bool> sees_label(static_cast<std::size_t>(u), false);

  for (int col = 0; col < w.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(w, col); it; ++it) {
      const Eigen::Index row = it.row();
      if (row < l || it.value() == 0.0) continue;
      const int ui = static_cast<int>(row - l);
      if (col >= l) {
        triplets.emplace_back(ui, static_cast<int>(col - l), -it.value());
        const int a = find(ui);
        const int b = find(static_cast<int>(col - l));
        if (a != b) uf[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      } else {
        rhs.row(ui) += it.value() * y_labeled.row(col);
        sees_label[static_cast<std::size_t>(ui)] = true;
      }
    }
  }
  for (Eigen::Index i = 0; i < u; ++i) {
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), degree(l + i));
  }

  // A component of the unlabeled subgraph with no edge into the labeled set
  // makes the system singular; report it instead of solving garbage.
  std::vector<bool> root_sees_label(static_cast<std::size_t>(u), false);
  for (int i = 0; i < u; ++i) {
    if (sees_label[static_cast<std::size_t>(i)]) root_sees_label[static_cast<std::size_t>(find(i))] = true;
  }
  for (int i = 0; i < u; ++i) {
    const int root = find(i);
    if (!root_sees_label[static_cast<std::size_t>(root)]) {
      std::string members;
      int count = 0;
      for (int j = 0; j < u; ++j) {
        if (find(j) == root) {
          if (count < 8) members += (count ? ", " : "") + std::to_string(l + j);
          ++count;
        }
      }
      if (count > 8) members += ", ...";
      throw SingularSystemError("harmonic_function: unlabeled component of size " +
                                std::to_string(count) + " (nodes " + members +
                                ") has no path to any labeled node");
    }
  }

  SparseMatrix laplacian(u, u);
  laplacian.setFromTriplets(triplets.begin(), triplets.end());
  laplacian.makeCompressed();

  Matrix f_u;
  if (solver == HfSolver::Direct) {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(laplacian);
    if (ldlt.info() != Eigen::Success) {
      throw NumericsError("harmonic_function: factorization failed");
    }
    f_u = ldlt.solve(rhs);
  } else {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(10 * u + 100);
    cg.compute(laplacian);
    f_u = cg.solve(rhs);
  }

  const double residual = (laplacian * f_u - rhs).norm();
  if (!(residual <= 1e-10 * std::max(1.0, rhs.norm()))) {
    throw NumericsError("harmonic_function: linear solve residual " + std::to_string(residual));
  }

  Matrix result(n, m);
  result.topRows(l) = y_labeled;
  result.bottomRows(u) = f_u;
  return result;
}

}  // namespace gtda
