#include "gtda/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "gtda/errors.hpp"

namespace gtda {

namespace {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// k-th smallest off-diagonal entry of row i, 1-indexed, clamped to n-1.
double row_rank_value(const Matrix& d, Eigen::Index i, int rank, std::vector<double>& buf) {
  const Eigen::Index n = d.rows();
  buf.clear();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) buf.push_back(d(i, j));
  }
  const int r = std::min<int>(rank, static_cast<int>(buf.size()));
  std::nth_element(buf.begin(), buf.begin() + (r - 1), buf.end());
  return buf[static_cast<std::size_t>(r - 1)];
}

}  // namespace

double cosine_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("cosine_distance: vectors of length " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    warn("cosine_distance: zero-norm vector, treating distance as 1");
    return 1.0;
  }
  const double d = 1.0 - a.dot(b) / (na * nb);
  return std::clamp(d, 0.0, 2.0);
}

Matrix pairwise_cosine_distances(const Matrix& features) {
  const Eigen::Index n = features.rows();
  if (n < 1) throw GraphError("pairwise_cosine_distances: empty feature matrix");

  Matrix unit = features;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = unit.row(i).norm();
    if (norm == 0.0) {
      warn("pairwise_cosine_distances: row " + std::to_string(i) +
           " has zero norm, its distances default to 1");
      // Left as zeros: 1 - <0, .> gives distance 1 below.
    } else {
      unit.row(i) /= norm;
    }
  }

  Matrix gram = unit * unit.transpose();
  // Averaging with the transpose makes the result exactly symmetric.
  Matrix dist = Matrix::Ones(n, n) - 0.5 * (gram + gram.transpose());
  dist = dist.cwiseMax(0.0).cwiseMin(2.0);
  dist.diagonal().setZero();
  return dist;
}

Vector local_scales(const Matrix& distances, int neighbor_rank) {
  const Eigen::Index n = distances.rows();
  if (n < 2) throw GraphError("local_scales: need at least 2 observations");
  if (distances.cols() != n) throw DimensionError("local_scales: distance matrix not square");
  if (neighbor_rank < 1) throw GraphError("local_scales: neighbor rank must be >= 1");

  Vector sigma(n);
  std::vector<double> buf;
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = row_rank_value(distances, i, neighbor_rank, buf);
    if (s <= 0.0) {
      // Duplicate points: fall back to the nearest distinct neighbor.
      double smallest_positive = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = distances(i, j);
        if (j != i && v > 0.0 && (smallest_positive == 0.0 || v < smallest_positive)) {
          smallest_positive = v;
        }
      }
      s = smallest_positive > 0.0 ? smallest_positive : 1e-12;
    }
    sigma(i) = s;
  }
  return sigma;
}

Matrix build_affinity(const Matrix& distances, const Vector& scales) {
  const Eigen::Index n = distances.rows();
  if (distances.cols() != n || scales.size() != n) {
    throw DimensionError("build_affinity: inconsistent shapes");
  }
  if ((scales.array() <= 0.0).any()) throw GraphError("build_affinity: scales must be positive");

  Matrix w(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = distances(i, j);
      w(i, j) = std::exp(-(d * d) / (scales(i) * scales(j)));
    }
  }
  w.diagonal().setZero();
  return w;
}

int knn_count(Eigen::Index n) {
  if (n < 1) throw GraphError("knn_count: n must be >= 1");
  // floor(log2 n) + 1, in integer arithmetic.
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n)));
}

SparseMatrix sparsify(const Matrix& affinity, const Matrix& distances) {
  const Eigen::Index n = affinity.rows();
  if (n < 2) throw GraphError("sparsify: need at least 2 observations");
  if (affinity.cols() != n || distances.rows() != n || distances.cols() != n) {
    throw DimensionError("sparsify: inconsistent shapes");
  }

  const int k = knn_count(n);
  Vector threshold(n);
  std::vector<double> buf;
  for (Eigen::Index i = 0; i < n; ++i) {
    threshold(i) = row_rank_value(distances, i, k, buf);
  }

  // An edge survives when either endpoint ranks the other within its k
  // nearest distances (ties at the threshold retained).
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * k));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double d = distances(i, j);
      if (d <= threshold(i) || d <= threshold(j)) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), affinity(i, j));
      }
    }
  }

  SparseMatrix w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());
  w.makeCompressed();
  return w;
}

int connected_components(const SparseMatrix& w) {
  const int n = static_cast<int>(w.rows());
  UnionFind uf(n);
  for (int col = 0; col < w.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(w, col); it; ++it) {
      if (it.value() != 0.0) uf.unite(static_cast<int>(it.row()), col);
    }
  }
  int components = 0;
  for (int i = 0; i < n; ++i) {
    if (uf.find(i) == i) ++components;
  }
  return components;
}

void dump_affinity(const SparseMatrix& w, const std::string& path) {
  struct Entry {
    int i, j;
    double v;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(w.nonZeros()));
  for (int col = 0; col < w.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(w, col); it; ++it) {
      entries.push_back({static_cast<int>(it.row()), col, it.value()});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw DataError("cannot write file: " + path);
  for (const Entry& e : entries) {
    std::fprintf(f, "%d %d %.17g\n", e.i, e.j, e.v);
  }
  std::fclose(f);
}

}  // namespace gtda
