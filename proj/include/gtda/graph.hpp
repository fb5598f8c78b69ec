#pragma once

#include <string>

#include "gtda/types.hpp"

namespace gtda {

/// Neighbor rank used for the self-tuning kernel scale sigma_i.
inline constexpr int kDefaultNeighborRank = 7;

/// Cosine distance 1 - <a,b>/(|a||b|), clamped to [0, 2]. A zero-norm vector
/// makes the angle undefined; the distance is then defined as 1 (maximally
/// non-informative) and a warning is emitted.
double cosine_distance(const Vector& a, const Vector& b);

/// Dense n x n matrix of pairwise cosine distances between the rows of
/// `features`. Exactly symmetric, zero diagonal, entries in [0, 2].
Matrix pairwise_cosine_distances(const Matrix& features);

/// Self-tuning local scale per observation: the neighbor_rank-th smallest
/// off-diagonal entry of each distance row (1-indexed), clamped to the
/// (n-1)-th when fewer neighbors exist. A zero result (duplicate points) is
/// replaced by the smallest positive entry of the row, or 1e-12 if none.
Vector local_scales(const Matrix& distances, int neighbor_rank = kDefaultNeighborRank);

/// Similarity kernel w_ij = exp(-d(i,j)^2 / (sigma_i sigma_j)) with zero
/// diagonal. Symmetric with entries in [0, 1].
Matrix build_affinity(const Matrix& distances, const Vector& scales);

/// Neighborhood size floor(log2 n) + 1 used by sparsify.
int knn_count(Eigen::Index n);

/// Keeps w_ij when j is within node i's k-th smallest distance (ties at the
/// threshold retained) or vice versa; the kept-edge set is the union over the
/// two endpoints, so the result stays symmetric and every node keeps at least
/// min(k, n-1) neighbors.
SparseMatrix sparsify(const Matrix& affinity, const Matrix& distances);

/// Number of connected components of the graph induced by the nonzeros of w.
int connected_components(const SparseMatrix& w);

/// Writes the nonzeros of w as "i j w" lines, 0-indexed, full precision,
/// sorted by (i, j).
void dump_affinity(const SparseMatrix& w, const std::string& path);

}  // namespace gtda
