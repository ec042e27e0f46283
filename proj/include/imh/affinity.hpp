#pragma once

#include "imh/types.hpp"

#include <cstdint>

namespace imh {

/// Gaussian kernel width in feature-space distance units.
struct Bandwidth {
  enum class Heuristic { fixed, mean_knn_dist };

  Scalar sigma = 1.0;
  Heuristic heuristic = Heuristic::fixed;
};

/// Sparse n x m nonnegative weights with exactly k nonzeros per row,
/// stored as per-row (base index, value) slots ordered nearest-first.
struct AffinityWeights {
  Index cols = 0;       // m
  IndexMatrix indices;  // n x k base columns
  Matrix values;        // n x k weights, all > 0
  bool normalized = false;

  Index rows() const { return values.rows(); }
  Index nnz_per_row() const { return values.cols(); }

  /// Dense n x m view; intended for small instances and tests.
  Matrix to_dense() const;
};

/// Truncated Gaussian weights exp(-|x - c|^2 / sigma^2) against the k
/// nearest base rows (ties broken by lower base index); unnormalized.
AffinityWeights knn_weights(const Matrix& points, const Matrix& base, Index k,
                            const Bandwidth& bw);

/// Divide each row by its sum; sparsity pattern unchanged. Idempotent.
AffinityWeights normalize_rows(const AffinityWeights& w);

/// sigma = mean distance to the k-th nearest base row over a sample of at
/// most `sample_cap` points. Throws when every sampled distance is zero.
Bandwidth choose_bandwidth(const Matrix& points, const Matrix& base, Index k,
                           Index sample_cap = 1024, std::uint64_t seed = 0);

/// Symmetric m x m k-NN Gaussian graph among the base rows (self excluded,
/// symmetrized by elementwise max), for Laplacian-based embeddings.
Matrix base_affinity_graph(const Matrix& base, Index k, const Bandwidth& bw);

/// W * y for the sparse weight structure (n x m times m x r).
Matrix multiply(const AffinityWeights& w, const Matrix& y);

}  // namespace imh
