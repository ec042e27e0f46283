#pragma once

#include "imh/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace imh {

enum class BaseMethod { kmeans, random };

std::string to_string(BaseMethod method);
BaseMethod parse_base_method(const std::string& name);

/// The m representative points the manifold embedding is computed on.
struct BaseSelection {
  BaseMethod method = BaseMethod::random;
  Matrix centers;                           // m x d
  std::vector<Index> assignment;            // kmeans only, size n
  std::vector<Scalar> objective_history;    // kmeans only, per iteration
  std::optional<Matrix> distances_to_base;  // n x m, on request

  Index size() const { return centers.rows(); }
};

struct KmeansOptions {
  Index max_iters = 50;
  bool keep_distances = false;
};

/// Lloyd's algorithm with k-means++ seeding. Empty clusters are re-seeded
/// from the point currently farthest from its center. The within-cluster
/// squared-distance objective is recorded per iteration and never increases.
BaseSelection kmeans(const Matrix& data, Index m, const KmeansOptions& opts,
                     std::uint64_t seed);

/// Uniform sample of m data rows without replacement.
BaseSelection random_sample(const Matrix& data, Index m, std::uint64_t seed);

}  // namespace imh
