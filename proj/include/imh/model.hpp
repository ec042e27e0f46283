#pragma once

#include "imh/affinity.hpp"
#include "imh/codes.hpp"
#include "imh/embeddings.hpp"
#include "imh/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace imh {

/// Everything needed to hash an arbitrary point: the base centers, their
/// embedding with centering offset, the kernel bandwidth, and the neighbor
/// count. Immutable after construction.
struct HashModel {
  static constexpr std::uint32_t kFormatVersion = 1;

  Matrix centers;  // m x d
  BaseEmbedding embedding;
  Bandwidth bandwidth;
  Index k = 5;
  std::uint64_t config_hash = 0;

  Index base_size() const { return centers.rows(); }
  Index feature_dims() const { return centers.cols(); }
  Index code_length() const { return embedding.dims(); }

  void validate() const;
};

/// Closed-form embedding of one point: affinity-weighted average of the k
/// nearest base embeddings, minus the centering offset. O(dm + rk).
Vector extend_point(const HashModel& model, const RowVector& x);

/// Batch form; row i equals extend_point on row i within 1e-12.
Matrix extend_batch(const HashModel& model, const Matrix& data);

/// Binarize the centered extension at zero (coordinate >= 0 gives bit 1).
CodeSet hash(const HashModel& model, const Matrix& data,
             const std::vector<std::int64_t>& ids);

// Versioned, checksummed model container (magic "IMHM"). save -> load ->
// save reproduces identical bytes.
void save_model(const HashModel& model, const std::string& path);
HashModel load_model(const std::string& path);

}  // namespace imh
