#pragma once

#include "imh/codes.hpp"
#include "imh/dataset.hpp"
#include "imh/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace imh {

/// Linear hash model: bit b of x is sign(projection.row(b) * x - offset(b)).
/// Covers both random-projection (LSH) and PCA-direction (PCAH) baselines.
struct LinearHashModel {
  static constexpr std::uint32_t kFormatVersion = 1;

  enum class Kind { lsh, pcah };
  Kind kind = Kind::lsh;
  Matrix projection;  // r x d
  Vector offset;      // r
  std::uint64_t config_hash = 0;
  std::vector<std::string> warnings;

  Index code_length() const { return projection.rows(); }
  Index feature_dims() const { return projection.cols(); }
};

/// Gaussian random projections with per-bit median offsets.
LinearHashModel lsh_fit(const Matrix& data, Index r, std::uint64_t seed);

/// Top-r principal directions of the centered data; rank deficiency below r
/// zero-pads the trailing bits and records a warning.
LinearHashModel pcah_fit(const Matrix& data, Index r);

CodeSet linear_encode(const LinearHashModel& model, const Matrix& data,
                      const std::vector<std::int64_t>& ids);

std::pair<LinearHashModel, CodeSet> lsh_baseline(const DataMatrix& data, Index r,
                                                 std::uint64_t seed);
CodeSet pcah_baseline(const DataMatrix& data, Index r);

// Versioned, checksummed container (magic "IMHP").
void save_linear_model(const LinearHashModel& model, const std::string& path);
LinearHashModel load_linear_model(const std::string& path);

}  // namespace imh
