#pragma once

#include "imh/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace imh {

/// Dense n x d feature collection with stable per-row identifiers and
/// optional integer class labels.
struct DataMatrix {
  Matrix values;                     // n x d
  std::vector<std::int64_t> ids;     // size n, unique
  std::vector<std::int32_t> labels;  // empty, or size n

  Index rows() const { return values.rows(); }
  Index dims() const { return values.cols(); }
  bool has_labels() const { return !labels.empty(); }

  /// Throws ValidationError on non-finite values, duplicate ids, or a
  /// label block whose length disagrees with the row count.
  void validate() const;
};

/// Disjoint train/test id lists drawn from one dataset.
struct SplitSpec {
  std::vector<std::int64_t> train_ids;
  std::vector<std::int64_t> test_ids;
  std::uint64_t seed = 0;
};

enum class VecsKind { fvecs, bvecs };

enum class SynthKind { swiss_roll, gaussian_clusters, digits };

struct SynthParams {
  Index clusters = 3;        // gaussian_clusters: number of clusters
  Index dims = 8;            // gaussian_clusters: ambient dimension
  Scalar separation = 10.0;  // gaussian_clusters: center scale
  Scalar noise = 1.0;        // within-cluster / roll noise sigma
  Index segments = 4;        // swiss_roll: label bands along the roll
};

// IDX (big-endian header, magic 0x00000803 for images / 0x00000801 for
// label vectors). Image payloads are scaled to [0,1]; 1-D payloads keep
// their raw byte values.
DataMatrix load_idx(const std::string& path);

// fvecs/bvecs: per record a little-endian int32 dimension field followed
// by that many floats (fvecs) or bytes (bvecs).
DataMatrix load_vecs(const std::string& path, VecsKind kind);

// Rectangular numeric CSV; when has_labels the last column is stripped
// into integer labels.
DataMatrix load_csv(const std::string& path, bool has_labels);

// Native container: magic "IMHD", version, n, d, ids, row-major float64
// payload, optional labels block. Round-trips bit-exactly.
void save_native(const DataMatrix& data, const std::string& path);
DataMatrix load_native(const std::string& path);

// Extension-based dispatch: .imhd native, .csv/.lcsv, .fvecs, .bvecs,
// .idx/*-ubyte IDX.
DataMatrix load_auto(const std::string& path);

/// Deterministic synthetic datasets; labels are the cluster index
/// (gaussian_clusters), roll segment (swiss_roll) or digit class (digits,
/// 28x28 rendered glyphs).
DataMatrix synth_manifold(SynthKind kind, Index n, const SynthParams& params,
                          std::uint64_t seed);
SynthKind parse_synth_kind(const std::string& name);

/// Uniform sample without replacement of test_count test rows.
SplitSpec split(const DataMatrix& data, Index test_count, std::uint64_t seed);

/// Materialize the rows named by `keep_ids`, preserving their order.
DataMatrix subset(const DataMatrix& data, const std::vector<std::int64_t>& keep_ids);

/// Attach a 1-D label matrix (as loaded from an IDX label file) to `data`.
void attach_labels(DataMatrix& data, const DataMatrix& label_column);

/// Scale every row to unit Euclidean norm; zero rows are left unchanged.
void scale_unit_norm(DataMatrix& data);

}  // namespace imh
