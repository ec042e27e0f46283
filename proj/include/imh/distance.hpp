#pragma once

#include "imh/types.hpp"

namespace imh {

/// Squared Euclidean distances between the rows of `a` and the rows of `b`,
/// returned as an a.rows() x b.rows() matrix. Negative values from rounding
/// are clamped to zero.
template <typename DA, typename DB>
Matrix pairwise_sqdist(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Vector an = a.rowwise().squaredNorm();
  Vector bn = b.rowwise().squaredNorm();
  Matrix d2 = (-2.0 * (a * b.transpose())).eval();
  d2.colwise() += an;
  d2.rowwise() += bn.transpose();
  return d2.cwiseMax(Scalar(0));
}

/// Row-chunk size used by blocked distance computations.
inline constexpr Index kDistanceChunk = 512;

}  // namespace imh
