#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace imh {

using Scalar = double;
using Index = Eigen::Index;

// Dense row-major types; rows are data points throughout.
template <typename S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Matrix = MatrixX<Scalar>;
using Vector = VectorX<Scalar>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
using IndexMatrix = MatrixX<Index>;

/// splitmix64 finalizer; decorrelates seed families (e.g. per-trial seeds
/// derived from a base seed and a trial index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or corrupt input files.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Violated preconditions or inconsistent arguments.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace imh
