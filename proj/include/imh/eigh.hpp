#pragma once

#include "imh/types.hpp"

namespace imh {

/// Full spectrum of a symmetric matrix, eigenvalues ascending, eigenvector
/// i in column i. Signs are canonical: the largest-magnitude entry of each
/// eigenvector is positive (first such entry on magnitude ties). Ties in
/// eigenvalues are ordered by lexicographic comparison of the canonicalized
/// eigenvectors.
struct SymmetricEigenResult {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Dense symmetric eigendecomposition by cyclic Jacobi rotations.
/// The input must be symmetric within 1e-10 (relative); it is symmetrized
/// as (A + A')/2 before iterating. Identical input bits give identical
/// output bits.
SymmetricEigenResult eigh(const Matrix& a);

}  // namespace imh
