#pragma once

#include "imh/types.hpp"

#include <cstdint>
#include <vector>

namespace imh {

/// One run of the sampled-estimate construction: per-cluster masses C_j,
/// draw counts l_j = floor(m*C_j + 1), the drawn row indices, and the
/// resulting estimate of the weighted embedding average.
struct PrototypeDraw {
  std::vector<Scalar> cluster_mass;         // C_j
  std::vector<Index> draw_counts;           // l_j, 0 for zero-mass clusters
  std::vector<std::vector<Index>> drawn;    // per-cluster drawn indices
  Vector estimate;                          // r
  Index total_draws = 0;
};

/// Unbiased estimate of sum_i alpha_i y_i: within each cluster j, draw
/// l_j = floor(m*C_j + 1) indices with probability alpha_i / C_j and
/// average as sum_j (C_j / l_j) sum_mu y_draw. Zero-mass clusters are
/// skipped. alpha must be nonnegative and sum to 1; `clusters` must
/// partition the rows of y.
PrototypeDraw prototype_estimate(const Vector& alpha, const Matrix& y,
                                 const std::vector<std::vector<Index>>& clusters,
                                 Index m, std::uint64_t seed);

/// Greedy k-center (Gonzalez) covering radius using `centers` balls: a
/// certified upper bound on the entropy number of the rows of y.
Scalar greedy_covering_radius(const Matrix& y, Index centers);

struct ConcentrationReport {
  Index n_prime = 0;
  Scalar t = 0;
  Scalar epsilon = 0;    // covering-radius upper bound with n_prime/2 balls
  Scalar bound = 0;      // 2*epsilon^2 / (n_prime * t^2)
  Scalar empirical = 0;  // observed failure rate
  Index trials = 0;
  Index draws_used = 0;  // actual sample count per trial (>= n_prime)
  bool pass = false;
};

/// Monte-Carlo check of the concentration bound: estimates
/// Pr[|estimate - sum alpha_i y_i| >= t] over `trials` independent runs,
/// each using at least n_prime drawn samples, and compares it against
/// 2*eps^2/(n_prime*t^2) with eps the certified covering-radius bound.
ConcentrationReport check_concentration_bound(
    const Matrix& y, const Vector& alpha,
    const std::vector<std::vector<Index>>& clusters, Index n_prime, Scalar t,
    Index trials, std::uint64_t seed);

}  // namespace imh
