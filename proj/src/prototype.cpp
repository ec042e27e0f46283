#include "imh/prototype.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace imh {

namespace {

void check_partition(const Vector& alpha, const Matrix& y,
                     const std::vector<std::vector<Index>>& clusters) {
  const Index n = y.rows();
  if (alpha.size() != n) throw ValidationError("alpha length does not match embedding rows");
  if (alpha.minCoeff() < 0) throw ValidationError("alpha must be nonnegative");
  if (std::abs(alpha.sum() - 1) > 1e-8)
    throw ValidationError("alpha must sum to 1 (got " + std::to_string(alpha.sum()) + ")");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Index covered = 0;
  for (const auto& cluster : clusters)
    for (Index i : cluster) {
      if (i < 0 || i >= n) throw ValidationError("cluster index out of range");
      if (seen[static_cast<std::size_t>(i)]) throw ValidationError("clusters overlap at index " + std::to_string(i));
      seen[static_cast<std::size_t>(i)] = 1;
      ++covered;
    }
  if (covered != n) throw ValidationError("clusters do not cover every row");
}

}  // namespace

PrototypeDraw prototype_estimate(const Vector& alpha, const Matrix& y,
                                 const std::vector<std::vector<Index>>& clusters,
                                 Index m, std::uint64_t seed) {
  check_partition(alpha, y, clusters);
  if (m < 1) throw ValidationError("prototype_estimate needs m >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> uniform(0, 1);

  PrototypeDraw draw;
  draw.cluster_mass.reserve(clusters.size());
  draw.draw_counts.reserve(clusters.size());
  draw.drawn.resize(clusters.size());
  draw.estimate = Vector::Zero(y.cols());

  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& members = clusters[c];
    Scalar mass = 0;
    for (Index i : members) mass += alpha(i);
    draw.cluster_mass.push_back(mass);
    if (!(mass > 0)) {
      draw.draw_counts.push_back(0);
      continue;  // zero-mass cluster: the draw law is undefined, skip
    }
    const Index count = static_cast<Index>(std::floor(Scalar(m) * mass + 1));
    draw.draw_counts.push_back(count);
    draw.drawn[c].reserve(static_cast<std::size_t>(count));

    Vector sum = Vector::Zero(y.cols());
    for (Index t = 0; t < count; ++t) {
      // Inverse-CDF draw with Pr(i) = alpha_i / mass within the cluster.
      const Scalar u = uniform(rng) * mass;
      Scalar acc = 0;
      Index picked = members.back();
      for (Index i : members) {
        acc += alpha(i);
        if (u < acc) { picked = i; break; }
      }
      draw.drawn[c].push_back(picked);
      sum += y.row(picked).transpose();
      ++draw.total_draws;
    }
    draw.estimate += (mass / Scalar(count)) * sum;
  }
  return draw;
}

Scalar greedy_covering_radius(const Matrix& y, Index centers) {
  const Index n = y.rows();
  if (n == 0) throw ValidationError("empty point set");
  if (centers < 1) throw ValidationError("need at least one covering ball");
  if (centers >= n) return 0;

  Vector min_d2 = (y.rowwise() - y.row(0)).rowwise().squaredNorm();
  for (Index c = 1; c < centers; ++c) {
    Index farthest = 0;
    Scalar best = -1;
    for (Index i = 0; i < n; ++i)
      if (min_d2(i) > best) { best = min_d2(i); farthest = i; }
    const Vector d2 = (y.rowwise() - y.row(farthest)).rowwise().squaredNorm();
    min_d2 = min_d2.cwiseMin(d2);
  }
  return std::sqrt(min_d2.maxCoeff());
}

ConcentrationReport check_concentration_bound(
    const Matrix& y, const Vector& alpha, const std::vector<std::vector<Index>>& clusters,
    Index n_prime, Scalar t, Index trials, std::uint64_t seed) {
  check_partition(alpha, y, clusters);
  if (n_prime < 2 || n_prime % 2 != 0)
    throw ValidationError("n_prime must be a positive even number");
  if (n_prime > y.rows()) throw ValidationError("n_prime exceeds the point count");
  if (!(t > 0)) throw ValidationError("t must be positive");
  if (trials < 1) throw ValidationError("need at least one trial");

  // Smallest draw parameter whose total sample count reaches n_prime, so
  // each trial uses at least n_prime nonzero samples (the stated bound is
  // then conservative for the actual draw count).
  const auto total_draws_for = [&](Index m) {
    Index total = 0;
    for (const auto& cluster : clusters) {
      Scalar mass = 0;
      for (Index i : cluster) mass += alpha(i);
      if (mass > 0) total += static_cast<Index>(std::floor(Scalar(m) * mass + 1));
    }
    return total;
  };
  Index m_draw = 1;
  while (total_draws_for(m_draw) < n_prime) ++m_draw;

  const Vector exact = y.transpose() * alpha;
  ConcentrationReport report;
  report.n_prime = n_prime;
  report.t = t;
  report.trials = trials;
  report.epsilon = greedy_covering_radius(y, n_prime / 2);
  report.bound = 2 * report.epsilon * report.epsilon / (Scalar(n_prime) * t * t);

  Index failures = 0;
  for (Index trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = mix_seed(seed, std::uint64_t(trial));
    const PrototypeDraw draw = prototype_estimate(alpha, y, clusters, m_draw, trial_seed);
    if (trial == 0) report.draws_used = draw.total_draws;
    if ((draw.estimate - exact).norm() >= t) ++failures;
  }
  report.empirical = Scalar(failures) / Scalar(trials);
  report.pass = report.empirical <= report.bound;
  return report;
}

}  // namespace imh
