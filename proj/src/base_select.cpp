#include "imh/base_select.hpp"

#include "imh/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace imh {

std::string to_string(BaseMethod method) {
  return method == BaseMethod::kmeans ? "kmeans" : "random";
}

BaseMethod parse_base_method(const std::string& name) {
  if (name == "kmeans") return BaseMethod::kmeans;
  if (name == "random") return BaseMethod::random;
  throw ValidationError("unknown base selection method: " + name);
}

namespace {

void check_selection_inputs(const Matrix& data, Index m) {
  if (m < 1) throw ValidationError("base size m must be >= 1");
  if (m > data.rows())
    throw ValidationError("base size m=" + std::to_string(m) +
                          " exceeds dataset size n=" + std::to_string(data.rows()));
  if (!data.allFinite()) throw ValidationError("data contains non-finite values");
}

// Inverse-CDF draw from unnormalized nonnegative weights.
Index draw_weighted(const std::vector<Scalar>& weights, Scalar total, std::mt19937_64& rng) {
  std::uniform_real_distribution<Scalar> uniform(0, total);
  const Scalar u = uniform(rng);
  Scalar acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<Index>(i);
  }
  return static_cast<Index>(weights.size() - 1);
}

Matrix kmeanspp_init(const Matrix& data, Index m, std::mt19937_64& rng) {
  const Index n = data.rows();
  Matrix centers(m, data.cols());
  std::uniform_int_distribution<Index> first(0, n - 1);
  centers.row(0) = data.row(first(rng));

  std::vector<Scalar> min_d2(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    min_d2[static_cast<std::size_t>(i)] = (data.row(i) - centers.row(0)).squaredNorm();

  for (Index c = 1; c < m; ++c) {
    const Scalar total = std::accumulate(min_d2.begin(), min_d2.end(), Scalar(0));
    Index pick;
    if (total > 0) {
      pick = draw_weighted(min_d2, total, rng);
    } else {
      // All remaining mass at distance zero: any row works; stay deterministic.
      std::uniform_int_distribution<Index> any(0, n - 1);
      pick = any(rng);
    }
    centers.row(c) = data.row(pick);
    for (Index i = 0; i < n; ++i) {
      const Scalar d2 = (data.row(i) - centers.row(c)).squaredNorm();
      min_d2[static_cast<std::size_t>(i)] = std::min(min_d2[static_cast<std::size_t>(i)], d2);
    }
  }
  return centers;
}

}  // namespace

BaseSelection kmeans(const Matrix& data, Index m, const KmeansOptions& opts, std::uint64_t seed) {
  check_selection_inputs(data, m);
  if (opts.max_iters < 1) throw ValidationError("kmeans needs max_iters >= 1");
  const Index n = data.rows();
  const Index d = data.cols();

  std::mt19937_64 rng(seed);
  Matrix centers = kmeanspp_init(data, m, rng);

  BaseSelection result;
  result.method = BaseMethod::kmeans;
  result.assignment.assign(static_cast<std::size_t>(n), 0);

  std::vector<Index> counts(static_cast<std::size_t>(m));
  std::vector<Scalar> point_d2(static_cast<std::size_t>(n));

  for (Index iter = 0; iter < opts.max_iters; ++iter) {
    // Assignment against the current centers; also the objective value.
    bool changed = false;
    Scalar objective = 0;
    for (Index begin = 0; begin < n; begin += kDistanceChunk) {
      const Index count = std::min(kDistanceChunk, n - begin);
      const Matrix d2 = pairwise_sqdist(data.middleRows(begin, count), centers);
      for (Index local = 0; local < count; ++local) {
        Index best = 0;
        Scalar best_d2 = d2(local, 0);
        for (Index c = 1; c < m; ++c)
          if (d2(local, c) < best_d2) { best_d2 = d2(local, c); best = c; }
        const std::size_t idx = static_cast<std::size_t>(begin + local);
        if (result.assignment[idx] != best) { result.assignment[idx] = best; changed = true; }
        point_d2[idx] = best_d2;
        objective += best_d2;
      }
    }
    result.objective_history.push_back(objective);
    if (!changed && iter > 0) break;

    // Mean update, accumulating in point order.
    Matrix sums = Matrix::Zero(m, d);
    std::fill(counts.begin(), counts.end(), Index(0));
    for (Index i = 0; i < n; ++i) {
      sums.row(result.assignment[static_cast<std::size_t>(i)]) += data.row(i);
      ++counts[static_cast<std::size_t>(result.assignment[static_cast<std::size_t>(i)])];
    }

    // Re-seed empty clusters from the farthest points.
    std::vector<Index> by_distance;
    for (Index c = 0; c < m; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / Scalar(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      if (by_distance.empty()) {
        by_distance.resize(static_cast<std::size_t>(n));
        std::iota(by_distance.begin(), by_distance.end(), Index(0));
        std::sort(by_distance.begin(), by_distance.end(), [&](Index a, Index b) {
          return point_d2[static_cast<std::size_t>(a)] > point_d2[static_cast<std::size_t>(b)] ||
                 (point_d2[static_cast<std::size_t>(a)] == point_d2[static_cast<std::size_t>(b)] && a < b);
        });
      }
      bool reseeded = false;
      for (Index candidate : by_distance) {
        const Index owner = result.assignment[static_cast<std::size_t>(candidate)];
        if (counts[static_cast<std::size_t>(owner)] > 1) {
          centers.row(c) = data.row(candidate);
          --counts[static_cast<std::size_t>(owner)];
          sums.row(owner) -= data.row(candidate);
          centers.row(owner) = sums.row(owner) / Scalar(counts[static_cast<std::size_t>(owner)]);
          counts[static_cast<std::size_t>(c)] = 1;
          result.assignment[static_cast<std::size_t>(candidate)] = c;
          reseeded = true;
          break;
        }
      }
      if (!reseeded) centers.row(c) = data.row(0);
    }
  }

  // Final assignment pass so assignment/distances match the returned centers.
  Scalar objective = 0;
  std::optional<Matrix> distances;
  if (opts.keep_distances) distances.emplace(n, m);
  for (Index begin = 0; begin < n; begin += kDistanceChunk) {
    const Index count = std::min(kDistanceChunk, n - begin);
    const Matrix d2 = pairwise_sqdist(data.middleRows(begin, count), centers);
    for (Index local = 0; local < count; ++local) {
      Index best = 0;
      Scalar best_d2 = d2(local, 0);
      for (Index c = 1; c < m; ++c)
        if (d2(local, c) < best_d2) { best_d2 = d2(local, c); best = c; }
      result.assignment[static_cast<std::size_t>(begin + local)] = best;
      objective += best_d2;
    }
    if (distances) distances->middleRows(begin, count) = d2;
  }
  result.objective_history.push_back(objective);
  result.centers = std::move(centers);
  result.distances_to_base = std::move(distances);
  return result;
}

BaseSelection random_sample(const Matrix& data, Index m, std::uint64_t seed) {
  check_selection_inputs(data, m);
  std::vector<Index> all(static_cast<std::size_t>(data.rows()));
  std::iota(all.begin(), all.end(), Index(0));
  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(m));
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), m, rng);

  BaseSelection result;
  result.method = BaseMethod::random;
  result.centers.resize(m, data.cols());
  for (Index c = 0; c < m; ++c) result.centers.row(c) = data.row(picked[static_cast<std::size_t>(c)]);
  return result;
}

}  // namespace imh
