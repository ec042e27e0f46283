#include "imh/affinity.hpp"

#include "imh/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace imh {

namespace {

// Gaussian weights are strictly positive in exact arithmetic; keep that
// true under floating-point underflow so row sums never vanish.
constexpr Scalar kWeightFloor = std::numeric_limits<Scalar>::min();

void check_kernel_inputs(const Matrix& points, const Matrix& base, Index k, const Bandwidth& bw) {
  if (base.rows() == 0) throw ValidationError("base set is empty");
  if (points.cols() != base.cols())
    throw ValidationError("dimension mismatch: points have " + std::to_string(points.cols()) +
                          " dims, base has " + std::to_string(base.cols()));
  if (k < 1 || k > base.rows())
    throw ValidationError("neighbor count k=" + std::to_string(k) +
                          " must lie in [1, m=" + std::to_string(base.rows()) + "]");
  if (!(bw.sigma > 0) || !std::isfinite(bw.sigma))
    throw ValidationError("bandwidth sigma must be positive and finite");
}

// The k smallest distances, ties broken by lower base index.
void select_knn(const RowVector& sqdist, Index k, std::vector<Index>& order) {
  const Index m = sqdist.size();
  order.resize(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index(0));
  const auto closer = [&](Index a, Index b) {
    return sqdist(a) < sqdist(b) || (sqdist(a) == sqdist(b) && a < b);
  };
  if (k < m) std::nth_element(order.begin(), order.begin() + k, order.end(), closer);
  std::sort(order.begin(), order.begin() + k, closer);
}

}  // namespace

Matrix AffinityWeights::to_dense() const {
  Matrix dense = Matrix::Zero(rows(), cols);
  for (Index i = 0; i < rows(); ++i)
    for (Index s = 0; s < nnz_per_row(); ++s) dense(i, indices(i, s)) = values(i, s);
  return dense;
}

AffinityWeights knn_weights(const Matrix& points, const Matrix& base, Index k, const Bandwidth& bw) {
  check_kernel_inputs(points, base, k, bw);
  const Index n = points.rows();
  const Scalar inv_sigma2 = Scalar(1) / (bw.sigma * bw.sigma);

  AffinityWeights w;
  w.cols = base.rows();
  w.indices.resize(n, k);
  w.values.resize(n, k);
  w.normalized = false;

  std::vector<Index> order;
  for (Index begin = 0; begin < n; begin += kDistanceChunk) {
    const Index count = std::min(kDistanceChunk, n - begin);
    const Matrix d2 = pairwise_sqdist(points.middleRows(begin, count), base);
    for (Index local = 0; local < count; ++local) {
      const RowVector row = d2.row(local);
      select_knn(row, k, order);
      for (Index s = 0; s < k; ++s) {
        const Index j = order[static_cast<std::size_t>(s)];
        w.indices(begin + local, s) = j;
        w.values(begin + local, s) = std::max(kWeightFloor, std::exp(-row(j) * inv_sigma2));
      }
    }
  }
  return w;
}

AffinityWeights normalize_rows(const AffinityWeights& w) {
  AffinityWeights out = w;
  for (Index i = 0; i < out.rows(); ++i) {
    const Scalar sum = out.values.row(i).sum();
    if (!(sum > 0))
      throw ValidationError("affinity row " + std::to_string(i) + " has non-positive sum");
    out.values.row(i) /= sum;
  }
  out.normalized = true;
  return out;
}

Bandwidth choose_bandwidth(const Matrix& points, const Matrix& base, Index k,
                           Index sample_cap, std::uint64_t seed) {
  if (points.rows() == 0) throw ValidationError("empty point set");
  check_kernel_inputs(points, base, k, Bandwidth{1.0, Bandwidth::Heuristic::fixed});
  if (sample_cap < 1) throw ValidationError("sample_cap must be positive");

  std::vector<Index> rows(static_cast<std::size_t>(points.rows()));
  std::iota(rows.begin(), rows.end(), Index(0));
  if (points.rows() > sample_cap) {
    std::vector<Index> sampled;
    sampled.reserve(static_cast<std::size_t>(sample_cap));
    std::mt19937_64 rng(seed);
    std::sample(rows.begin(), rows.end(), std::back_inserter(sampled), sample_cap, rng);
    rows = std::move(sampled);
  }

  std::vector<Scalar> kth(rows.size());
  std::vector<Index> order;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const Matrix d2 = pairwise_sqdist(points.row(rows[s]), base);
    const RowVector row = d2.row(0);
    select_knn(row, k, order);
    kth[s] = std::sqrt(row(order[static_cast<std::size_t>(k - 1)]));
  }
  const Scalar sigma = std::accumulate(kth.begin(), kth.end(), Scalar(0)) / Scalar(kth.size());
  if (!(sigma > 0))
    throw Error(
        "bandwidth heuristic failed: every sampled point coincides with its k nearest base "
        "points; pass a fixed sigma instead");
  return Bandwidth{sigma, Bandwidth::Heuristic::mean_knn_dist};
}

Matrix base_affinity_graph(const Matrix& base, Index k, const Bandwidth& bw) {
  const Index m = base.rows();
  if (k >= m)
    throw ValidationError("base graph needs k < m (self excluded); got k=" + std::to_string(k) +
                          ", m=" + std::to_string(m));
  check_kernel_inputs(base, base, k, bw);
  const Scalar inv_sigma2 = Scalar(1) / (bw.sigma * bw.sigma);

  Matrix graph = Matrix::Zero(m, m);
  std::vector<Index> order;
  for (Index begin = 0; begin < m; begin += kDistanceChunk) {
    const Index count = std::min(kDistanceChunk, m - begin);
    const Matrix d2 = pairwise_sqdist(base.middleRows(begin, count), base);
    for (Index local = 0; local < count; ++local) {
      const Index i = begin + local;
      RowVector row = d2.row(local);
      row(i) = std::numeric_limits<Scalar>::infinity();  // exclude self
      select_knn(row, k, order);
      for (Index s = 0; s < k; ++s) {
        const Index j = order[static_cast<std::size_t>(s)];
        graph(i, j) = std::max(kWeightFloor, std::exp(-row(j) * inv_sigma2));
      }
    }
  }
  graph = graph.cwiseMax(graph.transpose().eval());
  graph.diagonal().setZero();
  return graph;
}

Matrix multiply(const AffinityWeights& w, const Matrix& y) {
  if (y.rows() != w.cols)
    throw ValidationError("shape mismatch: weights have " + std::to_string(w.cols) +
                          " columns, matrix has " + std::to_string(y.rows()) + " rows");
  Matrix out = Matrix::Zero(w.rows(), y.cols());
  for (Index i = 0; i < w.rows(); ++i)
    for (Index s = 0; s < w.nnz_per_row(); ++s)
      out.row(i) += w.values(i, s) * y.row(w.indices(i, s));
  return out;
}

}  // namespace imh
