#include "imh/prototype.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace imh;

namespace {

// Equal-sized contiguous clusters over 0..n-1.
std::vector<std::vector<Index>> contiguous_clusters(Index n, Index count) {
  std::vector<std::vector<Index>> clusters(static_cast<std::size_t>(count));
  for (Index i = 0; i < n; ++i) clusters[std::size_t(i * count / n)].push_back(i);
  return clusters;
}

Vector normalized_weights(Index n, std::uint64_t seed) {
  Matrix raw = test::random_matrix(n, 1, seed).cwiseAbs();
  Vector alpha = raw.col(0);
  alpha /= alpha.sum();
  return alpha;
}

}  // namespace

TEST_CASE("prototype: concentrated alpha reproduces that row for any seed") {
  const Matrix y = test::random_matrix(12, 3, 500);
  Vector alpha = Vector::Zero(12);
  alpha(7) = 1.0;
  const auto clusters = contiguous_clusters(12, 3);
  for (std::uint64_t seed : {1ull, 99ull, 12345ull}) {
    const PrototypeDraw draw = prototype_estimate(alpha, y, clusters, 4, seed);
    CHECK((draw.estimate - y.row(7).transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("prototype: two clusters of mass 0.5 with m=4 draw 3 samples each") {
  const Matrix y = test::random_matrix(10, 2, 501);
  Vector alpha = Vector::Constant(10, 0.1);
  const auto clusters = contiguous_clusters(10, 2);
  const PrototypeDraw draw = prototype_estimate(alpha, y, clusters, 4, 0);
  REQUIRE(draw.draw_counts.size() == 2);
  CHECK(draw.draw_counts[0] == 3);  // floor(4 * 0.5 + 1)
  CHECK(draw.draw_counts[1] == 3);
  CHECK(draw.total_draws == 6);
  CHECK(draw.cluster_mass[0] == doctest::Approx(0.5));
}

TEST_CASE("prototype: zero-mass clusters are skipped") {
  const Matrix y = test::random_matrix(9, 2, 502);
  Vector alpha = Vector::Zero(9);
  for (Index i = 0; i < 6; ++i) alpha(i) = 1.0 / 6.0;
  const auto clusters = contiguous_clusters(9, 3);  // last cluster has zero mass
  const PrototypeDraw draw = prototype_estimate(alpha, y, clusters, 5, 3);
  CHECK(draw.draw_counts[2] == 0);
  CHECK(draw.drawn[2].empty());
  for (Index i : draw.drawn[0]) CHECK(i < 3);
}

TEST_CASE("prototype: Monte-Carlo mean within 3 standard errors of the exact average") {
  const Index n = 20;
  const Matrix y = test::random_matrix(n, 2, 503);
  const Vector alpha = normalized_weights(n, 504);
  const auto clusters = contiguous_clusters(n, 4);
  const Vector exact = y.transpose() * alpha;

  const Index trials = 10000;
  Matrix estimates(trials, 2);
  for (Index t = 0; t < trials; ++t)
    estimates.row(t) =
        prototype_estimate(alpha, y, clusters, 4, mix_seed(2000, std::uint64_t(t)))
            .estimate.transpose();

  for (Index c = 0; c < 2; ++c) {
    const Scalar mean = estimates.col(c).mean();
    const Scalar var =
        (estimates.col(c).array() - mean).square().sum() / Scalar(trials - 1);
    const Scalar stderr_mean = std::sqrt(var / Scalar(trials));
    CHECK(std::abs(mean - exact(c)) <= 3 * stderr_mean + 1e-12);
  }
}

TEST_CASE("prototype input validation") {
  const Matrix y = test::random_matrix(6, 2, 505);
  Vector alpha = Vector::Constant(6, 1.0 / 6.0);
  auto clusters = contiguous_clusters(6, 2);
  CHECK_THROWS_AS(prototype_estimate(alpha, y, clusters, 0, 0), ValidationError);
  Vector bad = alpha;
  bad(0) = -0.1;
  CHECK_THROWS_AS(prototype_estimate(bad, y, clusters, 2, 0), ValidationError);
  Vector unnormalized = alpha * 2;
  CHECK_THROWS_AS(prototype_estimate(unnormalized, y, clusters, 2, 0), ValidationError);
  auto overlapping = clusters;
  overlapping[1].push_back(0);
  CHECK_THROWS_AS(prototype_estimate(alpha, y, overlapping, 2, 0), ValidationError);
}

TEST_CASE("greedy covering radius: hand instance and saturation") {
  Matrix y(3, 1);
  y << 0, 1, 10;
  CHECK(greedy_covering_radius(y, 2) == doctest::Approx(1.0));
  CHECK(greedy_covering_radius(y, 3) == 0.0);
  CHECK(greedy_covering_radius(y, 5) == 0.0);
}

TEST_CASE("concentration bound: identical rows never fail") {
  const Matrix y = Matrix::Ones(40, 3) * 2.5;
  Vector alpha = Vector::Constant(40, 1.0 / 40.0);
  const auto clusters = contiguous_clusters(40, 4);
  const ConcentrationReport report =
      check_concentration_bound(y, alpha, clusters, 10, 1e-6, 200, 7);
  CHECK(report.empirical == 0.0);
  CHECK(report.epsilon == 0.0);
  CHECK(report.pass);
}

TEST_CASE("concentration bound: huge t never fails empirically") {
  const Matrix y = test::random_matrix(50, 2, 506);
  const Vector alpha = normalized_weights(50, 507);
  const auto clusters = contiguous_clusters(50, 5);
  const ConcentrationReport report =
      check_concentration_bound(y, alpha, clusters, 10, 1e9, 100, 7);
  CHECK(report.empirical == 0.0);
  CHECK(report.pass);
}

TEST_CASE("concentration bound: tight clusters satisfy the bound") {
  // Three tight clusters in the embedding; the covering radius with >= 3
  // balls is the small within-cluster spread.
  const Index n = 90;
  Matrix y(n, 2);
  std::mt19937_64 rng(508);
  std::normal_distribution<Scalar> noise(0, 0.05);
  for (Index i = 0; i < n; ++i) {
    const Index c = i / 30;
    y(i, 0) = Scalar(c) * 10 + noise(rng);
    y(i, 1) = Scalar(c % 2) * 10 + noise(rng);
  }
  const Vector alpha = normalized_weights(n, 509);
  std::vector<std::vector<Index>> clusters(3);
  for (Index i = 0; i < n; ++i) clusters[std::size_t(i / 30)].push_back(i);

  const ConcentrationReport report =
      check_concentration_bound(y, alpha, clusters, 30, 0.5, 2000, 11);
  CHECK(report.bound < 1.0);
  CHECK(report.draws_used >= 30);
  CHECK(report.empirical <= report.bound);
  CHECK(report.pass);
}

TEST_CASE("concentration bound: odd n_prime is rejected") {
  const Matrix y = test::random_matrix(10, 2, 510);
  Vector alpha = Vector::Constant(10, 0.1);
  const auto clusters = contiguous_clusters(10, 2);
  CHECK_THROWS_AS(check_concentration_bound(y, alpha, clusters, 7, 1.0, 10, 0), ValidationError);
  CHECK_THROWS_AS(check_concentration_bound(y, alpha, clusters, 12, 1.0, 10, 0), ValidationError);
  CHECK_THROWS_AS(check_concentration_bound(y, alpha, clusters, 4, -1.0, 10, 0), ValidationError);
}
