#include "imh/base_select.hpp"

#include "imh/dataset.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace imh;

TEST_CASE("kmeans: m = n returns a permutation of the data with objective 0") {
  const Matrix data = test::random_matrix(12, 3, 1);
  const BaseSelection sel = kmeans(data, 12, KmeansOptions{}, 5);
  CHECK(sel.centers.rows() == 12);
  CHECK(sel.objective_history.back() == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<bool> matched(12, false);
  for (Index c = 0; c < 12; ++c) {
    bool found = false;
    for (Index i = 0; i < 12; ++i) {
      if (!matched[std::size_t(i)] && sel.centers.row(c) == data.row(i)) {
        matched[std::size_t(i)] = true;
        found = true;
        break;
      }
    }
    REQUIRE(found);
  }
}

TEST_CASE("kmeans: three separated clusters recover the exact per-cluster means") {
  SynthParams params;
  params.clusters = 3;
  params.dims = 4;
  params.separation = 40;
  params.noise = 0.5;
  const DataMatrix data = synth_manifold(SynthKind::gaussian_clusters, 300, params, 17);

  const BaseSelection sel = kmeans(data.values, 3, KmeansOptions{}, 3);

  // Oracle: exact means under the nearest-true-center assignment (= labels).
  Matrix means = Matrix::Zero(3, 4);
  Eigen::Vector3d counts = Eigen::Vector3d::Zero();
  for (Index i = 0; i < data.rows(); ++i) {
    means.row(data.labels[std::size_t(i)]) += data.values.row(i);
    counts(data.labels[std::size_t(i)]) += 1;
  }
  for (Index c = 0; c < 3; ++c) means.row(c) /= counts(c);

  for (Index c = 0; c < 3; ++c) {
    Scalar best = std::numeric_limits<Scalar>::max();
    for (Index o = 0; o < 3; ++o) best = std::min(best, (sel.centers.row(c) - means.row(o)).norm());
    CHECK(best < 1e-9);
  }
}

TEST_CASE("kmeans: objective history is monotone non-increasing") {
  const Matrix data = test::random_matrix(200, 6, 2);
  const BaseSelection sel = kmeans(data, 8, KmeansOptions{}, 7);
  REQUIRE(sel.objective_history.size() >= 2);
  for (std::size_t i = 1; i < sel.objective_history.size(); ++i)
    CHECK(sel.objective_history[i] <= sel.objective_history[i - 1] * (1 + 1e-12));
}

TEST_CASE("kmeans: pure function of (data, m, seed); clusters all nonempty") {
  const Matrix data = test::random_matrix(150, 4, 3);
  const BaseSelection a = kmeans(data, 20, KmeansOptions{}, 11);
  const BaseSelection b = kmeans(data, 20, KmeansOptions{}, 11);
  CHECK(a.centers == b.centers);
  CHECK(a.assignment == b.assignment);

  std::set<Index> used(a.assignment.begin(), a.assignment.end());
  CHECK(used.size() == 20);
  CHECK(a.centers.allFinite());
}

TEST_CASE("kmeans: distance matrix by-product matches brute force") {
  const Matrix data = test::random_matrix(40, 3, 4);
  const BaseSelection sel = kmeans(data, 5, KmeansOptions{50, true}, 2);
  REQUIRE(sel.distances_to_base.has_value());
  CHECK(sel.distances_to_base->rows() == 40);
  CHECK(sel.distances_to_base->cols() == 5);
  for (Index i = 0; i < 10; ++i)
    for (Index c = 0; c < 5; ++c)
      CHECK((*sel.distances_to_base)(i, c) ==
            doctest::Approx((data.row(i) - sel.centers.row(c)).squaredNorm()).epsilon(1e-10));
}

TEST_CASE("kmeans input validation") {
  const Matrix data = test::random_matrix(5, 2, 5);
  CHECK_THROWS_AS(kmeans(data, 6, KmeansOptions{}, 0), ValidationError);
  CHECK_THROWS_AS(kmeans(data, 0, KmeansOptions{}, 0), ValidationError);
  Matrix bad = data;
  bad(0, 0) = std::numeric_limits<Scalar>::quiet_NaN();
  CHECK_THROWS_AS(kmeans(bad, 2, KmeansOptions{}, 0), ValidationError);
}

TEST_CASE("random_sample: m=n selects every row; each center is an exact data row") {
  const Matrix data = test::random_matrix(9, 2, 6);
  const BaseSelection all = random_sample(data, 9, 3);
  std::vector<bool> matched(9, false);
  for (Index c = 0; c < 9; ++c) {
    bool found = false;
    for (Index i = 0; i < 9; ++i)
      if (!matched[std::size_t(i)] && all.centers.row(c) == data.row(i)) {
        matched[std::size_t(i)] = true;
        found = true;
        break;
      }
    REQUIRE(found);
  }

  const BaseSelection one = random_sample(data, 1, 3);
  bool is_row = false;
  for (Index i = 0; i < 9; ++i) is_row = is_row || one.centers.row(0) == data.row(i);
  CHECK(is_row);

  const BaseSelection again = random_sample(data, 4, 12);
  const BaseSelection again2 = random_sample(data, 4, 12);
  CHECK(again.centers == again2.centers);
  CHECK_THROWS_AS(random_sample(data, 10, 0), ValidationError);
}
