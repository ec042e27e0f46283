#include "imh/eigh.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cstring>

using namespace imh;

TEST_CASE("eigh: identity matrix has all eigenvalues 1") {
  const Matrix a = Matrix::Identity(5, 5);
  const SymmetricEigenResult eig = eigh(a);
  for (Index i = 0; i < 5; ++i) CHECK(eig.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eigh: diag(3,1,2) sorts to (1,2,3) with axis eigenvectors") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 3;
  a(1, 1) = 1;
  a(2, 2) = 2;
  const SymmetricEigenResult eig = eigh(a);
  CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(eig.eigenvalues(2) == doctest::Approx(3.0));
  CHECK(eig.eigenvectors(1, 0) == doctest::Approx(1.0));
  CHECK(eig.eigenvectors(2, 1) == doctest::Approx(1.0));
  CHECK(eig.eigenvectors(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("eigh: random symmetric 10x10 reconstructs and is orthonormal") {
  const Matrix a = test::random_symmetric(10, 77);
  const SymmetricEigenResult eig = eigh(a);

  const Matrix reconstructed =
      eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
  CHECK((reconstructed - a).cwiseAbs().maxCoeff() < 1e-8);

  const Matrix gram = eig.eigenvectors.transpose() * eig.eigenvectors;
  CHECK((gram - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-10);

  const Scalar scale = a.norm();
  for (Index i = 0; i < 10; ++i) {
    const Vector residual = a * eig.eigenvectors.col(i) - eig.eigenvalues(i) * eig.eigenvectors.col(i);
    CHECK(residual.norm() <= 1e-8 * scale);
  }
}

TEST_CASE("eigh: eigenvalues match an independent dense solver") {
  const Matrix a = test::random_symmetric(24, 99);
  const SymmetricEigenResult mine = eigh(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(
      Eigen::MatrixXd(a.cast<double>()));
  for (Index i = 0; i < 24; ++i)
    CHECK(mine.eigenvalues(i) == doctest::Approx(oracle.eigenvalues()(i)).epsilon(1e-9));
}

TEST_CASE("eigh: identical input bits give identical output bits") {
  const Matrix a = test::random_symmetric(15, 5);
  const SymmetricEigenResult first = eigh(a);
  const SymmetricEigenResult second = eigh(a);
  CHECK(std::memcmp(first.eigenvalues.data(), second.eigenvalues.data(), sizeof(Scalar) * 15) == 0);
  CHECK(std::memcmp(first.eigenvectors.data(), second.eigenvectors.data(),
                    sizeof(Scalar) * 15 * 15) == 0);
}

TEST_CASE("eigh: canonical signs (largest-magnitude entry positive)") {
  const Matrix a = test::random_symmetric(8, 6);
  const SymmetricEigenResult eig = eigh(a);
  for (Index c = 0; c < 8; ++c) {
    Index best = 0;
    for (Index i = 1; i < 8; ++i)
      if (std::abs(eig.eigenvectors(i, c)) > std::abs(eig.eigenvectors(best, c))) best = i;
    CHECK(eig.eigenvectors(best, c) > 0);
  }
}

TEST_CASE("eigh input validation") {
  Matrix asym = test::random_matrix(4, 4, 8);
  asym(0, 1) += 1.0;
  CHECK_THROWS_AS(eigh(asym), ValidationError);

  Matrix nan = test::random_symmetric(3, 9);
  nan(1, 1) = std::numeric_limits<Scalar>::quiet_NaN();
  CHECK_THROWS_AS(eigh(nan), ValidationError);

  CHECK_THROWS_AS(eigh(Matrix(0, 0)), ValidationError);
}
