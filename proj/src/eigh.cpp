#include "imh/eigh.hpp"

#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace imh {

namespace {

constexpr int kMaxSweeps = 64;

Scalar off_diagonal_norm(const Eigen::MatrixXd& a) {
  Scalar sum = 0;
  for (Index p = 0; p < a.rows(); ++p)
    for (Index q = p + 1; q < a.cols(); ++q) sum += a(p, q) * a(p, q);
  return std::sqrt(2 * sum);
}

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Index best = 0;
  Scalar best_mag = std::abs(v(0));
  for (Index i = 1; i < v.size(); ++i) {
    const Scalar mag = std::abs(v(i));
    if (mag > best_mag) { best_mag = mag; best = i; }
  }
  if (v(best) < 0) v = -v;
}

}  // namespace

SymmetricEigenResult eigh(const Matrix& a) {
  const Index m = a.rows();
  if (m == 0 || a.cols() != m) throw ValidationError("eigh needs a nonempty square matrix");
  if (!a.allFinite()) throw ValidationError("eigh input contains non-finite entries");
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ValidationError("eigh input is not symmetric within 1e-10");

  // Column-major working copies; rotations touch two rows and two columns.
  Eigen::MatrixXd work = ((a + a.transpose()) * 0.5).eval();
  Eigen::MatrixXd vectors = Eigen::MatrixXd::Identity(m, m);

  const Scalar frob = std::max(work.norm(), std::numeric_limits<Scalar>::min());
  const Scalar tol = 1e-15 * frob;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(work) <= tol) break;
    for (Index p = 0; p < m - 1; ++p) {
      for (Index q = p + 1; q < m; ++q) {
        if (std::abs(work(p, q)) <= tol / Scalar(m)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(work(p, p), work(p, q), work(q, q));
        work.applyOnTheLeft(p, q, rot.transpose());
        work.applyOnTheRight(p, q, rot);
        vectors.applyOnTheRight(p, q, rot);
      }
    }
  }

  for (Index i = 0; i < m; ++i) canonicalize_sign(vectors.col(i));

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(), [&](Index i, Index j) {
    if (work(i, i) != work(j, j)) return work(i, i) < work(j, j);
    // Equal eigenvalues: lexicographic order of the canonicalized vectors.
    for (Index rowi = 0; rowi < m; ++rowi) {
      if (vectors(rowi, i) != vectors(rowi, j)) return vectors(rowi, i) < vectors(rowi, j);
    }
    return i < j;
  });

  SymmetricEigenResult result;
  result.eigenvalues.resize(m);
  result.eigenvectors.resize(m, m);
  for (Index c = 0; c < m; ++c) {
    result.eigenvalues(c) = work(order[static_cast<std::size_t>(c)], order[static_cast<std::size_t>(c)]);
    result.eigenvectors.col(c) = vectors.col(order[static_cast<std::size_t>(c)]);
  }
  return result;
}

}  // namespace imh
