#include "imh/embeddings.hpp"

#include "imh/distance.hpp"
#include "imh/eigh.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace imh {

std::string to_string(EmbeddingBackend backend) {
  switch (backend) {
    case EmbeddingBackend::tsne: return "tsne";
    case EmbeddingBackend::le: return "le";
    case EmbeddingBackend::le_base: return "le_base";
    case EmbeddingBackend::pca: return "pca";
  }
  return "unknown";
}

EmbeddingBackend parse_embedding_backend(const std::string& name) {
  if (name == "tsne") return EmbeddingBackend::tsne;
  if (name == "le") return EmbeddingBackend::le;
  if (name == "le_base") return EmbeddingBackend::le_base;
  if (name == "pca") return EmbeddingBackend::pca;
  throw ValidationError("unknown embedding backend: " + name);
}

namespace {

void check_base_graph(const Matrix& w, const char* who) {
  const Index m = w.rows();
  if (m < 2 || w.cols() != m) throw ValidationError(std::string(who) + ": affinity must be square, m >= 2");
  if (!w.allFinite()) throw ValidationError(std::string(who) + ": affinity has non-finite entries");
  const Scalar scale = std::max(Scalar(1), w.cwiseAbs().maxCoeff());
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ValidationError(std::string(who) + ": affinity is not symmetric");
  if (w.minCoeff() < 0) throw ValidationError(std::string(who) + ": affinity has negative weights");
  if (w.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError(std::string(who) + ": affinity diagonal is not zero");
}

/// Spectrum of the given symmetric matrix restricted to the complement of
/// the constant direction. A Householder reflector sends e_1 to 1/sqrt(m);
/// its remaining columns are an exact orthonormal basis of that complement,
/// so every returned eigenvector is orthogonal to 1 by construction (no
/// mode-identification needed even when the spectrum is degenerate).
struct DeflatedSpectrum {
  Vector eigenvalues;   // m-1 values, ascending
  Matrix eigenvectors;  // m x (m-1) orthonormal, all orthogonal to 1
};

DeflatedSpectrum deflate_constant_and_solve(const Matrix& sym) {
  const Index m = sym.rows();
  Vector w = Vector::Constant(m, Scalar(1) / std::sqrt(Scalar(m)));
  w(0) -= 1;  // u - e_1, never zero for m >= 2
  const Matrix reflector =
      Matrix::Identity(m, m) - (Scalar(2) / w.squaredNorm()) * (w * w.transpose());
  const auto complement = reflector.rightCols(m - 1);

  Matrix reduced = complement.transpose() * sym * complement;
  reduced = ((reduced + reduced.transpose()) * 0.5).eval();
  const SymmetricEigenResult eig = eigh(reduced);

  DeflatedSpectrum out;
  out.eigenvalues = eig.eigenvalues;
  out.eigenvectors = complement * eig.eigenvectors;
  // Canonical signs in the original coordinates.
  for (Index c = 0; c < m - 1; ++c) {
    Index best = 0;
    Scalar best_mag = std::abs(out.eigenvectors(0, c));
    for (Index i = 1; i < m; ++i) {
      const Scalar mag = std::abs(out.eigenvectors(i, c));
      if (mag > best_mag) { best_mag = mag; best = i; }
    }
    if (out.eigenvectors(best, c) < 0) out.eigenvectors.col(c) = -out.eigenvectors.col(c);
  }
  return out;
}

Index count_near_zero(const Vector& eigenvalues, Scalar reference) {
  const Scalar tol = 1e-9 * std::max(Scalar(1), reference);
  Index count = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues(i)) <= tol) ++count;
  return count;
}

}  // namespace

BaseEmbedding embed_le_base(const Matrix& w_base, Index r) {
  check_base_graph(w_base, "embed_le_base");
  const Index m = w_base.rows();
  if (r < 1 || r >= m)
    throw ValidationError("embed_le_base needs 1 <= r < m; got r=" + std::to_string(r) +
                          ", m=" + std::to_string(m));

  Matrix laplacian = (-w_base).eval();
  laplacian.diagonal() += w_base.rowwise().sum();

  const DeflatedSpectrum spectrum = deflate_constant_and_solve(laplacian);

  BaseEmbedding emb;
  emb.backend = EmbeddingBackend::le_base;
  const Index extra_null = count_near_zero(spectrum.eigenvalues, spectrum.eigenvalues.cwiseAbs().maxCoeff());
  if (extra_null > 0)
    emb.warnings.push_back("base graph appears disconnected: " + std::to_string(extra_null + 1) +
                           " near-zero Laplacian modes; component-indicator directions retained");
  emb.values = std::sqrt(Scalar(m)) * spectrum.eigenvectors.leftCols(r);
  emb.center_offset = Vector::Zero(r);
  return emb;
}

BaseEmbedding embed_le_relaxed(const Matrix& w_base, const AffinityWeights& w_cross,
                               Scalar lambda, Index r, bool normalize_both) {
  check_base_graph(w_base, "embed_le_relaxed");
  const Index m = w_base.rows();
  if (lambda < 0) throw ValidationError("embed_le_relaxed needs lambda >= 0");
  if (r < 1 || r >= m - 1)
    throw ValidationError("embed_le_relaxed needs 1 <= r < m-1; got r=" + std::to_string(r) +
                          ", m=" + std::to_string(m));
  if (w_cross.cols != m)
    throw ValidationError("cross affinity has " + std::to_string(w_cross.cols) +
                          " base columns, expected " + std::to_string(m));

  Matrix smoothness = (-w_base).eval();
  smoothness.diagonal() += w_base.rowwise().sum();

  // T = diag(colsum of raw weights) - Wbar' W, accumulated per sparse row.
  const AffinityWeights w_norm = w_cross.normalized ? w_cross : normalize_rows(w_cross);
  const AffinityWeights& right = normalize_both ? w_norm : w_cross;
  Vector column_mass = Vector::Zero(m);
  Matrix coupling = Matrix::Zero(m, m);
  for (Index i = 0; i < right.rows(); ++i) {
    for (Index s = 0; s < right.nnz_per_row(); ++s) {
      column_mass(right.indices(i, s)) += right.values(i, s);
      for (Index u = 0; u < w_norm.nnz_per_row(); ++u)
        coupling(w_norm.indices(i, u), right.indices(i, s)) +=
            w_norm.values(i, u) * right.values(i, s);
    }
  }
  Matrix cross_term = (-coupling).eval();
  cross_term.diagonal() += column_mass;

  Matrix objective = smoothness + lambda * cross_term;
  objective = ((objective + objective.transpose()) * 0.5).eval();

  const DeflatedSpectrum spectrum = deflate_constant_and_solve(objective);

  BaseEmbedding emb;
  emb.backend = EmbeddingBackend::le;
  emb.values = std::sqrt(Scalar(m)) * spectrum.eigenvectors.leftCols(r);
  emb.center_offset = Vector::Zero(r);
  return emb;
}

PcaBasis pca_basis(const Matrix& data, Index r) {
  const Index n = data.rows();
  const Index d = data.cols();
  if (n < 1) throw ValidationError("pca needs at least one row");
  if (r < 1 || r > std::min(n, d))
    throw ValidationError("pca needs 1 <= r <= min(n, d); got r=" + std::to_string(r) +
                          ", n=" + std::to_string(n) + ", d=" + std::to_string(d));

  PcaBasis basis;
  basis.mean = data.colwise().mean().transpose();
  Matrix centered = data.rowwise() - basis.mean.transpose();
  const Scalar denom = n > 1 ? Scalar(n - 1) : Scalar(1);

  basis.components.resize(d, r);
  basis.variances.resize(r);

  if (d <= n) {
    const Matrix covariance = (centered.transpose() * centered) / denom;
    const SymmetricEigenResult eig = eigh(covariance);
    for (Index c = 0; c < r; ++c) {
      basis.components.col(c) = eig.eigenvectors.col(d - 1 - c);
      basis.variances(c) = eig.eigenvalues(d - 1 - c);
    }
  } else {
    // Gram trick for wide data: spectrum of centered*centered' (n x n).
    const Matrix gram = (centered * centered.transpose()) / denom;
    const SymmetricEigenResult eig = eigh(gram);
    for (Index c = 0; c < r; ++c) {
      const Scalar value = eig.eigenvalues(n - 1 - c);
      basis.variances(c) = value;
      if (value > 1e-12) {
        Vector direction = centered.transpose() * eig.eigenvectors.col(n - 1 - c);
        basis.components.col(c) = direction / direction.norm();
      } else {
        basis.components.col(c).setZero();
      }
    }
    // Canonical signs, matching the covariance-path convention.
    for (Index c = 0; c < r; ++c) {
      Index best = 0;
      Scalar best_mag = std::abs(basis.components(0, c));
      for (Index i = 1; i < d; ++i)
        if (std::abs(basis.components(i, c)) > best_mag) {
          best_mag = std::abs(basis.components(i, c));
          best = i;
        }
      if (basis.components(best, c) < 0) basis.components.col(c) = -basis.components.col(c);
    }
  }

  Index deficient = 0;
  for (Index c = 0; c < r; ++c) {
    if (basis.variances(c) <= 1e-12 * std::max(Scalar(1), basis.variances(0))) {
      basis.components.col(c).setZero();
      basis.variances(c) = 0;
      ++deficient;
    }
  }
  if (deficient > 0)
    basis.warnings.push_back("rank deficiency: " + std::to_string(deficient) +
                             " of " + std::to_string(r) + " components zero-padded");
  return basis;
}

BaseEmbedding embed_pca(const Matrix& base, Index r) {
  const PcaBasis basis = pca_basis(base, r);
  BaseEmbedding emb;
  emb.backend = EmbeddingBackend::pca;
  emb.values = (base.rowwise() - basis.mean.transpose()) * basis.components;
  emb.center_offset = Vector::Zero(r);
  emb.warnings = basis.warnings;
  return emb;
}

Matrix tsne_input_probabilities(const Matrix& sqdist, Scalar perplexity) {
  const Index m = sqdist.rows();
  if (m < 4) throw ValidationError("tsne needs at least 4 points");
  if (!(perplexity > 0) || perplexity >= Scalar(m - 1) / 3)
    throw ValidationError("perplexity " + std::to_string(perplexity) +
                          " infeasible: needs 0 < perplexity < (m-1)/3 with m=" + std::to_string(m));
  const Scalar target_entropy = std::log(perplexity);

  Matrix conditional = Matrix::Zero(m, m);
  Vector row(m);
  for (Index i = 0; i < m; ++i) {
    Scalar beta = 1, beta_lo = 0, beta_hi = std::numeric_limits<Scalar>::infinity();
    // Bisection on the precision so the conditional entropy hits the target.
    for (int step = 0; step < 64; ++step) {
      Scalar sum = 0;
      for (Index j = 0; j < m; ++j) {
        row(j) = j == i ? 0 : std::exp(-beta * sqdist(i, j));
        sum += row(j);
      }
      Scalar entropy = 0;
      if (sum > 0)
        for (Index j = 0; j < m; ++j)
          if (row(j) > 0) {
            const Scalar p = row(j) / sum;
            entropy -= p * std::log(p);
          }
      if (std::abs(entropy - target_entropy) < 1e-7) break;
      if (entropy > target_entropy) {
        beta_lo = beta;
        beta = std::isinf(beta_hi) ? beta * 2 : (beta_lo + beta_hi) / 2;
      } else {
        beta_hi = beta;
        beta = (beta_lo + beta_hi) / 2;
      }
    }
    Scalar sum = 0;
    for (Index j = 0; j < m; ++j) {
      row(j) = j == i ? 0 : std::exp(-beta * sqdist(i, j));
      sum += row(j);
    }
    if (!(sum > 0)) {
      // Degenerate row (all finite weights underflowed): fall back to uniform.
      for (Index j = 0; j < m; ++j) row(j) = j == i ? 0 : 1;
      sum = Scalar(m - 1);
    }
    conditional.row(i) = row.transpose() / sum;
  }

  Matrix joint = (conditional + conditional.transpose()) / (2 * Scalar(m));
  return joint;
}

Scalar tsne_kl_and_gradient(const Matrix& p, const Matrix& y, Matrix* grad) {
  const Index m = y.rows();
  const Matrix d2 = pairwise_sqdist(y, y);
  Matrix num(m, m);
  Scalar z = 0;
  for (Index i = 0; i < m; ++i) {
    num(i, i) = 0;
    for (Index j = 0; j < m; ++j)
      if (j != i) {
        num(i, j) = Scalar(1) / (Scalar(1) + d2(i, j));
        z += num(i, j);
      }
  }

  Scalar kl = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (j != i && p(i, j) > 0) {
        const Scalar q = num(i, j) / z;
        kl += p(i, j) * std::log(p(i, j) / q);
      }

  if (grad) {
    // grad_i = 4 sum_j (p_ij - q_ij) num_ij (y_i - y_j)
    Matrix l = ((p - num / z).cwiseProduct(num)).eval();
    Vector row_sums = l.rowwise().sum();
    Matrix scaled = (-l).eval();
    scaled.diagonal() += row_sums;
    grad->noalias() = 4 * (scaled * y);
  }
  return kl;
}

BaseEmbedding embed_tsne(const Matrix& base, Index r, const TsneConfig& cfg, TsneTrace* trace) {
  const Index m = base.rows();
  if (m < 4) throw ValidationError("tsne needs at least 4 base points");
  if (r < 1) throw ValidationError("tsne needs r >= 1");
  const Scalar perplexity =
      cfg.perplexity > 0 ? cfg.perplexity : std::min(Scalar(30), (Scalar(m) - 1) / 3 - Scalar(0.01));
  if (cfg.iters < 1 || !(cfg.learning_rate > 0))
    throw ValidationError("tsne iterations and learning rate must be positive");

  const Matrix d2 = pairwise_sqdist(base, base);
  const Matrix p = tsne_input_probabilities(d2, perplexity);

  Matrix y(m, r);
  if (cfg.init == TsneConfig::Init::pca && std::min(m, base.cols()) >= r) {
    const BaseEmbedding pca = embed_pca(base, r);
    // Small-scale start, following common practice of ~1e-4 coordinates.
    const Scalar spread = std::sqrt(pca.values.col(0).squaredNorm() / Scalar(m));
    y = spread > 0 ? (pca.values * (1e-4 / spread)).eval() : Matrix::Zero(m, r);
    if (spread <= 0) {
      std::mt19937_64 rng(cfg.seed);
      std::normal_distribution<Scalar> normal(0, 1e-4);
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < r; ++j) y(i, j) = normal(rng);
    }
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<Scalar> normal(0, 1e-4);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < r; ++j) y(i, j) = normal(rng);
  }

  Matrix update = Matrix::Zero(m, r);
  Matrix gains = Matrix::Ones(m, r);
  Matrix grad(m, r);
  if (trace) trace->kl.clear();

  // Momentum-with-gains descent, safeguarded once exaggeration ends: a step
  // that raised the objective is rejected (position reverted, momentum
  // cleared, gains halved), so the accepted KL sequence is non-increasing.
  // Rejection reuses the objective already computed for this iteration.
  constexpr Scalar kMaxGain = 10.0;
  Scalar accepted_objective = std::numeric_limits<Scalar>::infinity();
  Matrix y_accepted = y;
  Matrix grad_accepted(m, r);

  for (Index iter = 0; iter < cfg.iters; ++iter) {
    const bool exaggerating = iter < cfg.exaggeration_iters;
    Scalar objective;
    if (exaggerating) {
      const Matrix boosted = p * cfg.exaggeration;
      objective = tsne_kl_and_gradient(boosted, y, &grad);
    } else {
      objective = tsne_kl_and_gradient(p, y, &grad);
    }
    if (!std::isfinite(objective))
      throw Error("tsne diverged (non-finite KL) at iteration " + std::to_string(iter));

    if (iter == cfg.exaggeration_iters)
      accepted_objective = std::numeric_limits<Scalar>::infinity();
    if (!exaggerating && objective > accepted_objective) {
      y = y_accepted;
      grad = grad_accepted;
      objective = accepted_objective;
      update.setZero();
      gains *= 0.5;
    } else {
      accepted_objective = objective;
      y_accepted = y;
      grad_accepted = grad;
    }
    if (trace)
      trace->kl.push_back(exaggerating ? tsne_kl_and_gradient(p, y, nullptr) : objective);

    const Scalar momentum =
        iter < cfg.momentum_switch_iter ? cfg.momentum_initial : cfg.momentum_final;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < r; ++j) {
        const bool same_direction = (grad(i, j) > 0) == (update(i, j) > 0);
        gains(i, j) = std::clamp(same_direction ? gains(i, j) * Scalar(0.8)
                                                : gains(i, j) + Scalar(0.2),
                                 Scalar(0.01), kMaxGain);
      }
    update = momentum * update - cfg.learning_rate * gains.cwiseProduct(grad);
    y += update;
    y.rowwise() -= y.colwise().mean();
  }
  y = y_accepted;  // the final step was never evaluated

  BaseEmbedding emb;
  emb.backend = EmbeddingBackend::tsne;
  emb.values = std::move(y);
  emb.center_offset = Vector::Zero(r);
  return emb;
}

void center_embedding(BaseEmbedding& emb, const AffinityWeights& w_norm) {
  if (!w_norm.normalized)
    throw ValidationError("center_embedding needs row-normalized weights");
  if (w_norm.cols != emb.size())
    throw ValidationError("weight columns do not match embedding rows");
  const Matrix training = multiply(w_norm, emb.values);
  emb.center_offset = training.colwise().mean().transpose();
}

}  // namespace imh
