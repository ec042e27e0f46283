#pragma once

#include "imh/affinity.hpp"
#include "imh/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace imh {

enum class EmbeddingBackend { tsne, le, le_base, pca };

std::string to_string(EmbeddingBackend backend);
EmbeddingBackend parse_embedding_backend(const std::string& name);

/// Low-dimensional embedding of the base set plus the offset that centers
/// the induced training-set embedding on the origin.
struct BaseEmbedding {
  Matrix values;         // m x r
  EmbeddingBackend backend = EmbeddingBackend::pca;
  Vector center_offset;  // r, zero until center_embedding() runs
  std::vector<std::string> warnings;

  Index size() const { return values.rows(); }
  Index dims() const { return values.cols(); }
};

struct TsneConfig {
  Scalar perplexity = 0;  // <= 0 means min(30, (m-1)/3)
  Index iters = 1000;
  Scalar learning_rate = 100.0;
  Scalar momentum_initial = 0.5;
  Scalar momentum_final = 0.8;
  Index momentum_switch_iter = 250;
  Scalar exaggeration = 4.0;
  Index exaggeration_iters = 100;
  std::uint64_t seed = 0;

  // pca init keeps the optimization a pure function of the base points;
  // random init draws N(0, 1e-4) coordinates from `seed`.
  enum class Init { pca, random } init = Init::pca;
};

/// Per-iteration KL divergence of the unexaggerated objective.
struct TsneTrace {
  std::vector<Scalar> kl;
};

/// Spectrum of the graph Laplacian L = D - W restricted to the complement
/// of the constant direction; the r smallest remaining modes, scaled by
/// sqrt(m). A disconnected graph is reported via `warnings` (its extra
/// near-zero modes are kept: they separate the components).
BaseEmbedding embed_le_base(const Matrix& w_base, Index r);

/// Two-block smoothness objective: the r smallest non-trivial eigenvectors
/// of M + lambda*T with M = D_B - W_B and T = D_cross - Wbar'W built from
/// the raw point-to-base weights `w_cross`. Result satisfies Y'Y = m*I.
/// `normalize_both` switches T to the variant using normalized weights for
/// both factors.
BaseEmbedding embed_le_relaxed(const Matrix& w_base, const AffinityWeights& w_cross,
                               Scalar lambda, Index r, bool normalize_both = false);

/// t-SNE on the base points: minimizes KL(P || Q) between perplexity-
/// calibrated input similarities and Student-t low-dimensional similarities
/// by gradient descent with momentum, gains and early exaggeration.
BaseEmbedding embed_tsne(const Matrix& base, Index r, const TsneConfig& cfg,
                         TsneTrace* trace = nullptr);

/// Centered base points projected onto the top-r principal directions.
BaseEmbedding embed_pca(const Matrix& base, Index r);

/// Principal directions shared by embed_pca and the PCAH baseline.
struct PcaBasis {
  Vector mean;         // d
  Matrix components;   // d x r, orthonormal columns
  Vector variances;    // r, descending
  std::vector<std::string> warnings;
};
PcaBasis pca_basis(const Matrix& data, Index r);

/// Store the column means of the induced training embedding Wbar * Y_B in
/// `emb.center_offset` so hashing can subtract them before thresholding.
/// `w_norm` must be row-normalized.
void center_embedding(BaseEmbedding& emb, const AffinityWeights& w_norm);

// t-SNE internals, exposed so tests can check the gradient and the KL
// identity cases independently of the optimizer loop.
Matrix tsne_input_probabilities(const Matrix& sqdist, Scalar perplexity);
Scalar tsne_kl_and_gradient(const Matrix& p, const Matrix& y, Matrix* grad);

}  // namespace imh
