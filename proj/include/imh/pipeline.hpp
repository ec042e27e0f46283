#pragma once

#include "imh/base_select.hpp"
#include "imh/baselines.hpp"
#include "imh/dataset.hpp"
#include "imh/embeddings.hpp"
#include "imh/model.hpp"
#include "imh/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace imh {

enum class Method { imh_tsne, imh_le, imh_le_base, imh_pca, lsh, pcah };

std::string to_string(Method method);
Method parse_method(const std::string& name);
bool is_inductive(Method method);

/// Full training configuration; validated before any heavy compute.
struct TrainConfig {
  Method method = Method::imh_tsne;
  BaseMethod base_method = BaseMethod::kmeans;
  Index m = 400;
  Index k = 5;
  Index r = 64;
  Scalar lambda = 2.0;
  Scalar sigma = 0;  // <= 0 selects the mean k-NN distance heuristic
  Index kmeans_max_iters = 50;
  bool le_normalize_both = false;
  TsneConfig tsne;
  std::uint64_t seed = 0;

  /// Throws ValidationError naming the violated constraint; n or d may be
  /// -1 when unknown (pre-load validation).
  void validate(Index n = -1, Index d = -1) const;
};

struct StageTiming {
  std::string stage;
  double seconds;
};

/// Either an inductive model or a linear baseline model.
using TrainedModel = std::variant<HashModel, LinearHashModel>;

TrainedModel train(const DataMatrix& data, const TrainConfig& cfg,
                   std::vector<StageTiming>* timings = nullptr);

CodeSet encode(const TrainedModel& model, const DataMatrix& data);

Index model_code_length(const TrainedModel& model);
Index model_feature_dims(const TrainedModel& model);

void save_trained(const TrainedModel& model, const std::string& path);
TrainedModel load_trained(const std::string& path);  // dispatches on magic

/// Deterministic per-stage seed derivation: FNV-1a of the stage name mixed
/// with the run seed by a splitmix64 step, so every stage draws from an
/// independent stream of one documented run seed.
std::uint64_t fanout_seed(std::uint64_t run_seed, std::string_view stage);

}  // namespace imh
