#include "imh/pipeline.hpp"

#include "io_util.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>

namespace imh {

std::string to_string(Method method) {
  switch (method) {
    case Method::imh_tsne: return "imh-tsne";
    case Method::imh_le: return "imh-le";
    case Method::imh_le_base: return "imh-le-base";
    case Method::imh_pca: return "imh-pca";
    case Method::lsh: return "lsh";
    case Method::pcah: return "pcah";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "imh-tsne") return Method::imh_tsne;
  if (name == "imh-le") return Method::imh_le;
  if (name == "imh-le-base") return Method::imh_le_base;
  if (name == "imh-pca") return Method::imh_pca;
  if (name == "lsh") return Method::lsh;
  if (name == "pcah") return Method::pcah;
  throw ValidationError("unknown method: " + name +
                        " (imh-tsne|imh-le|imh-le-base|imh-pca|lsh|pcah)");
}

bool is_inductive(Method method) {
  return method != Method::lsh && method != Method::pcah;
}

std::uint64_t fanout_seed(std::uint64_t run_seed, std::string_view stage) {
  // FNV-1a over the stage name, then one splitmix64 step of the mix.
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : stage) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::uint64_t z = h ^ (run_seed + 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void TrainConfig::validate(Index n, Index d) const {
  if (m < 1) throw ValidationError("config: m must be >= 1");
  if (r < 1) throw ValidationError("config: r must be >= 1");
  if (is_inductive(method) && (k < 1 || k > m))
    throw ValidationError("config: k must lie in [1, m]");
  if (lambda < 0) throw ValidationError("config: lambda must be >= 0");
  if (kmeans_max_iters < 1) throw ValidationError("config: kmeans max iterations must be >= 1");
  if (method == Method::imh_le_base && r >= m)
    throw ValidationError("config: le-base backend needs r < m");
  if (method == Method::imh_le && r >= m - 1)
    throw ValidationError("config: le backend needs r < m - 1");
  if (method == Method::imh_tsne && m < 4)
    throw ValidationError("config: tsne backend needs m >= 4");
  if (method == Method::imh_tsne && tsne.perplexity > 0 && tsne.perplexity >= Scalar(m - 1) / 3)
    throw ValidationError("config: tsne perplexity must be < (m-1)/3");
  if (n >= 0 && is_inductive(method) && m > n)
    throw ValidationError("config: m=" + std::to_string(m) + " exceeds dataset size n=" +
                          std::to_string(n));
  if (d >= 0 && method == Method::imh_pca && r > std::min(m, d))
    throw ValidationError("config: pca backend needs r <= min(m, d)");
  if (d >= 0 && n >= 0 && method == Method::pcah && r > std::min(n, d))
    throw ValidationError("config: pcah needs r <= min(n, d)");
}

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>* sink) : sink_(sink) {}

  template <typename F>
  auto time(const std::string& stage, F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    if (sink_)
      sink_->push_back(
          {stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    return result;
  }

 private:
  std::vector<StageTiming>* sink_;
};

}  // namespace

TrainedModel train(const DataMatrix& data, const TrainConfig& cfg,
                   std::vector<StageTiming>* timings) {
  data.validate();
  cfg.validate(data.rows(), data.dims());
  StageClock clock(timings);

  if (cfg.method == Method::lsh) {
    return clock.time("fit", [&] {
      LinearHashModel model = lsh_fit(data.values, cfg.r, fanout_seed(cfg.seed, "lsh"));
      return TrainedModel(std::move(model));
    });
  }
  if (cfg.method == Method::pcah) {
    return clock.time("fit", [&] { return TrainedModel(pcah_fit(data.values, cfg.r)); });
  }

  const BaseSelection base = clock.time("base-select", [&] {
    return cfg.base_method == BaseMethod::kmeans
               ? kmeans(data.values, cfg.m, KmeansOptions{cfg.kmeans_max_iters, false},
                        fanout_seed(cfg.seed, "base-select"))
               : random_sample(data.values, cfg.m, fanout_seed(cfg.seed, "base-select"));
  });

  const Bandwidth bw = clock.time("bandwidth", [&] {
    return cfg.sigma > 0
               ? Bandwidth{cfg.sigma, Bandwidth::Heuristic::fixed}
               : choose_bandwidth(data.values, base.centers, cfg.k, 1024,
                                  fanout_seed(cfg.seed, "bandwidth"));
  });

  // Point-to-base weights serve both the relaxed-LE coupling term and the
  // centering step; compute them once.
  const AffinityWeights cross = clock.time("extension-weights", [&] {
    return knn_weights(data.values, base.centers, cfg.k, bw);
  });

  BaseEmbedding embedding = clock.time("embed", [&]() -> BaseEmbedding {
    switch (cfg.method) {
      case Method::imh_tsne: {
        TsneConfig tsne_cfg = cfg.tsne;
        tsne_cfg.seed = fanout_seed(cfg.seed, "tsne");
        return embed_tsne(base.centers, cfg.r, tsne_cfg);
      }
      case Method::imh_le_base:
        return embed_le_base(base_affinity_graph(base.centers, cfg.k, bw), cfg.r);
      case Method::imh_le:
        return embed_le_relaxed(base_affinity_graph(base.centers, cfg.k, bw), cross,
                                cfg.lambda, cfg.r, cfg.le_normalize_both);
      case Method::imh_pca:
        return embed_pca(base.centers, cfg.r);
      default:
        throw ValidationError("not an inductive method");
    }
  });

  HashModel model;
  model.centers = base.centers;
  model.embedding = std::move(embedding);
  model.bandwidth = bw;
  model.k = cfg.k;

  clock.time("center", [&] {
    center_embedding(model.embedding, normalize_rows(cross));
    return 0;
  });

  model.validate();
  return TrainedModel(std::move(model));
}

CodeSet encode(const TrainedModel& model, const DataMatrix& data) {
  data.validate();
  return std::visit(
      [&](const auto& concrete) -> CodeSet {
        using T = std::decay_t<decltype(concrete)>;
        if constexpr (std::is_same_v<T, HashModel>) {
          if (data.dims() != concrete.feature_dims())
            throw ValidationError("data has " + std::to_string(data.dims()) +
                                  " dims, model expects " +
                                  std::to_string(concrete.feature_dims()));
          return hash(concrete, data.values, data.ids);
        } else {
          return linear_encode(concrete, data.values, data.ids);
        }
      },
      model);
}

Index model_code_length(const TrainedModel& model) {
  return std::visit([](const auto& concrete) { return concrete.code_length(); }, model);
}

Index model_feature_dims(const TrainedModel& model) {
  return std::visit([](const auto& concrete) { return concrete.feature_dims(); }, model);
}

void save_trained(const TrainedModel& model, const std::string& path) {
  std::visit(
      [&](const auto& concrete) {
        using T = std::decay_t<decltype(concrete)>;
        if constexpr (std::is_same_v<T, HashModel>) {
          save_model(concrete, path);
        } else {
          save_linear_model(concrete, path);
        }
      },
      model);
}

TrainedModel load_trained(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open file: " + path);
  char magic[4] = {};
  is.read(magic, 4);
  if (!is) throw FormatError(path + ": too small to be a model container");
  if (std::memcmp(magic, "IMHM", 4) == 0) return TrainedModel(load_model(path));
  if (std::memcmp(magic, "IMHP", 4) == 0) return TrainedModel(load_linear_model(path));
  throw FormatError(path + ": not a model container (bad magic)");
}

}  // namespace imh
