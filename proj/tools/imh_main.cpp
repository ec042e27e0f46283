// Command-line front end: train | encode | query | eval | bench.
//
// Dataset arguments accept either a file path (.imhd/.csv/.fvecs/.bvecs/IDX,
// or --format to force one) or an inline synthetic spec
// "synth:<kind>:<n>:<seed>" with kind in {swiss_roll, gaussian_clusters,
// digits}. All randomness derives from --seed through named stage streams,
// so reruns with the same config and seed produce byte-identical artifacts.

#include "imh/pipeline.hpp"

#include "imh/eval.hpp"
#include "imh/prototype.hpp"
#include "imh/search.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace imh::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Shared helpers

struct DatasetOptions {
  std::string spec;                // path or synth:kind:n:seed
  std::string format = "auto";     // auto|csv|lcsv|idx|fvecs|bvecs|native
  std::string labels_path;         // optional IDX label file
  std::string normalize = "none";  // none|l2
};

DataMatrix load_dataset(const DatasetOptions& opts) {
  if (opts.spec.empty()) throw ValidationError("no dataset given");
  DataMatrix data;
  if (opts.spec.rfind("synth:", 0) == 0) {
    std::stringstream parts(opts.spec.substr(6));
    std::string kind_name, n_str, seed_str;
    std::getline(parts, kind_name, ':');
    std::getline(parts, n_str, ':');
    std::getline(parts, seed_str, ':');
    if (kind_name.empty() || n_str.empty())
      throw ValidationError("synthetic spec must look like synth:<kind>:<n>[:<seed>]");
    const SynthKind kind = parse_synth_kind(kind_name);
    const Index n = std::stoll(n_str);
    const std::uint64_t seed = seed_str.empty() ? 0 : std::stoull(seed_str);
    data = synth_manifold(kind, n, SynthParams{}, seed);
  } else if (opts.format == "auto") {
    data = load_auto(opts.spec);
  } else if (opts.format == "csv") {
    data = load_csv(opts.spec, false);
  } else if (opts.format == "lcsv") {
    data = load_csv(opts.spec, true);
  } else if (opts.format == "idx") {
    data = load_idx(opts.spec);
  } else if (opts.format == "fvecs") {
    data = load_vecs(opts.spec, VecsKind::fvecs);
  } else if (opts.format == "bvecs") {
    data = load_vecs(opts.spec, VecsKind::bvecs);
  } else if (opts.format == "native") {
    data = load_native(opts.spec);
  } else {
    throw ValidationError("unknown dataset format: " + opts.format);
  }
  if (!opts.labels_path.empty()) attach_labels(data, load_idx(opts.labels_path));
  if (opts.normalize == "l2") {
    scale_unit_norm(data);
  } else if (opts.normalize != "none") {
    throw ValidationError("unknown normalization: " + opts.normalize + " (none|l2)");
  }
  return data;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

/// Canonical key=value serialization; the FNV-1a hash of it identifies a run.
std::uint64_t config_hash(const std::map<std::string, std::string>& entries) {
  std::string canonical;
  for (const auto& [key, value] : entries) canonical += key + "=" + value + "\n";
  return fnv1a(canonical);
}

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

void write_manifest(const fs::path& path, const json& body) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError("cannot open file for writing: " + path.string());
  os << body.dump(2) << "\n";
}

json timings_json(const std::vector<StageTiming>& timings) {
  json j = json::array();
  for (const auto& t : timings) j.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  return j;
}

/// If a train manifest sits next to the model, its config hash must match
/// the one stored in the model file.
void verify_model_manifest(const std::string& model_path, std::uint64_t model_hash) {
  const fs::path manifest_path = fs::path(model_path).parent_path() / "train_manifest.json";
  if (!fs::exists(manifest_path)) return;
  std::ifstream is(manifest_path);
  json manifest;
  is >> manifest;
  if (!manifest.contains("config_hash")) return;
  const std::string recorded = manifest["config_hash"].get<std::string>();
  if (recorded != hex64(model_hash))
    throw ValidationError("model config hash " + hex64(model_hash) +
                          " does not match the train manifest (" + recorded +
                          "); the model was not produced by that manifest");
}

std::uint64_t trained_config_hash(const TrainedModel& model) {
  return std::visit([](const auto& concrete) { return concrete.config_hash; }, model);
}

// ---------------------------------------------------------------------------
// train

struct TrainCli {
  DatasetOptions data;
  std::string method = "imh-tsne";
  std::string base = "kmeans";
  Index m = 400, k = 5, r = 64;
  double lambda = 2.0;
  std::string sigma = "auto";
  Index kmeans_iters = 50;
  bool le_normalize_both = false;
  double tsne_perplexity = 0;
  Index tsne_iters = 1000;
  double tsne_lr = 100.0;
  std::string tsne_init = "pca";
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

TrainConfig to_train_config(const TrainCli& cli) {
  TrainConfig cfg;
  cfg.method = parse_method(cli.method);
  cfg.base_method = parse_base_method(cli.base);
  cfg.m = cli.m;
  cfg.k = cli.k;
  cfg.r = cli.r;
  cfg.lambda = cli.lambda;
  cfg.sigma = cli.sigma == "auto" ? 0.0 : std::stod(cli.sigma);
  cfg.kmeans_max_iters = cli.kmeans_iters;
  cfg.le_normalize_both = cli.le_normalize_both;
  cfg.tsne.perplexity = cli.tsne_perplexity;
  cfg.tsne.iters = cli.tsne_iters;
  cfg.tsne.learning_rate = cli.tsne_lr;
  if (cli.tsne_init == "random") cfg.tsne.init = TsneConfig::Init::random;
  else if (cli.tsne_init != "pca")
    throw ValidationError("unknown tsne init: " + cli.tsne_init + " (pca|random)");
  cfg.seed = cli.seed;
  return cfg;
}

std::map<std::string, std::string> train_config_entries(const TrainCli& cli) {
  return {{"data", cli.data.spec},
          {"format", cli.data.format},
          {"labels", cli.data.labels_path},
          {"normalize", cli.data.normalize},
          {"method", cli.method},
          {"base", cli.base},
          {"m", std::to_string(cli.m)},
          {"k", std::to_string(cli.k)},
          {"r", std::to_string(cli.r)},
          {"lambda", std::to_string(cli.lambda)},
          {"sigma", cli.sigma},
          {"kmeans_iters", std::to_string(cli.kmeans_iters)},
          {"le_normalize_both", cli.le_normalize_both ? "1" : "0"},
          {"tsne_perplexity", std::to_string(cli.tsne_perplexity)},
          {"tsne_iters", std::to_string(cli.tsne_iters)},
          {"tsne_lr", std::to_string(cli.tsne_lr)},
          {"tsne_init", cli.tsne_init},
          {"seed", std::to_string(cli.seed)}};
}

int cmd_train(const TrainCli& cli) {
  TrainConfig cfg = to_train_config(cli);
  cfg.validate();  // cheap constraint checks before touching data

  const DataMatrix data = load_dataset(cli.data);
  cfg.validate(data.rows(), data.dims());

  std::vector<StageTiming> timings;
  TrainedModel model = train(data, cfg, &timings);
  const std::uint64_t hash_value = config_hash(train_config_entries(cli));
  std::visit([&](auto& concrete) { concrete.config_hash = hash_value; }, model);

  fs::create_directories(cli.out_dir);
  const bool inductive = std::holds_alternative<HashModel>(model);
  const fs::path model_path =
      fs::path(cli.out_dir) / (inductive ? "model.imhm" : "model.imhp");
  save_trained(model, model_path.string());

  std::vector<std::string> warnings;
  if (inductive) warnings = std::get<HashModel>(model).embedding.warnings;
  else warnings = std::get<LinearHashModel>(model).warnings;
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  json manifest{{"command", "train"},
                {"config", train_config_entries(cli)},
                {"config_hash", hex64(hash_value)},
                {"outputs", {{"model", model_path.string()}}},
                {"timings", timings_json(timings)},
                {"warnings", warnings},
                {"rows", data.rows()},
                {"dims", data.dims()}};
  write_manifest(fs::path(cli.out_dir) / "train_manifest.json", manifest);
  std::cout << "model written to " << model_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// encode

struct EncodeCli {
  std::string model_path;
  DatasetOptions data;
  std::string out_path = "codes.imhc";
};

int cmd_encode(const EncodeCli& cli) {
  const TrainedModel model = load_trained(cli.model_path);
  verify_model_manifest(cli.model_path, trained_config_hash(model));
  const DataMatrix data = load_dataset(cli.data);
  if (data.rows() > 0 && data.dims() != model_feature_dims(model))
    throw ValidationError("dataset has " + std::to_string(data.dims()) +
                          " dims but the model expects " +
                          std::to_string(model_feature_dims(model)));

  const auto start = std::chrono::steady_clock::now();
  const CodeSet codes = encode(model, data);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (const fs::path parent = fs::path(cli.out_path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  save_codes(codes, cli.out_path);

  json manifest{{"command", "encode"},
                {"model", cli.model_path},
                {"model_config_hash", hex64(trained_config_hash(model))},
                {"data", cli.data.spec},
                {"normalize", cli.data.normalize},
                {"items", codes.items()},
                {"bits", codes.bits},
                {"encode_seconds", seconds},
                {"outputs", {{"codes", cli.out_path}}}};
  write_manifest(fs::path(cli.out_path).string() + ".manifest.json", manifest);
  std::cout << codes.items() << " items encoded to " << codes.bits << " bits at "
            << cli.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// query

struct QueryCli {
  std::string db_path;
  std::string queries_path;  // precomputed codes, or
  std::string model_path;    // model + raw data
  DatasetOptions data;
  Index top_k = 10;
  std::string out_path = "ranking.csv";
};

int cmd_query(const QueryCli& cli) {
  const CodeSet db = load_codes(cli.db_path);
  CodeSet queries;
  if (!cli.queries_path.empty()) {
    queries = load_codes(cli.queries_path);
  } else if (!cli.model_path.empty()) {
    const TrainedModel model = load_trained(cli.model_path);
    verify_model_manifest(cli.model_path, trained_config_hash(model));
    queries = encode(model, load_dataset(cli.data));
  } else {
    throw ValidationError("query needs either --queries codes or --model plus --data");
  }
  if (queries.bits != db.bits)
    throw ValidationError("query codes have " + std::to_string(queries.bits) +
                          " bits, database has " + std::to_string(db.bits));

  std::ofstream os(cli.out_path, std::ios::trunc);
  if (!os) throw FormatError("cannot open file for writing: " + cli.out_path);
  os << "query_id,rank,db_id,hamming_distance\n";
  for (Index q = 0; q < queries.items(); ++q) {
    const auto ranked = hamming_rank(db, queries.code(q), cli.top_k);
    for (std::size_t rank = 0; rank < ranked.size(); ++rank)
      os << queries.ids[std::size_t(q)] << "," << rank + 1 << "," << ranked[rank].id << ","
         << ranked[rank].distance << "\n";
  }
  std::cout << "ranking written to " << cli.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalCli {
  std::vector<std::string> db_paths;
  std::vector<std::string> query_paths;
  DatasetOptions train_data;
  DatasetOptions test_data;
  std::string gt_mode = "labels";
  double fraction = 0.02;
  Index radius = 2;
  std::string out_dir = ".";
};

int cmd_eval(const EvalCli& cli) {
  if (cli.db_paths.size() != cli.query_paths.size() || cli.db_paths.empty())
    throw ValidationError("eval needs matching --db/--queries code files (one pair per r)");

  const DataMatrix train = load_dataset(cli.train_data);
  const DataMatrix test = load_dataset(cli.test_data);
  const GroundTruthMode mode = parse_ground_truth_mode(cli.gt_mode);
  const GroundTruth gt = build_ground_truth(train, test, mode, cli.fraction);

  fs::create_directories(cli.out_dir);
  std::ofstream scalars(fs::path(cli.out_dir) / "scalars.csv", std::ios::trunc);
  scalars << "bits,map,f1_at_radius,lookup_fail_rate,scored_queries,excluded_queries\n";

  json manifest{{"command", "eval"},
                {"gt", cli.gt_mode},
                {"fraction", cli.fraction},
                {"radius", cli.radius},
                {"pairs", json::array()}};

  for (std::size_t pair = 0; pair < cli.db_paths.size(); ++pair) {
    const CodeSet db = load_codes(cli.db_paths[pair]);
    const CodeSet queries = load_codes(cli.query_paths[pair]);
    const auto start = std::chrono::steady_clock::now();
    const RetrievalReport report = evaluate(db, queries, gt, cli.radius);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string suffix =
        cli.db_paths.size() > 1 ? "_" + std::to_string(report.bits) : "";
    const fs::path report_path = fs::path(cli.out_dir) / ("report" + suffix + ".json");
    const fs::path curves_path = fs::path(cli.out_dir) / ("curves" + suffix + ".csv");
    write_report_json(report, report_path.string());
    write_curves_csv(report, curves_path.string());
    scalars << report.bits << "," << report.map << "," << report.f1_at_radius << ","
            << report.lookup_fail_rate << "," << report.scored_queries << ","
            << report.excluded_queries << "\n";
    manifest["pairs"].push_back({{"db", cli.db_paths[pair]},
                                 {"queries", cli.query_paths[pair]},
                                 {"bits", report.bits},
                                 {"map", report.map},
                                 {"eval_seconds", seconds},
                                 {"report", report_path.string()},
                                 {"curves", curves_path.string()}});
    std::cout << "bits=" << report.bits << " map=" << report.map
              << " f1@" << cli.radius << "=" << report.f1_at_radius << "\n";
  }
  write_manifest(fs::path(cli.out_dir) / "eval_manifest.json", manifest);
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchCli {
  std::string suite = "table1";
  std::string data_spec;  // defaults to synthetic digits
  Index train_n = 3000, test_n = 300;
  Index m = 400, k = 5;
  std::vector<Index> bits = {32, 64, 96};
  std::vector<Index> m_grid = {100, 200, 400, 600, 800, 1000};
  std::vector<Index> k_grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  Index sensitivity_bits = 64;
  Index seeds = 1;
  Index tsne_iters = 1000;
  std::uint64_t seed = 0;
  std::string out_dir = "bench_out";
};

struct BenchData {
  DataMatrix train;
  DataMatrix test;
};

BenchData bench_dataset(const BenchCli& cli) {
  DatasetOptions opts;
  opts.spec = cli.data_spec.empty()
                  ? "synth:digits:" + std::to_string(cli.train_n + cli.test_n) + ":" +
                        std::to_string(fanout_seed(cli.seed, "bench-data"))
                  : cli.data_spec;
  DataMatrix all = load_dataset(opts);
  if (!all.has_labels())
    throw ValidationError("bench needs labeled data (labels drive the MAP ground truth)");
  if (all.rows() <= cli.test_n)
    throw ValidationError("bench dataset smaller than the requested test split");
  const SplitSpec spec = split(all, cli.test_n, fanout_seed(cli.seed, "bench-split"));
  return {subset(all, spec.train_ids), subset(all, spec.test_ids)};
}

Scalar bench_map(const BenchData& data, const GroundTruth& gt, Method method,
                 BaseMethod base_method, Index m, Index k, Index r, Index tsne_iters,
                 std::uint64_t seed) {
  TrainConfig cfg;
  cfg.method = method;
  cfg.base_method = base_method;
  cfg.m = m;
  cfg.k = k;
  cfg.r = r;
  cfg.tsne.iters = tsne_iters;
  cfg.seed = seed;
  const TrainedModel model = train(data.train, cfg);
  const CodeSet db = encode(model, data.train);
  const CodeSet queries = encode(model, data.test);
  return evaluate(db, queries, gt, 2).map;
}

int bench_table1(const BenchCli& cli) {
  const BenchData data = bench_dataset(cli);
  const GroundTruth gt = build_ground_truth(data.train, data.test, GroundTruthMode::labels, 0);

  fs::create_directories(cli.out_dir);
  std::ofstream table(fs::path(cli.out_dir) / "table1.csv", std::ios::trunc);
  table << "bits,base,method,map\n";

  const std::vector<Method> methods = {Method::imh_le_base, Method::imh_le, Method::imh_tsne};
  bool kmeans_wins_everywhere = true;
  for (const Index bits : cli.bits) {
    for (const Method method : methods) {
      Scalar map_random = 0, map_kmeans = 0;
      for (Index rep = 0; rep < cli.seeds; ++rep) {
        const std::uint64_t rep_seed = fanout_seed(cli.seed, "rep-" + std::to_string(rep));
        map_random += bench_map(data, gt, method, BaseMethod::random, cli.m, cli.k, bits,
                                cli.tsne_iters, rep_seed);
        map_kmeans += bench_map(data, gt, method, BaseMethod::kmeans, cli.m, cli.k, bits,
                                cli.tsne_iters, rep_seed);
      }
      map_random /= Scalar(cli.seeds);
      map_kmeans /= Scalar(cli.seeds);
      table << bits << ",random," << to_string(method) << "," << map_random << "\n";
      table << bits << ",kmeans," << to_string(method) << "," << map_kmeans << "\n";
      std::cout << "bits=" << bits << " " << to_string(method) << ": random=" << map_random
                << " kmeans=" << map_kmeans << "\n";
      kmeans_wins_everywhere = kmeans_wins_everywhere && map_kmeans >= map_random;
    }
  }
  std::cout << (kmeans_wins_everywhere ? "trend: kmeans >= random at every code length"
                                       : "trend NOT reproduced: random beat kmeans somewhere")
            << "\n";
  return 0;
}

int bench_sensitivity(const BenchCli& cli) {
  const BenchData data = bench_dataset(cli);
  const GroundTruth gt = build_ground_truth(data.train, data.test, GroundTruthMode::labels, 0);

  fs::create_directories(cli.out_dir);
  std::ofstream out(fs::path(cli.out_dir) / "sensitivity.csv", std::ios::trunc);
  out << "parameter,m,k,bits,map\n";
  const std::uint64_t rep_seed = fanout_seed(cli.seed, "rep-0");

  for (const Index m : cli.m_grid) {
    if (m > data.train.rows()) continue;
    const Scalar map = bench_map(data, gt, Method::imh_tsne, BaseMethod::kmeans, m, cli.k,
                                 cli.sensitivity_bits, cli.tsne_iters, rep_seed);
    out << "m," << m << "," << cli.k << "," << cli.sensitivity_bits << "," << map << "\n";
    std::cout << "m=" << m << " map=" << map << "\n";
  }
  for (const Index k : cli.k_grid) {
    if (k > cli.m) continue;
    const Scalar map = bench_map(data, gt, Method::imh_tsne, BaseMethod::kmeans, cli.m, k,
                                 cli.sensitivity_bits, cli.tsne_iters, rep_seed);
    out << "k," << cli.m << "," << k << "," << cli.sensitivity_bits << "," << map << "\n";
    std::cout << "k=" << k << " map=" << map << "\n";
  }
  return 0;
}

int bench_bounds(const BenchCli& cli) {
  SynthParams params;
  params.clusters = 3;
  params.dims = 4;
  params.separation = 10;
  params.noise = 0.3;
  const DataMatrix data =
      synth_manifold(SynthKind::gaussian_clusters, 600, params, fanout_seed(cli.seed, "bounds"));

  // Weights of a Gaussian query against every point, normalized.
  std::mt19937_64 rng(fanout_seed(cli.seed, "bounds-query"));
  std::normal_distribution<Scalar> normal(0, 1);
  RowVector query(4);
  for (Index j = 0; j < 4; ++j) query(j) = 3 * normal(rng);
  Vector alpha(600);
  for (Index i = 0; i < 600; ++i)
    alpha(i) = std::exp(-(data.values.row(i) - query).squaredNorm() / 25.0);
  alpha /= alpha.sum();

  std::vector<std::vector<Index>> clusters(3);
  for (Index i = 0; i < 600; ++i)
    clusters[std::size_t(data.labels[std::size_t(i)])].push_back(i);

  fs::create_directories(cli.out_dir);
  std::ofstream out(fs::path(cli.out_dir) / "bounds.csv", std::ios::trunc);
  out << "n_prime,t,epsilon,bound,empirical,draws_used,pass\n";
  for (const Index n_prime : {Index(10), Index(50), Index(100)}) {
    const Scalar epsilon = greedy_covering_radius(data.values, n_prime / 2);
    const Scalar t = epsilon * std::sqrt(5.0 / Scalar(n_prime));  // bound = 0.4
    const ConcentrationReport report = check_concentration_bound(
        data.values, alpha, clusters, n_prime, t, 10000, fanout_seed(cli.seed, "bounds-trials"));
    out << report.n_prime << "," << report.t << "," << report.epsilon << "," << report.bound
        << "," << report.empirical << "," << report.draws_used << ","
        << (report.pass ? 1 : 0) << "\n";
    std::cout << "n'=" << report.n_prime << " bound=" << report.bound
              << " empirical=" << report.empirical << (report.pass ? " PASS" : " FAIL") << "\n";
  }
  return 0;
}

int cmd_bench(const BenchCli& cli) {
  if (cli.suite == "table1") return bench_table1(cli);
  if (cli.suite == "sensitivity") return bench_sensitivity(cli);
  if (cli.suite == "bounds") return bench_bounds(cli);
  throw ValidationError("unknown bench suite: " + cli.suite + " (table1|sensitivity|bounds)");
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"Inductive manifold hashing: train, encode, query, eval, bench"};
  app.require_subcommand(1);
  // Config files use a [<subcommand>] section (or dotted keys) and must be
  // given before the subcommand: imh --config run.cfg train ...
  app.set_config("--config", "", "key=value config file; flags win over file values");

  TrainCli train_cli;
  auto* train_cmd = app.add_subcommand("train", "learn a hash model");
  train_cmd->add_option("--data", train_cli.data.spec, "dataset file or synth spec")->required();
  train_cmd->add_option("--format", train_cli.data.format, "dataset format");
  train_cmd->add_option("--labels", train_cli.data.labels_path, "IDX label file");
  train_cmd->add_option("--normalize", train_cli.data.normalize, "none|l2");
  train_cmd->add_option("--method", train_cli.method,
                        "imh-tsne|imh-le|imh-le-base|imh-pca|lsh|pcah");
  train_cmd->add_option("--base", train_cli.base, "kmeans|random");
  train_cmd->add_option("--m", train_cli.m, "base set size");
  train_cmd->add_option("--k", train_cli.k, "nearest base points per extension");
  train_cmd->add_option("--r", train_cli.r, "code length in bits");
  train_cmd->add_option("--lambda", train_cli.lambda, "relaxed-LE trade-off");
  train_cmd->add_option("--sigma", train_cli.sigma, "auto or a fixed bandwidth");
  train_cmd->add_option("--kmeans-iters", train_cli.kmeans_iters, "Lloyd iteration cap");
  train_cmd->add_flag("--le-normalize-both", train_cli.le_normalize_both,
                      "normalize both factors of the coupling term");
  train_cmd->add_option("--tsne-perplexity", train_cli.tsne_perplexity, "0 = auto");
  train_cmd->add_option("--tsne-iters", train_cli.tsne_iters, "gradient steps");
  train_cmd->add_option("--tsne-lr", train_cli.tsne_lr, "learning rate");
  train_cmd->add_option("--tsne-init", train_cli.tsne_init, "pca|random");
  train_cmd->add_option("--seed", train_cli.seed, "run seed");
  train_cmd->add_option("--out", train_cli.out_dir, "output directory");

  EncodeCli encode_cli;
  auto* encode_cmd = app.add_subcommand("encode", "hash a dataset with a trained model");
  encode_cmd->add_option("--model", encode_cli.model_path, "model file")->required();
  encode_cmd->add_option("--data", encode_cli.data.spec, "dataset file or synth spec")->required();
  encode_cmd->add_option("--format", encode_cli.data.format, "dataset format");
  encode_cmd->add_option("--labels", encode_cli.data.labels_path, "IDX label file");
  encode_cmd->add_option("--normalize", encode_cli.data.normalize, "none|l2");
  encode_cmd->add_option("--out", encode_cli.out_path, "codes file to write");

  QueryCli query_cli;
  auto* query_cmd = app.add_subcommand("query", "rank a code database for queries");
  query_cmd->add_option("--db", query_cli.db_path, "database codes file")->required();
  query_cmd->add_option("--queries", query_cli.queries_path, "query codes file");
  query_cmd->add_option("--model", query_cli.model_path, "model for encoding raw queries");
  query_cmd->add_option("--data", query_cli.data.spec, "raw query dataset");
  query_cmd->add_option("--format", query_cli.data.format, "dataset format");
  query_cmd->add_option("--normalize", query_cli.data.normalize, "none|l2");
  query_cmd->add_option("--top", query_cli.top_k, "results per query (0 = all)");
  query_cmd->add_option("--out", query_cli.out_path, "ranking CSV to write");

  EvalCli eval_cli;
  auto* eval_cmd = app.add_subcommand("eval", "retrieval metrics for code files");
  eval_cmd->add_option("--db", eval_cli.db_paths, "database codes (repeat per code length)")
      ->required();
  eval_cmd->add_option("--queries", eval_cli.query_paths, "query codes (paired with --db)")
      ->required();
  eval_cmd->add_option("--train-data", eval_cli.train_data.spec, "database-side dataset")
      ->required();
  eval_cmd->add_option("--train-format", eval_cli.train_data.format, "dataset format");
  eval_cmd->add_option("--train-labels", eval_cli.train_data.labels_path, "IDX label file");
  eval_cmd->add_option("--train-normalize", eval_cli.train_data.normalize, "none|l2");
  eval_cmd->add_option("--test-data", eval_cli.test_data.spec, "query-side dataset")->required();
  eval_cmd->add_option("--test-format", eval_cli.test_data.format, "dataset format");
  eval_cmd->add_option("--test-labels", eval_cli.test_data.labels_path, "IDX label file");
  eval_cmd->add_option("--test-normalize", eval_cli.test_data.normalize, "none|l2");
  eval_cmd->add_option("--gt", eval_cli.gt_mode, "labels|euclidean");
  eval_cmd->add_option("--fraction", eval_cli.fraction, "euclidean ground-truth fraction");
  eval_cmd->add_option("--radius", eval_cli.radius, "hash-lookup Hamming radius");
  eval_cmd->add_option("--out", eval_cli.out_dir, "output directory");

  BenchCli bench_cli;
  auto* bench_cmd = app.add_subcommand("bench", "reproduction studies");
  bench_cmd->add_option("--suite", bench_cli.suite, "table1|sensitivity|bounds")->required();
  bench_cmd->add_option("--data", bench_cli.data_spec, "labeled dataset (default: synth digits)");
  bench_cmd->add_option("--train-n", bench_cli.train_n, "synthetic train size");
  bench_cmd->add_option("--test-n", bench_cli.test_n, "test split size");
  bench_cmd->add_option("--m", bench_cli.m, "base set size");
  bench_cmd->add_option("--k", bench_cli.k, "nearest base points");
  bench_cmd->add_option("--bits", bench_cli.bits, "code lengths for table1");
  bench_cmd->add_option("--m-grid", bench_cli.m_grid, "base sizes for sensitivity");
  bench_cmd->add_option("--k-grid", bench_cli.k_grid, "neighbor counts for sensitivity");
  bench_cmd->add_option("--sensitivity-bits", bench_cli.sensitivity_bits, "code length");
  bench_cmd->add_option("--seeds", bench_cli.seeds, "seed repetitions to average");
  bench_cmd->add_option("--tsne-iters", bench_cli.tsne_iters, "gradient steps");
  bench_cmd->add_option("--seed", bench_cli.seed, "run seed");
  bench_cmd->add_option("--out", bench_cli.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (const char* threads = std::getenv("IMH_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  try {
    if (train_cmd->parsed()) return cmd_train(train_cli);
    if (encode_cmd->parsed()) return cmd_encode(encode_cli);
    if (query_cmd->parsed()) return cmd_query(query_cli);
    if (eval_cmd->parsed()) return cmd_eval(eval_cli);
    if (bench_cmd->parsed()) return cmd_bench(bench_cli);
  } catch (const Error& e) {
    // every library error names a user-addressable input or configuration problem
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace imh::cli

int main(int argc, char** argv) { return imh::cli::run(argc, argv); }
