#include "imh/eval.hpp"

#include "imh/distance.hpp"
#include "imh/search.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <unordered_set>

namespace imh {

GroundTruthMode parse_ground_truth_mode(const std::string& name) {
  if (name == "labels") return GroundTruthMode::labels;
  if (name == "euclidean") return GroundTruthMode::euclidean_top_fraction;
  throw ValidationError("unknown ground truth mode: " + name + " (labels|euclidean)");
}

GroundTruth build_ground_truth(const DataMatrix& train, const DataMatrix& test,
                               GroundTruthMode mode, Scalar fraction) {
  GroundTruth gt;
  gt.source = mode;
  gt.query_ids = test.ids;
  gt.relevant.resize(static_cast<std::size_t>(test.rows()));

  if (mode == GroundTruthMode::labels) {
    if (!train.has_labels() || !test.has_labels())
      throw ValidationError("labels ground truth needs labels on both train and test sets");
    for (Index q = 0; q < test.rows(); ++q) {
      const std::int32_t want = test.labels[static_cast<std::size_t>(q)];
      auto& rel = gt.relevant[static_cast<std::size_t>(q)];
      for (Index i = 0; i < train.rows(); ++i)
        if (train.labels[static_cast<std::size_t>(i)] == want)
          rel.push_back(train.ids[static_cast<std::size_t>(i)]);
      std::sort(rel.begin(), rel.end());
    }
    return gt;
  }

  if (!(fraction > 0) || !(fraction < 1))
    throw ValidationError("euclidean ground truth needs 0 < fraction < 1");
  gt.fraction = fraction;
  const Index keep = static_cast<Index>(std::ceil(fraction * Scalar(train.rows())));
  std::vector<Index> order(static_cast<std::size_t>(train.rows()));
  for (Index q = 0; q < test.rows(); ++q) {
    const Matrix d2 = pairwise_sqdist(test.values.row(q), train.values);
    std::iota(order.begin(), order.end(), Index(0));
    const auto closer = [&](Index a, Index b) {
      return d2(0, a) < d2(0, b) || (d2(0, a) == d2(0, b) && a < b);
    };
    std::nth_element(order.begin(), order.begin() + std::min<Index>(keep, train.rows()),
                     order.end(), closer);
    auto& rel = gt.relevant[static_cast<std::size_t>(q)];
    rel.reserve(static_cast<std::size_t>(keep));
    for (Index s = 0; s < keep && s < train.rows(); ++s)
      rel.push_back(train.ids[static_cast<std::size_t>(order[static_cast<std::size_t>(s)])]);
    std::sort(rel.begin(), rel.end());
  }
  return gt;
}

RetrievalReport evaluate(const CodeSet& db, const CodeSet& queries, const GroundTruth& gt,
                         Index radius) {
  if (queries.items() == 0) throw ValidationError("empty query set");
  if (db.bits != queries.bits)
    throw ValidationError("code length mismatch: db has " + std::to_string(db.bits) +
                          " bits, queries have " + std::to_string(queries.bits));
  if (radius > db.bits)
    throw ValidationError("radius " + std::to_string(radius) + " exceeds code length " +
                          std::to_string(db.bits));
  if (gt.query_ids != queries.ids)
    throw ValidationError("ground truth query ids do not match the query code set");

  RetrievalReport report;
  report.radius = radius;
  report.bits = db.bits;

  // Multi-probe when the probe enumeration beats a scan; identical results.
  const bool use_table =
      CodeLookupTable::probe_count(db.bits, radius) < static_cast<std::uint64_t>(db.items());
  std::optional<CodeLookupTable> table;
  if (use_table) table.emplace(db);

  const Index max_distance = db.bits;
  std::vector<Scalar> retrieved_at(static_cast<std::size_t>(max_distance + 1), 0);
  std::vector<Scalar> relevant_at(static_cast<std::size_t>(max_distance + 1), 0);
  std::vector<Scalar> precision_sum_at(static_cast<std::size_t>(max_distance + 1), 0);
  std::vector<Scalar> recall_sum_at(static_cast<std::size_t>(max_distance + 1), 0);

  // Returned-count parameterization, log-spaced ranks.
  std::vector<Index> n_grid;
  for (Index n = 1; n < db.items(); n = std::max(n + 1, (n * 5) / 4)) n_grid.push_back(n);
  n_grid.push_back(db.items());
  std::vector<Scalar> precision_sum_n(n_grid.size(), 0);
  std::vector<Scalar> recall_sum_n(n_grid.size(), 0);

  Scalar ap_sum = 0;
  Scalar f1_sum = 0;
  Index empty_lookups = 0;

  for (Index q = 0; q < queries.items(); ++q) {
    const auto& rel = gt.relevant[static_cast<std::size_t>(q)];
    if (rel.empty()) {
      ++report.excluded_queries;
      continue;
    }
    const auto started = std::chrono::steady_clock::now();
    const std::unordered_set<std::int64_t> rel_set(rel.begin(), rel.end());

    const std::vector<Neighbor> ranking = hamming_rank(db, queries.code(q));

    // Average precision over the full ranking.
    Index hits = 0;
    Scalar ap = 0;
    std::vector<Index> rel_hist(static_cast<std::size_t>(max_distance + 1), 0);
    std::vector<Index> all_hist(static_cast<std::size_t>(max_distance + 1), 0);
    std::size_t grid_cursor = 0;
    for (std::size_t rank = 0; rank < ranking.size(); ++rank) {
      const bool is_rel = rel_set.count(ranking[rank].id) > 0;
      ++all_hist[static_cast<std::size_t>(ranking[rank].distance)];
      if (is_rel) {
        ++hits;
        ap += Scalar(hits) / Scalar(rank + 1);
        ++rel_hist[static_cast<std::size_t>(ranking[rank].distance)];
      }
      while (grid_cursor < n_grid.size() &&
             static_cast<Index>(rank + 1) == n_grid[grid_cursor]) {
        precision_sum_n[grid_cursor] += Scalar(hits) / Scalar(rank + 1);
        recall_sum_n[grid_cursor] += Scalar(hits) / Scalar(rel.size());
        ++grid_cursor;
      }
    }
    ap_sum += ap / Scalar(rel.size());

    Index cum_all = 0, cum_rel = 0;
    for (Index dist = 0; dist <= max_distance; ++dist) {
      cum_all += all_hist[static_cast<std::size_t>(dist)];
      cum_rel += rel_hist[static_cast<std::size_t>(dist)];
      precision_sum_at[static_cast<std::size_t>(dist)] +=
          cum_all > 0 ? Scalar(cum_rel) / Scalar(cum_all) : Scalar(0);
      recall_sum_at[static_cast<std::size_t>(dist)] += Scalar(cum_rel) / Scalar(rel.size());
    }

    // Radius lookup for the F1 score.
    const std::vector<std::int64_t> found =
        use_table ? table->lookup(queries.code(q), radius)
                  : hamming_lookup(db, queries.code(q), radius);
    if (found.empty()) {
      ++empty_lookups;
    } else {
      Index true_positive = 0;
      for (std::int64_t id : found)
        if (rel_set.count(id)) ++true_positive;
      const Scalar precision = Scalar(true_positive) / Scalar(found.size());
      const Scalar recall = Scalar(true_positive) / Scalar(rel.size());
      if (precision + recall > 0) f1_sum += 2 * precision * recall / (precision + recall);
    }

    ++report.scored_queries;
    report.query_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
  }

  if (report.scored_queries == 0) throw ValidationError("no query has a nonempty relevant set");
  const Scalar scored = Scalar(report.scored_queries);
  report.map = ap_sum / scored;
  report.f1_at_radius = f1_sum / scored;
  report.lookup_fail_rate = Scalar(empty_lookups) / scored;
  for (Index dist = 0; dist <= max_distance; ++dist)
    report.pr_by_distance.push_back({Scalar(dist),
                                     precision_sum_at[static_cast<std::size_t>(dist)] / scored,
                                     recall_sum_at[static_cast<std::size_t>(dist)] / scored});
  for (std::size_t g = 0; g < n_grid.size(); ++g)
    report.pr_at_n.push_back(
        {Scalar(n_grid[g]), precision_sum_n[g] / scored, recall_sum_n[g] / scored});
  return report;
}

void write_report_json(const RetrievalReport& report, const std::string& path) {
  nlohmann::json j;
  j["map"] = report.map;
  j["f1_at_radius"] = report.f1_at_radius;
  j["lookup_fail_rate"] = report.lookup_fail_rate;
  j["radius"] = report.radius;
  j["bits"] = report.bits;
  // Timings stay out of the report file so identical (config, seed) runs
  // produce identical bytes; the CLI manifest carries them instead.
  j["scored_queries"] = report.scored_queries;
  j["excluded_queries"] = report.excluded_queries;
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError("cannot open file for writing: " + path);
  os << j.dump(2) << "\n";
}

void write_curves_csv(const RetrievalReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError("cannot open file for writing: " + path);
  os << "kind,x,precision,recall\n";
  for (const auto& point : report.pr_by_distance)
    os << "by_distance," << point.x << "," << point.precision << "," << point.recall << "\n";
  for (const auto& point : report.pr_at_n)
    os << "at_n," << point.x << "," << point.precision << "," << point.recall << "\n";
}

}  // namespace imh
