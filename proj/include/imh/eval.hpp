#pragma once

#include "imh/codes.hpp"
#include "imh/dataset.hpp"
#include "imh/types.hpp"

#include <string>
#include <vector>

namespace imh {

enum class GroundTruthMode { labels, euclidean_top_fraction };

GroundTruthMode parse_ground_truth_mode(const std::string& name);

/// Per-query relevant-id sets. Empty sets are kept in place (aligned with
/// the query order) and excluded from scoring by evaluate().
struct GroundTruth {
  GroundTruthMode source = GroundTruthMode::labels;
  Scalar fraction = 0;
  std::vector<std::int64_t> query_ids;
  std::vector<std::vector<std::int64_t>> relevant;  // each sorted ascending
};

/// labels mode: same-class train rows. euclidean mode: the
/// ceil(fraction * n) nearest train rows by exact distance.
GroundTruth build_ground_truth(const DataMatrix& train, const DataMatrix& test,
                               GroundTruthMode mode, Scalar fraction = 0.02);

struct PrPoint {
  Scalar x;  // Hamming distance threshold, or returned-count N
  Scalar precision;
  Scalar recall;
};

struct RetrievalReport {
  Scalar map = 0;
  Scalar f1_at_radius = 0;
  Scalar lookup_fail_rate = 0;  // fraction of scored queries with empty lookup
  Index radius = 0;
  Index bits = 0;
  Index scored_queries = 0;
  Index excluded_queries = 0;
  std::vector<PrPoint> pr_by_distance;  // one point per distance threshold
  std::vector<PrPoint> pr_at_n;         // precision/recall at returned counts
  std::vector<Scalar> query_seconds;
};

/// Full-ranking MAP, PR curves in both parameterizations, and F1 of the
/// radius lookup with empty-result queries scored zero and counted in
/// lookup_fail_rate. gt.query_ids must match queries.ids.
RetrievalReport evaluate(const CodeSet& db, const CodeSet& queries,
                         const GroundTruth& gt, Index radius);

/// Scalars as JSON / curves as CSV (kind,x,precision,recall), schema
/// described in the README.
void write_report_json(const RetrievalReport& report, const std::string& path);
void write_curves_csv(const RetrievalReport& report, const std::string& path);

}  // namespace imh
