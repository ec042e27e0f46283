#pragma once

#include "imh/codes.hpp"
#include "imh/types.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace imh {

struct Neighbor {
  std::int64_t id;
  Index distance;
};

/// Database ids sorted by Hamming distance to `query` ascending, ties by
/// ascending id. top_k = 0 returns the full ranking.
std::vector<Neighbor> hamming_rank(const CodeSet& db, const std::uint64_t* query,
                                   Index top_k = 0);

/// Ids at Hamming distance <= radius, sorted ascending. Linear scan.
std::vector<std::int64_t> hamming_lookup(const CodeSet& db, const std::uint64_t* query,
                                         Index radius);

/// Exact-code hash table supporting multi-probe lookup: enumerates every
/// code within the radius and probes the table. Bit-identical results to
/// the linear scan.
class CodeLookupTable {
 public:
  explicit CodeLookupTable(const CodeSet& db);

  std::vector<std::int64_t> lookup(const std::uint64_t* query, Index radius) const;

  /// sum_{i<=radius} C(bits, i), saturating at max.
  static std::uint64_t probe_count(Index bits, Index radius);

 private:
  Index bits_;
  Index words_per_item_;
  std::unordered_map<std::string, std::vector<std::int64_t>> buckets_;
};

}  // namespace imh
