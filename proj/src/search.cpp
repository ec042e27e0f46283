#include "imh/search.hpp"

#include <algorithm>

namespace imh {

namespace {

void check_query(const CodeSet& db, Index radius_or_zero) {
  if (db.bits < 1) throw ValidationError("database code set is empty");
  if (radius_or_zero > db.bits)
    throw ValidationError("radius " + std::to_string(radius_or_zero) + " exceeds code length " +
                          std::to_string(db.bits));
}

std::string code_key(const std::uint64_t* code, Index words_per_item) {
  return std::string(reinterpret_cast<const char*>(code),
                     static_cast<std::size_t>(words_per_item) * sizeof(std::uint64_t));
}

}  // namespace

std::vector<Neighbor> hamming_rank(const CodeSet& db, const std::uint64_t* query, Index top_k) {
  check_query(db, 0);
  const Index wpi = db.words_per_item();
  std::vector<Neighbor> ranked;
  ranked.reserve(static_cast<std::size_t>(db.items()));
  for (Index i = 0; i < db.items(); ++i)
    ranked.push_back({db.ids[static_cast<std::size_t>(i)], hamming_distance(db.code(i), query, wpi)});
  std::sort(ranked.begin(), ranked.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  });
  if (top_k > 0 && top_k < static_cast<Index>(ranked.size())) ranked.resize(static_cast<std::size_t>(top_k));
  return ranked;
}

std::vector<std::int64_t> hamming_lookup(const CodeSet& db, const std::uint64_t* query, Index radius) {
  check_query(db, radius);
  const Index wpi = db.words_per_item();
  std::vector<std::int64_t> hits;
  for (Index i = 0; i < db.items(); ++i)
    if (hamming_distance(db.code(i), query, wpi) <= radius)
      hits.push_back(db.ids[static_cast<std::size_t>(i)]);
  std::sort(hits.begin(), hits.end());
  return hits;
}

CodeLookupTable::CodeLookupTable(const CodeSet& db)
    : bits_(db.bits), words_per_item_(db.words_per_item()) {
  buckets_.reserve(static_cast<std::size_t>(db.items()));
  for (Index i = 0; i < db.items(); ++i)
    buckets_[code_key(db.code(i), words_per_item_)].push_back(db.ids[static_cast<std::size_t>(i)]);
}

std::uint64_t CodeLookupTable::probe_count(Index bits, Index radius) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(bits, 0)
  for (Index i = 0; i <= radius; ++i) {
    if (total > (std::uint64_t(1) << 62) - binom) return std::uint64_t(1) << 62;
    total += binom;
    if (binom > (std::uint64_t(1) << 56)) return std::uint64_t(1) << 62;
    binom = binom * std::uint64_t(bits - i) / std::uint64_t(i + 1);
  }
  return total;
}

std::vector<std::int64_t> CodeLookupTable::lookup(const std::uint64_t* query, Index radius) const {
  if (radius > bits_)
    throw ValidationError("radius " + std::to_string(radius) + " exceeds code length " +
                          std::to_string(bits_));
  std::vector<std::int64_t> hits;
  std::vector<std::uint64_t> probe(query, query + words_per_item_);
  std::vector<Index> flips;

  const auto probe_once = [&] {
    const auto it = buckets_.find(code_key(probe.data(), words_per_item_));
    if (it != buckets_.end()) hits.insert(hits.end(), it->second.begin(), it->second.end());
  };

  // Enumerate every code within the radius: choose positions to flip.
  const auto enumerate = [&](auto&& self, Index next_bit, Index remaining) -> void {
    if (remaining == 0) {
      probe_once();
      return;
    }
    for (Index b = next_bit; b <= bits_ - remaining; ++b) {
      probe[static_cast<std::size_t>(b >> 6)] ^= std::uint64_t(1) << (b & 63);
      self(self, b + 1, remaining - 1);
      probe[static_cast<std::size_t>(b >> 6)] ^= std::uint64_t(1) << (b & 63);
    }
  };

  for (Index flip_count = 0; flip_count <= radius; ++flip_count)
    enumerate(enumerate, 0, flip_count);
  std::sort(hits.begin(), hits.end());
  return hits;
}

}  // namespace imh
