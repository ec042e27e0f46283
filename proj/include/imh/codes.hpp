#pragma once

#include "imh/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace imh {

/// Packed binary codes, r bits per item. Bit b of an item lives in word
/// b/64 at bit position b%64 (little-endian bit order); padding bits are
/// zero.
struct CodeSet {
  Index bits = 0;
  std::vector<std::int64_t> ids;
  std::vector<std::uint64_t> words;

  Index items() const { return static_cast<Index>(ids.size()); }
  Index words_per_item() const { return (bits + 63) / 64; }

  const std::uint64_t* code(Index item) const {
    return words.data() + item * words_per_item();
  }
  bool bit(Index item, Index b) const {
    return (code(item)[b >> 6] >> (b & 63)) & 1u;
  }
};

/// bit = 1 where y(i, b) >= 0 (sign(0) = +1).
CodeSet pack_signs(const Matrix& y, const std::vector<std::int64_t>& ids);

/// items x bits matrix of 0/1 values.
Matrix unpack_bits(const CodeSet& codes);

/// Popcount Hamming distance between two codes of `words_per_item` words.
inline Index hamming_distance(const std::uint64_t* a, const std::uint64_t* b,
                              Index words_per_item) {
  Index dist = 0;
  for (Index w = 0; w < words_per_item; ++w) dist += __builtin_popcountll(a[w] ^ b[w]);
  return dist;
}

// Codes container: magic "IMHC", version, item count, bit width, ids,
// packed words. Bit-exact round trip.
void save_codes(const CodeSet& codes, const std::string& path);
CodeSet load_codes(const std::string& path);

}  // namespace imh
