#include "imh/codes.hpp"

#include "io_util.hpp"

#include <cstring>

namespace imh {

namespace {
constexpr char kCodesMagic[4] = {'I', 'M', 'H', 'C'};
constexpr std::uint32_t kCodesVersion = 1;
}  // namespace

CodeSet pack_signs(const Matrix& y, const std::vector<std::int64_t>& ids) {
  if (static_cast<Index>(ids.size()) != y.rows())
    throw ValidationError("id count does not match embedding rows");
  CodeSet codes;
  codes.bits = y.cols();
  codes.ids = ids;
  codes.words.assign(static_cast<std::size_t>(y.rows() * codes.words_per_item()), 0);
  const Index wpi = codes.words_per_item();
  for (Index i = 0; i < y.rows(); ++i) {
    std::uint64_t* item = codes.words.data() + i * wpi;
    for (Index b = 0; b < y.cols(); ++b)
      if (y(i, b) >= 0) item[b >> 6] |= std::uint64_t(1) << (b & 63);
  }
  return codes;
}

Matrix unpack_bits(const CodeSet& codes) {
  Matrix bits(codes.items(), codes.bits);
  for (Index i = 0; i < codes.items(); ++i)
    for (Index b = 0; b < codes.bits; ++b) bits(i, b) = codes.bit(i, b) ? 1 : 0;
  return bits;
}

void save_codes(const CodeSet& codes, const std::string& path) {
  auto os = detail::open_out(path);
  detail::write_bytes(os, kCodesMagic, 4);
  detail::write_pod(os, kCodesVersion);
  detail::write_pod(os, std::uint64_t(codes.items()));
  detail::write_pod(os, std::uint32_t(codes.bits));
  detail::write_bytes(os, codes.ids.data(), codes.ids.size() * sizeof(std::int64_t));
  detail::write_bytes(os, codes.words.data(), codes.words.size() * sizeof(std::uint64_t));
  if (!os) throw FormatError("write failure: " + path);
}

CodeSet load_codes(const std::string& path) {
  const std::string buf = detail::slurp(path);
  detail::ByteReader reader(buf, path);
  char magic[4];
  reader.read_into(magic, 4, "magic");
  if (std::memcmp(magic, kCodesMagic, 4) != 0)
    throw FormatError(path + ": not a codes container (bad magic)");
  const auto version = reader.read<std::uint32_t>("version");
  if (version != kCodesVersion)
    throw FormatError(path + ": unsupported codes container version " + std::to_string(version));
  const auto items = reader.read<std::uint64_t>("item count");
  const auto bits = reader.read<std::uint32_t>("bit width");
  if (bits == 0 || bits > (1u << 20))
    throw FormatError(path + ": implausible code length " + std::to_string(bits));
  CodeSet codes;
  codes.bits = static_cast<Index>(bits);
  codes.ids.resize(items);
  reader.read_into(codes.ids.data(), items * sizeof(std::int64_t), "ids");
  codes.words.resize(items * static_cast<std::uint64_t>(codes.words_per_item()));
  reader.read_into(codes.words.data(), codes.words.size() * sizeof(std::uint64_t), "code words");
  return codes;
}

}  // namespace imh
