#pragma once

#include "imh/types.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

// Internal little-endian binary IO helpers shared by the file containers.

namespace imh::detail {

template <typename T>
void write_pod(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  os.write(reinterpret_cast<const char*>(&value), sizeof value);
}

inline void write_bytes(std::ostream& os, const void* data, std::size_t len) {
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
}

template <typename T>
T read_pod(std::istream& is, const std::string& what) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!is) throw FormatError("truncated file while reading " + what);
  return value;
}

inline void read_bytes(std::istream& is, void* data, std::size_t len, const std::string& what) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(len));
  if (!is) throw FormatError("truncated file while reading " + what);
}

inline std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return std::move(buf).str();
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open file for writing: " + path);
  return os;
}

std::uint32_t crc32(const void* data, std::size_t len, std::uint32_t seed = 0);

/// In-memory cursor for parsing checksummed containers.
class ByteReader {
 public:
  ByteReader(const std::string& buffer, std::string name)
      : buffer_(buffer), name_(std::move(name)) {}

  template <typename T>
  T read(const std::string& what) {
    T value{};
    copy(&value, sizeof value, what);
    return value;
  }

  void read_into(void* dest, std::size_t len, const std::string& what) {
    copy(dest, len, what);
  }

  std::size_t offset() const { return offset_; }

 private:
  void copy(void* dest, std::size_t len, const std::string& what) {
    if (offset_ + len > buffer_.size())
      throw FormatError(name_ + ": truncated while reading " + what + " at byte offset " +
                        std::to_string(offset_));
    std::memcpy(dest, buffer_.data() + offset_, len);
    offset_ += len;
  }

  const std::string& buffer_;
  std::string name_;
  std::size_t offset_ = 0;
};

}  // namespace imh::detail
