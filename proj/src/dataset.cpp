#include "imh/dataset.hpp"

#include "io_util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace imh {

namespace {

constexpr char kDatasetMagic[4] = {'I', 'M', 'H', 'D'};
constexpr std::uint32_t kDatasetVersion = 1;

std::uint32_t read_u32_be(const std::string& buf, std::size_t offset, const std::string& what) {
  if (offset + 4 > buf.size())
    throw FormatError("truncated IDX header while reading " + what + " at byte offset " +
                      std::to_string(offset));
  const auto* b = reinterpret_cast<const unsigned char*>(buf.data() + offset);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void assign_default_ids(DataMatrix& data) {
  data.ids.resize(static_cast<std::size_t>(data.rows()));
  for (Index i = 0; i < data.rows(); ++i) data.ids[static_cast<std::size_t>(i)] = i;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void DataMatrix::validate() const {
  if (dims() < 1) throw ValidationError("dataset has no feature dimensions");
  if (static_cast<Index>(ids.size()) != rows())
    throw ValidationError("id list length " + std::to_string(ids.size()) +
                          " does not match row count " + std::to_string(rows()));
  if (!labels.empty() && static_cast<Index>(labels.size()) != rows())
    throw ValidationError("label block length " + std::to_string(labels.size()) +
                          " does not match row count " + std::to_string(rows()));
  for (Index i = 0; i < rows(); ++i)
    for (Index j = 0; j < dims(); ++j)
      if (!std::isfinite(values(i, j)))
        throw ValidationError("non-finite value at row " + std::to_string(i) + ", column " +
                              std::to_string(j));
  std::unordered_set<std::int64_t> seen;
  seen.reserve(ids.size());
  for (std::int64_t id : ids)
    if (!seen.insert(id).second)
      throw ValidationError("duplicate row id " + std::to_string(id));
}

DataMatrix load_idx(const std::string& path) {
  const std::string buf = detail::slurp(path);
  if (buf.empty()) throw FormatError(path + ": empty file (no IDX header at byte offset 0)");
  const std::uint32_t magic = read_u32_be(buf, 0, "magic");
  const std::uint32_t type = (magic >> 8) & 0xFF;
  const std::uint32_t ndims = magic & 0xFF;
  if ((magic >> 16) != 0 || type != 0x08 || ndims < 1 || ndims > 4)
    throw FormatError(path + ": bad IDX magic 0x" + [&] {
      char hex[16];
      std::snprintf(hex, sizeof hex, "%08x", magic);
      return std::string(hex);
    }() + " at byte offset 0 (expected 0x00000801 or 0x00000803)");

  std::size_t offset = 4;
  std::uint64_t n = 0, d = 1;
  for (std::uint32_t dim = 0; dim < ndims; ++dim) {
    const std::uint32_t size = read_u32_be(buf, offset, "dimension " + std::to_string(dim));
    offset += 4;
    if (dim == 0) {
      n = size;
    } else {
      if (size != 0 && d > (std::uint64_t(1) << 40) / size)
        throw FormatError(path + ": dimension overflow in IDX header at byte offset " +
                          std::to_string(offset - 4));
      d *= size;
    }
  }
  if (d == 0) throw FormatError(path + ": zero-sized IDX dimension");

  const std::uint64_t expected = n * d;
  if (buf.size() - offset < expected)
    throw FormatError(path + ": truncated IDX payload at byte offset " +
                      std::to_string(buf.size()) + " (expected " +
                      std::to_string(offset + expected) + " bytes)");

  DataMatrix data;
  data.values.resize(static_cast<Index>(n), static_cast<Index>(d));
  const auto* pixels = reinterpret_cast<const unsigned char*>(buf.data() + offset);
  const Scalar scale = ndims >= 2 ? Scalar(1) / Scalar(255) : Scalar(1);
  for (std::uint64_t i = 0; i < n * d; ++i)
    data.values.data()[i] = scale * Scalar(pixels[i]);
  assign_default_ids(data);
  data.validate();
  return data;
}

DataMatrix load_vecs(const std::string& path, VecsKind kind) {
  const std::string buf = detail::slurp(path);
  const std::size_t element_size = kind == VecsKind::fvecs ? 4 : 1;
  if (buf.size() < 4) throw FormatError(path + ": file too small for a record header");

  std::uint32_t d = 0;
  std::memcpy(&d, buf.data(), 4);
  if (d == 0 || d > (1u << 24)) throw FormatError(path + ": implausible record dimension " + std::to_string(d));

  const std::size_t record_size = 4 + std::size_t(d) * element_size;
  if (buf.size() % record_size != 0)
    throw FormatError(path + ": file size " + std::to_string(buf.size()) +
                      " is not divisible by the record size " + std::to_string(record_size) +
                      " (d=" + std::to_string(d) + ")");
  const std::size_t n = buf.size() / record_size;

  DataMatrix data;
  data.values.resize(static_cast<Index>(n), static_cast<Index>(d));
  for (std::size_t rec = 0; rec < n; ++rec) {
    const std::size_t base = rec * record_size;
    std::uint32_t rec_d = 0;
    std::memcpy(&rec_d, buf.data() + base, 4);
    if (rec_d != d)
      throw FormatError(path + ": record " + std::to_string(rec) + " has dimension " +
                        std::to_string(rec_d) + ", expected " + std::to_string(d));
    if (kind == VecsKind::fvecs) {
      for (std::uint32_t j = 0; j < d; ++j) {
        float v = 0;
        std::memcpy(&v, buf.data() + base + 4 + 4 * std::size_t(j), 4);
        if (!std::isfinite(v))
          throw FormatError(path + ": non-finite value in record " + std::to_string(rec) +
                            ", component " + std::to_string(j));
        data.values(static_cast<Index>(rec), static_cast<Index>(j)) = Scalar(v);
      }
    } else {
      const auto* b = reinterpret_cast<const unsigned char*>(buf.data() + base + 4);
      for (std::uint32_t j = 0; j < d; ++j)
        data.values(static_cast<Index>(rec), static_cast<Index>(j)) = Scalar(b[j]);
    }
  }
  assign_default_ids(data);
  data.validate();
  return data;
}

DataMatrix load_csv(const std::string& path, bool has_labels) {
  const std::string buf = detail::slurp(path);
  std::vector<std::vector<Scalar>> rows;
  std::size_t line_begin = 0;
  std::size_t line_number = 0;
  while (line_begin < buf.size()) {
    std::size_t line_end = buf.find('\n', line_begin);
    if (line_end == std::string::npos) line_end = buf.size();
    std::size_t content_end = line_end;
    if (content_end > line_begin && buf[content_end - 1] == '\r') --content_end;
    ++line_number;
    if (content_end > line_begin) {
      std::vector<Scalar> cells;
      std::size_t cell_begin = line_begin;
      for (std::size_t pos = line_begin; pos <= content_end; ++pos) {
        if (pos == content_end || buf[pos] == ',') {
          std::size_t b = cell_begin, e = pos;
          while (b < e && (buf[b] == ' ' || buf[b] == '\t')) ++b;
          while (e > b && (buf[e - 1] == ' ' || buf[e - 1] == '\t')) --e;
          Scalar value = 0;
          const auto result = std::from_chars(buf.data() + b, buf.data() + e, value);
          if (result.ec != std::errc() || result.ptr != buf.data() + e)
            throw FormatError(path + ": row " + std::to_string(line_number) + ", column " +
                              std::to_string(cells.size() + 1) + ": not a number: '" +
                              buf.substr(b, e - b) + "'");
          if (!std::isfinite(value))
            throw FormatError(path + ": row " + std::to_string(line_number) + ", column " +
                              std::to_string(cells.size() + 1) + ": non-finite value");
          cells.push_back(value);
          cell_begin = pos + 1;
        }
      }
      if (!rows.empty() && cells.size() != rows.front().size())
        throw FormatError(path + ": row " + std::to_string(line_number) + " has " +
                          std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(rows.front().size()));
      rows.push_back(std::move(cells));
    }
    line_begin = line_end + 1;
  }
  if (rows.empty()) throw FormatError(path + ": empty CSV");
  const std::size_t total_cols = rows.front().size();
  if (has_labels && total_cols < 2)
    throw FormatError(path + ": labeled CSV needs at least two columns");

  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(total_cols - (has_labels ? 1 : 0));
  DataMatrix data;
  data.values.resize(n, d);
  if (has_labels) data.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) data.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (has_labels) {
      const Scalar raw = rows[static_cast<std::size_t>(i)].back();
      const auto rounded = std::llround(raw);
      if (std::abs(raw - Scalar(rounded)) > 1e-9)
        throw FormatError(path + ": row " + std::to_string(i + 1) +
                          ": label column is not an integer: " + std::to_string(raw));
      data.labels[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(rounded);
    }
  }
  assign_default_ids(data);
  data.validate();
  return data;
}

void save_native(const DataMatrix& data, const std::string& path) {
  data.validate();
  auto os = detail::open_out(path);
  detail::write_bytes(os, kDatasetMagic, 4);
  detail::write_pod(os, kDatasetVersion);
  detail::write_pod(os, std::uint32_t(data.has_labels() ? 1 : 0));
  detail::write_pod(os, std::uint64_t(data.rows()));
  detail::write_pod(os, std::uint64_t(data.dims()));
  detail::write_bytes(os, data.ids.data(), data.ids.size() * sizeof(std::int64_t));
  detail::write_bytes(os, data.values.data(),
                      std::size_t(data.rows()) * std::size_t(data.dims()) * sizeof(Scalar));
  if (data.has_labels())
    detail::write_bytes(os, data.labels.data(), data.labels.size() * sizeof(std::int32_t));
  if (!os) throw FormatError("write failure: " + path);
}

DataMatrix load_native(const std::string& path) {
  const std::string buf = detail::slurp(path);
  detail::ByteReader reader(buf, path);
  char magic[4];
  reader.read_into(magic, 4, "magic");
  if (std::memcmp(magic, kDatasetMagic, 4) != 0)
    throw FormatError(path + ": not a native dataset container (bad magic)");
  const auto version = reader.read<std::uint32_t>("version");
  if (version != kDatasetVersion)
    throw FormatError(path + ": unsupported dataset container version " + std::to_string(version));
  const auto flags = reader.read<std::uint32_t>("flags");
  const auto n = reader.read<std::uint64_t>("row count");
  const auto d = reader.read<std::uint64_t>("dimension count");
  if (d == 0 || n > (1u << 30) || d > (1u << 26))
    throw FormatError(path + ": implausible dataset shape " + std::to_string(n) + " x " +
                      std::to_string(d));
  DataMatrix data;
  data.ids.resize(n);
  reader.read_into(data.ids.data(), n * sizeof(std::int64_t), "ids");
  data.values.resize(static_cast<Index>(n), static_cast<Index>(d));
  reader.read_into(data.values.data(), n * d * sizeof(Scalar), "payload");
  if (flags & 1u) {
    data.labels.resize(n);
    reader.read_into(data.labels.data(), n * sizeof(std::int32_t), "labels");
  }
  data.validate();
  return data;
}

DataMatrix load_auto(const std::string& path) {
  if (ends_with(path, ".imhd")) return load_native(path);
  if (ends_with(path, ".csv")) return load_csv(path, false);
  if (ends_with(path, ".fvecs")) return load_vecs(path, VecsKind::fvecs);
  if (ends_with(path, ".bvecs")) return load_vecs(path, VecsKind::bvecs);
  if (ends_with(path, ".idx") || path.find("ubyte") != std::string::npos) return load_idx(path);
  throw ValidationError("cannot infer dataset format from file name: " + path);
}

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "swiss_roll") return SynthKind::swiss_roll;
  if (name == "gaussian_clusters") return SynthKind::gaussian_clusters;
  if (name == "digits") return SynthKind::digits;
  throw ValidationError("unknown synthetic dataset kind: " + name);
}

namespace {

DataMatrix synth_gaussian_clusters(Index n, const SynthParams& params, std::uint64_t seed) {
  if (params.clusters < 1) throw ValidationError("gaussian_clusters needs at least one cluster");
  if (params.dims < 1) throw ValidationError("gaussian_clusters needs dims >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal(0, 1);

  Matrix centers(params.clusters, params.dims);
  for (Index c = 0; c < params.clusters; ++c)
    for (Index j = 0; j < params.dims; ++j) centers(c, j) = params.separation * normal(rng);

  DataMatrix data;
  data.values.resize(n, params.dims);
  data.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Index c = i % params.clusters;
    for (Index j = 0; j < params.dims; ++j)
      data.values(i, j) = centers(c, j) + params.noise * normal(rng);
    data.labels[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(c);
  }
  return data;
}

DataMatrix synth_swiss_roll(Index n, const SynthParams& params, std::uint64_t seed) {
  if (params.segments < 1) throw ValidationError("swiss_roll needs segments >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> uniform(0, 1);
  std::normal_distribution<Scalar> normal(0, 1);

  DataMatrix data;
  data.values.resize(n, 3);
  data.labels.resize(static_cast<std::size_t>(n));
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (Index i = 0; i < n; ++i) {
    const Scalar u = uniform(rng);
    const Scalar v = uniform(rng);
    const Scalar t = 1.5 * pi * (1 + 2 * u);
    data.values(i, 0) = t * std::cos(t) + params.noise * normal(rng);
    data.values(i, 1) = 21.0 * v + params.noise * normal(rng);
    data.values(i, 2) = t * std::sin(t) + params.noise * normal(rng);
    const Index segment = std::min<Index>(params.segments - 1, static_cast<Index>(u * params.segments));
    data.labels[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(segment);
  }
  return data;
}

struct Stroke {
  std::vector<std::pair<Scalar, Scalar>> points;  // polyline in [0,1]^2
};

std::vector<Stroke> ellipse_stroke(Scalar cx, Scalar cy, Scalar rx, Scalar ry, int segments = 12) {
  Stroke s;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  for (int i = 0; i <= segments; ++i) {
    const Scalar a = 2 * pi * Scalar(i) / segments;
    s.points.emplace_back(cx + rx * std::cos(a), cy + ry * std::sin(a));
  }
  return {s};
}

const std::vector<std::vector<Stroke>>& digit_glyphs() {
  static const std::vector<std::vector<Stroke>> glyphs = [] {
    std::vector<std::vector<Stroke>> g(10);
    g[0] = ellipse_stroke(0.5, 0.5, 0.26, 0.36);
    g[1] = {Stroke{{{0.35, 0.28}, {0.55, 0.12}, {0.55, 0.88}}},
            Stroke{{{0.38, 0.88}, {0.72, 0.88}}}};
    g[2] = {Stroke{{{0.28, 0.3}, {0.32, 0.16}, {0.5, 0.1}, {0.68, 0.16}, {0.72, 0.3},
                    {0.62, 0.5}, {0.32, 0.74}, {0.27, 0.88}}},
            Stroke{{{0.27, 0.88}, {0.73, 0.88}}}};
    g[3] = {Stroke{{{0.28, 0.16}, {0.5, 0.1}, {0.68, 0.2}, {0.68, 0.34}, {0.5, 0.47},
                    {0.7, 0.6}, {0.7, 0.78}, {0.5, 0.9}, {0.28, 0.84}}}};
    g[4] = {Stroke{{{0.62, 0.12}, {0.26, 0.62}, {0.78, 0.62}}},
            Stroke{{{0.62, 0.34}, {0.62, 0.9}}}};
    g[5] = {Stroke{{{0.7, 0.12}, {0.32, 0.12}, {0.3, 0.44}, {0.55, 0.4}, {0.71, 0.55},
                    {0.71, 0.72}, {0.54, 0.88}, {0.3, 0.84}}}};
    g[6] = {Stroke{{{0.64, 0.1}, {0.42, 0.26}, {0.31, 0.5}, {0.31, 0.7}, {0.45, 0.88},
                    {0.63, 0.84}, {0.7, 0.68}, {0.58, 0.53}, {0.34, 0.57}}}};
    g[7] = {Stroke{{{0.26, 0.12}, {0.74, 0.12}, {0.44, 0.9}}}};
    g[8] = [] {
      auto top = ellipse_stroke(0.5, 0.3, 0.19, 0.17, 10);
      auto bottom = ellipse_stroke(0.5, 0.67, 0.23, 0.2, 10);
      top.push_back(bottom.front());
      return top;
    }();
    g[9] = [] {
      auto head = ellipse_stroke(0.52, 0.32, 0.2, 0.2, 10);
      head.push_back(Stroke{{{0.71, 0.36}, {0.66, 0.9}}});
      return head;
    }();
    return g;
  }();
  return glyphs;
}

Scalar segment_sqdist(Scalar px, Scalar py, Scalar ax, Scalar ay, Scalar bx, Scalar by) {
  const Scalar dx = bx - ax, dy = by - ay;
  const Scalar len2 = dx * dx + dy * dy;
  Scalar t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0;
  t = std::clamp(t, Scalar(0), Scalar(1));
  const Scalar qx = ax + t * dx, qy = ay + t * dy;
  return (px - qx) * (px - qx) + (py - qy) * (py - qy);
}

// 28x28 soft rasterization of jittered digit glyphs; raw pixels in [0,1].
DataMatrix synth_digits(Index n, const SynthParams& params, std::uint64_t seed) {
  constexpr int kSide = 28;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> uniform(0, 1);
  std::normal_distribution<Scalar> normal(0, 1);

  DataMatrix data;
  data.values.resize(n, kSide * kSide);
  data.labels.resize(static_cast<std::size_t>(n));
  const auto& glyphs = digit_glyphs();

  for (Index i = 0; i < n; ++i) {
    const int digit = static_cast<int>(i % 10);
    const Scalar angle = (uniform(rng) - 0.5) * 0.5;
    const Scalar scale = 0.8 + 0.3 * uniform(rng);
    const Scalar shear = (uniform(rng) - 0.5) * 0.3;
    const Scalar tx = (uniform(rng) - 0.5) * 0.12;
    const Scalar ty = (uniform(rng) - 0.5) * 0.12;
    const Scalar width = 0.042 + 0.022 * uniform(rng);
    const Scalar ca = std::cos(angle), sa = std::sin(angle);

    std::vector<Stroke> placed = glyphs[static_cast<std::size_t>(digit)];
    for (auto& stroke : placed)
      for (auto& [x, y] : stroke.points) {
        Scalar gx = x - 0.5, gy = y - 0.5;
        gx += shear * gy;
        const Scalar rx = scale * (ca * gx - sa * gy);
        const Scalar ry = scale * (sa * gx + ca * gy);
        x = rx + 0.5 + tx;
        y = ry + 0.5 + ty;
      }

    for (int py = 0; py < kSide; ++py) {
      for (int px = 0; px < kSide; ++px) {
        const Scalar cx = (px + 0.5) / kSide;
        const Scalar cy = (py + 0.5) / kSide;
        Scalar best = 1e9;
        for (const auto& stroke : placed)
          for (std::size_t s = 0; s + 1 < stroke.points.size(); ++s)
            best = std::min(best, segment_sqdist(cx, cy, stroke.points[s].first,
                                                 stroke.points[s].second,
                                                 stroke.points[s + 1].first,
                                                 stroke.points[s + 1].second));
        Scalar value = std::exp(-best / (2 * width * width));
        value += 0.04 * normal(rng);
        data.values(i, py * kSide + px) = std::clamp(value, Scalar(0), Scalar(1));
      }
    }
    data.labels[static_cast<std::size_t>(i)] = digit;
  }
  (void)params;
  return data;
}

}  // namespace

DataMatrix synth_manifold(SynthKind kind, Index n, const SynthParams& params, std::uint64_t seed) {
  if (n < 1) throw ValidationError("synthetic dataset needs n >= 1");
  DataMatrix data;
  switch (kind) {
    case SynthKind::gaussian_clusters: data = synth_gaussian_clusters(n, params, seed); break;
    case SynthKind::swiss_roll: data = synth_swiss_roll(n, params, seed); break;
    case SynthKind::digits: data = synth_digits(n, params, seed); break;
  }
  assign_default_ids(data);
  data.validate();
  return data;
}

SplitSpec split(const DataMatrix& data, Index test_count, std::uint64_t seed) {
  if (test_count >= data.rows())
    throw ValidationError("test_count " + std::to_string(test_count) +
                          " must be smaller than the dataset size " + std::to_string(data.rows()));
  if (test_count < 0) throw ValidationError("test_count must be nonnegative");

  std::vector<Index> all(static_cast<std::size_t>(data.rows()));
  for (Index i = 0; i < data.rows(); ++i) all[static_cast<std::size_t>(i)] = i;
  std::vector<Index> test_rows;
  test_rows.reserve(static_cast<std::size_t>(test_count));
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(test_rows), test_count, rng);

  std::vector<char> is_test(static_cast<std::size_t>(data.rows()), 0);
  SplitSpec spec;
  spec.seed = seed;
  spec.test_ids.reserve(test_rows.size());
  for (Index row : test_rows) {
    is_test[static_cast<std::size_t>(row)] = 1;
    spec.test_ids.push_back(data.ids[static_cast<std::size_t>(row)]);
  }
  spec.train_ids.reserve(static_cast<std::size_t>(data.rows() - test_count));
  for (Index i = 0; i < data.rows(); ++i)
    if (!is_test[static_cast<std::size_t>(i)]) spec.train_ids.push_back(data.ids[static_cast<std::size_t>(i)]);
  return spec;
}

DataMatrix subset(const DataMatrix& data, const std::vector<std::int64_t>& keep_ids) {
  std::unordered_map<std::int64_t, Index> row_of;
  row_of.reserve(data.ids.size());
  for (Index i = 0; i < data.rows(); ++i) row_of.emplace(data.ids[static_cast<std::size_t>(i)], i);

  DataMatrix out;
  out.values.resize(static_cast<Index>(keep_ids.size()), data.dims());
  out.ids = keep_ids;
  if (data.has_labels()) out.labels.resize(keep_ids.size());
  for (std::size_t i = 0; i < keep_ids.size(); ++i) {
    const auto it = row_of.find(keep_ids[i]);
    if (it == row_of.end())
      throw ValidationError("id " + std::to_string(keep_ids[i]) + " not present in dataset");
    out.values.row(static_cast<Index>(i)) = data.values.row(it->second);
    if (data.has_labels()) out.labels[i] = data.labels[static_cast<std::size_t>(it->second)];
  }
  return out;
}

void attach_labels(DataMatrix& data, const DataMatrix& label_column) {
  if (label_column.dims() != 1)
    throw ValidationError("label dataset must have exactly one column");
  if (label_column.rows() != data.rows())
    throw ValidationError("label count " + std::to_string(label_column.rows()) +
                          " does not match dataset rows " + std::to_string(data.rows()));
  data.labels.resize(static_cast<std::size_t>(data.rows()));
  for (Index i = 0; i < data.rows(); ++i) {
    const Scalar raw = label_column.values(i, 0);
    const auto rounded = std::llround(raw);
    if (std::abs(raw - Scalar(rounded)) > 1e-9)
      throw ValidationError("label at row " + std::to_string(i) + " is not an integer");
    data.labels[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(rounded);
  }
}

void scale_unit_norm(DataMatrix& data) {
  for (Index i = 0; i < data.rows(); ++i) {
    const Scalar norm = data.values.row(i).norm();
    if (norm > 0) data.values.row(i) /= norm;
  }
}

}  // namespace imh
