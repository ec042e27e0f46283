#include "imh/baselines.hpp"

#include "imh/embeddings.hpp"
#include "io_util.hpp"

#include <algorithm>
#include <cstring>
#include <random>
#include <sstream>

namespace imh {

namespace {

constexpr char kLinearMagic[4] = {'I', 'M', 'H', 'P'};

Scalar median(std::vector<Scalar> values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2;
}

}  // namespace

LinearHashModel lsh_fit(const Matrix& data, Index r, std::uint64_t seed) {
  if (r < 1) throw ValidationError("lsh needs r >= 1");
  if (data.rows() < 1) throw ValidationError("lsh needs a nonempty dataset");

  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal(0, 1);
  LinearHashModel model;
  model.kind = LinearHashModel::Kind::lsh;
  model.projection.resize(r, data.cols());
  for (Index b = 0; b < r; ++b)
    for (Index j = 0; j < data.cols(); ++j) model.projection(b, j) = normal(rng);

  const Matrix projected = data * model.projection.transpose();  // n x r
  model.offset.resize(r);
  std::vector<Scalar> column(static_cast<std::size_t>(data.rows()));
  for (Index b = 0; b < r; ++b) {
    for (Index i = 0; i < data.rows(); ++i) column[static_cast<std::size_t>(i)] = projected(i, b);
    model.offset(b) = median(column);
  }
  return model;
}

LinearHashModel pcah_fit(const Matrix& data, Index r) {
  const PcaBasis basis = pca_basis(data, r);
  LinearHashModel model;
  model.kind = LinearHashModel::Kind::pcah;
  model.projection = basis.components.transpose();
  model.offset = basis.components.transpose() * basis.mean;
  model.warnings = basis.warnings;
  return model;
}

CodeSet linear_encode(const LinearHashModel& model, const Matrix& data,
                      const std::vector<std::int64_t>& ids) {
  if (data.cols() != model.feature_dims())
    throw ValidationError("data has " + std::to_string(data.cols()) + " dims, model expects " +
                          std::to_string(model.feature_dims()));
  Matrix scores = data * model.projection.transpose();
  scores.rowwise() -= model.offset.transpose();
  return pack_signs(scores, ids);
}

std::pair<LinearHashModel, CodeSet> lsh_baseline(const DataMatrix& data, Index r,
                                                 std::uint64_t seed) {
  LinearHashModel model = lsh_fit(data.values, r, seed);
  CodeSet codes = linear_encode(model, data.values, data.ids);
  return {std::move(model), std::move(codes)};
}

CodeSet pcah_baseline(const DataMatrix& data, Index r) {
  const LinearHashModel model = pcah_fit(data.values, r);
  return linear_encode(model, data.values, data.ids);
}

void save_linear_model(const LinearHashModel& model, const std::string& path) {
  std::ostringstream body(std::ios::binary);
  detail::write_bytes(body, kLinearMagic, 4);
  detail::write_pod(body, LinearHashModel::kFormatVersion);
  detail::write_pod(body, std::uint32_t(model.kind));
  detail::write_pod(body, std::uint64_t(model.code_length()));
  detail::write_pod(body, std::uint64_t(model.feature_dims()));
  detail::write_pod(body, model.config_hash);
  detail::write_bytes(body, model.projection.data(),
                      std::size_t(model.code_length() * model.feature_dims()) * sizeof(Scalar));
  detail::write_bytes(body, model.offset.data(), std::size_t(model.code_length()) * sizeof(Scalar));

  const std::string payload = std::move(body).str();
  const std::uint32_t checksum = detail::crc32(payload.data(), payload.size());
  auto os = detail::open_out(path);
  detail::write_bytes(os, payload.data(), payload.size());
  detail::write_pod(os, checksum);
  if (!os) throw FormatError("write failure: " + path);
}

LinearHashModel load_linear_model(const std::string& path) {
  const std::string buf = detail::slurp(path);
  if (buf.size() < 8) throw FormatError(path + ": too small to be a linear model container");
  const std::string payload = buf.substr(0, buf.size() - 4);
  std::uint32_t stored = 0;
  std::memcpy(&stored, buf.data() + buf.size() - 4, 4);
  if (detail::crc32(payload.data(), payload.size()) != stored)
    throw FormatError(path + ": checksum mismatch (corrupt model file)");

  detail::ByteReader reader(payload, path);
  char magic[4];
  reader.read_into(magic, 4, "magic");
  if (std::memcmp(magic, kLinearMagic, 4) != 0)
    throw FormatError(path + ": not a linear model container (bad magic)");
  const auto version = reader.read<std::uint32_t>("version");
  if (version != LinearHashModel::kFormatVersion)
    throw FormatError(path + ": unsupported linear model version " + std::to_string(version));

  LinearHashModel model;
  model.kind = static_cast<LinearHashModel::Kind>(reader.read<std::uint32_t>("kind"));
  const auto r = reader.read<std::uint64_t>("code length");
  const auto d = reader.read<std::uint64_t>("feature dims");
  model.config_hash = reader.read<std::uint64_t>("config hash");
  if (r == 0 || d == 0 || r > (1u << 20) || d > (1u << 26))
    throw FormatError(path + ": implausible linear model shape");
  model.projection.resize(static_cast<Index>(r), static_cast<Index>(d));
  reader.read_into(model.projection.data(), r * d * sizeof(Scalar), "projection");
  model.offset.resize(static_cast<Index>(r));
  reader.read_into(model.offset.data(), r * sizeof(Scalar), "offset");
  return model;
}

}  // namespace imh
