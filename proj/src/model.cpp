#include "imh/model.hpp"

#include "imh/distance.hpp"
#include "io_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <sstream>

namespace imh {

namespace {
constexpr char kModelMagic[4] = {'I', 'M', 'H', 'M'};
}  // namespace

void HashModel::validate() const {
  if (centers.rows() < 1) throw ValidationError("model has no base centers");
  if (embedding.size() != centers.rows())
    throw ValidationError("embedding rows " + std::to_string(embedding.size()) +
                          " do not match base size " + std::to_string(centers.rows()));
  if (embedding.dims() < 1) throw ValidationError("model has empty code length");
  if (embedding.center_offset.size() != embedding.dims())
    throw ValidationError("center offset length does not match code length");
  if (k < 1 || k > centers.rows())
    throw ValidationError("model neighbor count k=" + std::to_string(k) + " out of range");
  if (!(bandwidth.sigma > 0) || !std::isfinite(bandwidth.sigma))
    throw ValidationError("model bandwidth must be positive and finite");
  if (!centers.allFinite() || !embedding.values.allFinite() || !embedding.center_offset.allFinite())
    throw ValidationError("model contains non-finite values");
}

Vector extend_point(const HashModel& model, const RowVector& x) {
  if (x.size() != model.feature_dims())
    throw ValidationError("point has " + std::to_string(x.size()) + " dims, model expects " +
                          std::to_string(model.feature_dims()));
  if (!x.allFinite()) throw ValidationError("point contains non-finite values");

  const Index m = model.base_size();
  const Index k = model.k;
  Vector d2 = (model.centers.rowwise() - x).rowwise().squaredNorm();

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index(0));
  const auto closer = [&](Index a, Index b) {
    return d2(a) < d2(b) || (d2(a) == d2(b) && a < b);
  };
  if (k < m) std::nth_element(order.begin(), order.begin() + k, order.end(), closer);
  std::sort(order.begin(), order.begin() + k, closer);

  const Scalar inv_sigma2 = Scalar(1) / (model.bandwidth.sigma * model.bandwidth.sigma);
  Vector weights(k);
  for (Index s = 0; s < k; ++s)
    weights(s) = std::max(std::numeric_limits<Scalar>::min(),
                          std::exp(-d2(order[static_cast<std::size_t>(s)]) * inv_sigma2));
  weights /= weights.sum();

  Vector y = Vector::Zero(model.code_length());
  for (Index s = 0; s < k; ++s)
    y += weights(s) * model.embedding.values.row(order[static_cast<std::size_t>(s)]).transpose();
  return y - model.embedding.center_offset;
}

Matrix extend_batch(const HashModel& model, const Matrix& data) {
  if (data.rows() == 0) return Matrix(0, model.code_length());
  const AffinityWeights w =
      normalize_rows(knn_weights(data, model.centers, model.k, model.bandwidth));
  Matrix y = multiply(w, model.embedding.values);
  y.rowwise() -= model.embedding.center_offset.transpose();
  return y;
}

CodeSet hash(const HashModel& model, const Matrix& data, const std::vector<std::int64_t>& ids) {
  return pack_signs(extend_batch(model, data), ids);
}

void save_model(const HashModel& model, const std::string& path) {
  model.validate();
  std::ostringstream body(std::ios::binary);
  detail::write_bytes(body, kModelMagic, 4);
  detail::write_pod(body, HashModel::kFormatVersion);
  detail::write_pod(body, std::uint32_t(model.embedding.backend));
  detail::write_pod(body, std::uint32_t(model.bandwidth.heuristic));
  detail::write_pod(body, std::uint64_t(model.base_size()));
  detail::write_pod(body, std::uint64_t(model.feature_dims()));
  detail::write_pod(body, std::uint64_t(model.code_length()));
  detail::write_pod(body, std::uint64_t(model.k));
  detail::write_pod(body, model.bandwidth.sigma);
  detail::write_pod(body, model.config_hash);
  detail::write_bytes(body, model.centers.data(),
                      std::size_t(model.base_size() * model.feature_dims()) * sizeof(Scalar));
  detail::write_bytes(body, model.embedding.values.data(),
                      std::size_t(model.base_size() * model.code_length()) * sizeof(Scalar));
  detail::write_bytes(body, model.embedding.center_offset.data(),
                      std::size_t(model.code_length()) * sizeof(Scalar));

  const std::string payload = std::move(body).str();
  const std::uint32_t checksum = detail::crc32(payload.data(), payload.size());
  auto os = detail::open_out(path);
  detail::write_bytes(os, payload.data(), payload.size());
  detail::write_pod(os, checksum);
  if (!os) throw FormatError("write failure: " + path);
}

HashModel load_model(const std::string& path) {
  const std::string buf = detail::slurp(path);
  if (buf.size() < 8) throw FormatError(path + ": too small to be a model container");
  const std::string payload = buf.substr(0, buf.size() - 4);
  std::uint32_t stored = 0;
  std::memcpy(&stored, buf.data() + buf.size() - 4, 4);
  if (detail::crc32(payload.data(), payload.size()) != stored)
    throw FormatError(path + ": checksum mismatch (corrupt model file)");

  detail::ByteReader reader(payload, path);
  char magic[4];
  reader.read_into(magic, 4, "magic");
  if (std::memcmp(magic, kModelMagic, 4) != 0)
    throw FormatError(path + ": not a model container (bad magic)");
  const auto version = reader.read<std::uint32_t>("version");
  if (version != HashModel::kFormatVersion)
    throw FormatError(path + ": unsupported model format version " + std::to_string(version) +
                      " (expected " + std::to_string(HashModel::kFormatVersion) + ")");

  HashModel model;
  model.embedding.backend = static_cast<EmbeddingBackend>(reader.read<std::uint32_t>("backend"));
  model.bandwidth.heuristic =
      static_cast<Bandwidth::Heuristic>(reader.read<std::uint32_t>("bandwidth heuristic"));
  const auto m = reader.read<std::uint64_t>("base size");
  const auto d = reader.read<std::uint64_t>("feature dims");
  const auto r = reader.read<std::uint64_t>("code length");
  const auto k = reader.read<std::uint64_t>("neighbor count");
  model.bandwidth.sigma = reader.read<Scalar>("sigma");
  model.config_hash = reader.read<std::uint64_t>("config hash");
  if (m == 0 || d == 0 || r == 0 || m > (1u << 24) || d > (1u << 26) || r > (1u << 20))
    throw FormatError(path + ": implausible model shape");
  model.k = static_cast<Index>(k);
  model.centers.resize(static_cast<Index>(m), static_cast<Index>(d));
  reader.read_into(model.centers.data(), m * d * sizeof(Scalar), "centers");
  model.embedding.values.resize(static_cast<Index>(m), static_cast<Index>(r));
  reader.read_into(model.embedding.values.data(), m * r * sizeof(Scalar), "embedding");
  model.embedding.center_offset.resize(static_cast<Index>(r));
  reader.read_into(model.embedding.center_offset.data(), r * sizeof(Scalar), "center offset");
  model.validate();
  return model;
}

}  // namespace imh
