#include "mmt/corpus/feature_file.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "mmt/common/binary_io.hpp"
#include "mmt/common/rng.hpp"

namespace mmt::corpus {

FeatureStore::FeatureStore(std::size_t regions, std::size_t dim) : regions_(regions), dim_(dim) {
  if (regions == 0 || dim == 0) throw FeatureFileError("feature store needs L >= 1 and D >= 1");
}

void FeatureStore::add(const std::string& id, std::span<const float> features) {
  if (features.size() != regions_ * dim_) {
    throw FeatureFileError("feature record '" + id + "' has " + std::to_string(features.size()) +
                           " values, expected " + std::to_string(regions_ * dim_));
  }
  for (float v : features) {
    if (!std::isfinite(v)) throw FeatureFileError("feature record '" + id + "' contains a non-finite value");
  }
  if (!index_.emplace(id, ids_.size()).second) throw FeatureFileError("duplicate feature id '" + id + "'");
  ids_.push_back(id);
  data_.insert(data_.end(), features.begin(), features.end());
}

std::span<const float> FeatureStore::at(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw FeatureFileError("no visual features for example id '" + id + "'");
  const std::size_t n = regions_ * dim_;
  return std::span<const float>(data_).subspan(it->second * n, n);
}

void FeatureStore::write(std::ostream& out) const {
  io::write_bytes(out, "MMTF", 4);
  io::write_uint<std::uint32_t>(out, kVersion);
  io::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(ids_.size()));
  io::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(regions_));
  io::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
  const std::size_t n = regions_ * dim_;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    io::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(ids_[i].size()));
    io::write_bytes(out, ids_[i].data(), ids_[i].size());
    io::write_f32(out, std::span<const float>(data_).subspan(i * n, n));
  }
}

void FeatureStore::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FeatureFileError("cannot write feature file '" + path + "'");
  write(out);
  if (!out) throw FeatureFileError("error while writing feature file '" + path + "'");
}

FeatureStore FeatureStore::read(std::istream& in, const std::string& origin) {
  try {
    char magic[4];
    io::read_bytes(in, magic, 4, "magic");
    if (std::memcmp(magic, "MMTF", 4) != 0) throw FeatureFileError(origin + ": bad magic, not an MMTF feature file");
    const auto version = io::read_uint<std::uint32_t>(in, "version");
    if (version != kVersion) {
      throw FeatureFileError(origin + ": unsupported feature file version " + std::to_string(version));
    }
    const auto count = io::read_uint<std::uint32_t>(in, "count");
    const auto regions = io::read_uint<std::uint32_t>(in, "L");
    const auto dim = io::read_uint<std::uint32_t>(in, "D");
    FeatureStore store(regions, dim);
    std::vector<float> buf(static_cast<std::size_t>(regions) * dim);
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto id_len = io::read_uint<std::uint32_t>(in, "record id length");
      auto id = io::read_string(in, id_len, "record id");
      io::read_f32(in, buf, "record payload");
      store.add(id, buf);
    }
    return store;
  } catch (const io::TruncatedInput& e) {
    throw FeatureFileError(origin + ": " + e.what());
  }
}

FeatureStore FeatureStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FeatureFileError("cannot open feature file '" + path + "'");
  return read(in, path);
}

FeatureStore synthetic_features(const std::vector<std::string>& ids, std::size_t regions, std::size_t dim,
                                std::uint64_t seed) {
  FeatureStore store(regions, dim);
  Rng rng(seed);
  std::vector<float> buf(regions * dim);
  for (const auto& id : ids) {
    for (auto& v : buf) v = static_cast<float>(rng.uniform());
    store.add(id, buf);
  }
  return store;
}

}  // namespace mmt::corpus
