#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mmt::corpus {

class FeatureFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-memory set of per-example visual feature matrices (L regions x D dims),
/// keyed by example id, in insertion order.
///
/// On-disk "MMTF" layout, all integers little-endian:
///   'M' 'M' 'T' 'F', u32 version (=1), u32 count, u32 L, u32 D,
///   then count records of: u32 id byte length, UTF-8 id, L*D f32 row-major.
class FeatureStore {
 public:
  static constexpr std::uint32_t kVersion = 1;

  FeatureStore(std::size_t regions, std::size_t dim);

  static FeatureStore load(const std::string& path);
  static FeatureStore read(std::istream& in, const std::string& origin);
  void save(const std::string& path) const;
  void write(std::ostream& out) const;

  /// Appends a record; throws on duplicate id, wrong size, or non-finite values.
  void add(const std::string& id, std::span<const float> features);

  bool contains(const std::string& id) const { return index_.contains(id); }
  /// Throws FeatureFileError naming the id when absent.
  std::span<const float> at(const std::string& id) const;

  std::size_t regions() const noexcept { return regions_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::size_t regions_;
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

/// Seeded synthetic features, uniform in [0, 1), one record per id. Stands in
/// for extracted CNN features in tests and fixtures.
FeatureStore synthetic_features(const std::vector<std::string>& ids, std::size_t regions, std::size_t dim,
                                std::uint64_t seed);

}  // namespace mmt::corpus
