#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mmt/corpus/text.hpp"

namespace mmt::subword {

using corpus::Tokens;

/// Suffix carried by every non-final subword unit of a word.
inline constexpr std::string_view kContinuation = "@@";

class BpeFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MergeRule {
  std::string left;
  std::string right;
  std::size_t rank = 0;
  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

/// Ordered merge table. Ranks are the 0-based learning order.
class BpeModel {
 public:
  BpeModel() = default;
  /// Takes (left, right) pairs in rank order; rejects duplicates.
  explicit BpeModel(std::vector<std::pair<std::string, std::string>> merges);

  const std::vector<MergeRule>& merges() const noexcept { return merges_; }
  std::size_t size() const noexcept { return merges_.size(); }

  /// Subword units of one word, without continuation markers.
  std::vector<std::string> segment(std::string_view word) const;

  /// apply_bpe: segments every token; non-final units get the "@@" suffix.
  Tokens apply(const Tokens& tokens) const;

  /// Model truncated to its first k merges.
  BpeModel prefix(std::size_t k) const;

  /// Text form: "#mmt-bpe v1" then "left right" per line in rank order.
  void write(std::ostream& out) const;
  void save(const std::string& path) const;
  static BpeModel read(std::istream& in, const std::string& origin);
  static BpeModel load(const std::string& path);

  /// FNV-1a 64 over the serialized text; ties checkpoints to a merge table.
  std::uint64_t fingerprint() const;

  friend bool operator==(const BpeModel& a, const BpeModel& b) { return a.merges_ == b.merges_; }

 private:
  std::vector<MergeRule> merges_;
  std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> ranks_;
};

/// Word-frequency table the learner runs on.
using WordCounts = std::map<std::string, std::uint64_t, std::less<>>;

WordCounts count_words(const std::vector<Tokens>& sentences);

/// Greedy joint BPE: words start as code-point sequences; the most frequent
/// adjacent symbol pair (ties broken by lexicographic (left, right), bytewise)
/// is merged everywhere, until n_merges are learned or the best pair occurs
/// fewer than twice.
BpeModel learn_bpe(const WordCounts& words, std::size_t n_merges);
BpeModel learn_bpe(const std::vector<Tokens>& sentences, std::size_t n_merges);

/// Joins each run "a@@ b@@ c" into "abc".
Tokens decode_bpe(const Tokens& subwords);

}  // namespace mmt::subword
