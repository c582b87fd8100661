#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mmt/corpus/text.hpp"

namespace mmt {

using TokenId = std::int32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kBosId = 2;
inline constexpr TokenId kEosId = 3;

}  // namespace mmt

namespace mmt::subword {

class VocabularyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Token <-> id map for one side. Ids 0..3 are <pad>, <unk>, <s>, </s>.
class Vocabulary {
 public:
  static constexpr std::size_t kReserved = 4;

  Vocabulary();

  /// Every distinct token of the (BPE-encoded) corpus, most frequent first,
  /// ties in bytewise lexicographic order.
  static Vocabulary build(const std::vector<corpus::Tokens>& encoded);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool contains(std::string_view token) const;
  /// Unknown tokens map to <unk>.
  TokenId id(std::string_view token) const;
  /// Throws VocabularyError for ids outside [0, size()).
  const std::string& token(TokenId id) const;

  std::vector<TokenId> encode(const corpus::Tokens& tokens) const;
  /// Stops at </s>; drops <pad> and <s>; keeps <unk> as its surface form.
  corpus::Tokens decode(std::span<const TokenId> ids) const;

  /// "token<TAB>id" per line, reserved tokens included, in id order.
  void write(std::ostream& out) const;
  void save(const std::string& path) const;
  static Vocabulary read(std::istream& in, const std::string& origin);
  static Vocabulary load(const std::string& path);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  void push(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

}  // namespace mmt::subword
