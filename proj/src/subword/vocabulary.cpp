#include "mmt/subword/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

namespace mmt::subword {
namespace {

constexpr std::string_view kReservedTokens[] = {"<pad>", "<unk>", "<s>", "</s>"};

}  // namespace

Vocabulary::Vocabulary() {
  for (auto t : kReservedTokens) push(std::string(t));
}

void Vocabulary::push(std::string token) {
  ids_.emplace(token, static_cast<TokenId>(tokens_.size()));
  tokens_.push_back(std::move(token));
}

Vocabulary Vocabulary::build(const std::vector<corpus::Tokens>& encoded) {
  std::map<std::string, std::uint64_t, std::less<>> freq;
  for (const auto& sentence : encoded) {
    for (const auto& tok : sentence) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> entries(freq.begin(), freq.end());
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary vocab;
  for (auto& [tok, count] : entries) {
    if (!vocab.contains(tok)) vocab.push(tok);
  }
  return vocab;
}

bool Vocabulary::contains(std::string_view token) const { return ids_.contains(std::string(token)); }

TokenId Vocabulary::id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw VocabularyError("token id " + std::to_string(id) + " out of range [0, " + std::to_string(tokens_.size()) +
                          ")");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<TokenId> Vocabulary::encode(const corpus::Tokens& tokens) const {
  std::vector<TokenId> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

corpus::Tokens Vocabulary::decode(std::span<const TokenId> ids) const {
  corpus::Tokens out;
  for (TokenId i : ids) {
    if (i == kEosId) break;
    if (i == kPadId || i == kBosId) continue;
    out.push_back(token(i));
  }
  return out;
}

void Vocabulary::write(std::ostream& out) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) out << tokens_[i] << '\t' << i << '\n';
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw VocabularyError("cannot write vocabulary '" + path + "'");
  write(out);
}

Vocabulary Vocabulary::read(std::istream& in, const std::string& origin) {
  Vocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) throw VocabularyError(where + "expected 'token<TAB>id'");
    std::size_t id = 0;
    const auto* first = line.data() + tab + 1;
    const auto* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, id);
    if (ec != std::errc{} || ptr != last || first == last) throw VocabularyError(where + "bad id");
    if (id != line_no - 1) throw VocabularyError(where + "ids must be contiguous from 0");
    auto token = line.substr(0, tab);
    if (id < kReserved) {
      if (token != kReservedTokens[id]) throw VocabularyError(where + "reserved id " + std::to_string(id) + " must be " + std::string(kReservedTokens[id]));
      continue;
    }
    if (vocab.contains(token)) throw VocabularyError(where + "duplicate token '" + token + "'");
    vocab.push(std::move(token));
  }
  if (line_no < kReserved) throw VocabularyError(origin + ": missing reserved tokens");
  return vocab;
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw VocabularyError("cannot open vocabulary '" + path + "'");
  return read(in, path);
}

}  // namespace mmt::subword
