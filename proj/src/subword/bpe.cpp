#include "mmt/subword/bpe.hpp"

#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "mmt/corpus/text.hpp"

namespace mmt::subword {
namespace {

std::vector<std::string> code_points(std::string_view word) {
  std::vector<std::string> out;
  for (char32_t cp : corpus::utf8_decode(word)) {
    std::string s;
    corpus::utf8_append(s, cp);
    out.push_back(std::move(s));
  }
  return out;
}

struct PairHash {
  std::size_t operator()(const std::pair<int, int>& p) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.first)) << 32) |
                                      static_cast<std::uint32_t>(p.second));
  }
};

// Incremental pair statistics over interned symbols.
class PairLearner {
 public:
  explicit PairLearner(const WordCounts& words) {
    for (const auto& [word, count] : words) {
      std::vector<int> syms;
      for (auto& s : code_points(word)) syms.push_back(intern(s));
      words_.push_back(std::move(syms));
      counts_.push_back(count);
    }
    for (std::size_t w = 0; w < words_.size(); ++w) add_word(w, +1);
  }

  BpeModel run(std::size_t n_merges) {
    std::vector<std::pair<std::string, std::string>> merges;
    while (merges.size() < n_merges && !queue_.empty()) {
      const auto best = *queue_.begin();
      if (best.count < 2) break;
      const std::pair<int, int> pair{best.left_id, best.right_id};
      merges.emplace_back(symbols_[pair.first], symbols_[pair.second]);
      merge(pair);
    }
    return BpeModel(std::move(merges));
  }

 private:
  struct Entry {
    std::uint64_t count;
    std::string_view left;
    std::string_view right;
    int left_id;
    int right_id;
    bool operator<(const Entry& o) const {
      if (count != o.count) return count > o.count;
      if (left != o.left) return left < o.left;
      return right < o.right;
    }
  };

  int intern(const std::string& s) {
    const auto [it, inserted] = symbol_ids_.emplace(s, static_cast<int>(symbols_.size()));
    if (inserted) symbols_.push_back(s);
    return it->second;
  }

  Entry entry(const std::pair<int, int>& p, std::uint64_t count) const {
    return Entry{count, symbols_[p.first], symbols_[p.second], p.first, p.second};
  }

  void bump(const std::pair<int, int>& p, std::int64_t delta, std::size_t word) {
    auto& c = pair_counts_[p];
    if (c > 0) queue_.erase(entry(p, c));
    c = static_cast<std::uint64_t>(static_cast<std::int64_t>(c) + delta);
    if (c > 0) {
      queue_.insert(entry(p, c));
      if (delta > 0) pair_words_[p].insert(word);
    } else {
      pair_counts_.erase(p);
    }
  }

  void add_word(std::size_t w, int sign) {
    const auto& syms = words_[w];
    const auto delta = sign * static_cast<std::int64_t>(counts_[w]);
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) bump({syms[i], syms[i + 1]}, delta, w);
  }

  void merge(const std::pair<int, int>& pair) {
    const int merged = intern(symbols_[pair.first] + symbols_[pair.second]);
    const auto affected_it = pair_words_.find(pair);
    if (affected_it == pair_words_.end()) return;
    const std::vector<std::size_t> affected(affected_it->second.begin(), affected_it->second.end());
    for (std::size_t w : affected) {
      auto& syms = words_[w];
      bool present = false;
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        if (syms[i] == pair.first && syms[i + 1] == pair.second) {
          present = true;
          break;
        }
      }
      if (!present) continue;
      add_word(w, -1);
      std::vector<int> out;
      out.reserve(syms.size());
      for (std::size_t i = 0; i < syms.size();) {
        if (i + 1 < syms.size() && syms[i] == pair.first && syms[i + 1] == pair.second) {
          out.push_back(merged);
          i += 2;
        } else {
          out.push_back(syms[i]);
          ++i;
        }
      }
      syms = std::move(out);
      add_word(w, +1);
    }
    pair_words_.erase(pair);
  }

  // Deque: queue entries hold views into these strings, so they must not move.
  std::deque<std::string> symbols_;
  std::unordered_map<std::string, int> symbol_ids_;
  std::vector<std::vector<int>> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::pair<int, int>, std::uint64_t, PairHash> pair_counts_;
  std::unordered_map<std::pair<int, int>, std::set<std::size_t>, PairHash> pair_words_;
  std::set<Entry> queue_;
};

}  // namespace

BpeModel::BpeModel(std::vector<std::pair<std::string, std::string>> merges) {
  merges_.reserve(merges.size());
  for (auto& [l, r] : merges) {
    if (l.empty() || r.empty()) throw BpeFormatError("merge rule with an empty side");
    const std::size_t rank = merges_.size();
    if (!ranks_.emplace(std::make_pair(l, r), rank).second) {
      throw BpeFormatError("duplicate merge rule '" + l + " " + r + "'");
    }
    merges_.push_back(MergeRule{std::move(l), std::move(r), rank});
  }
}

std::vector<std::string> BpeModel::segment(std::string_view word) const {
  auto syms = code_points(word);
  while (syms.size() > 1) {
    std::size_t best_rank = merges_.size();
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      const auto it = ranks_.find(std::make_pair(syms[i], syms[i + 1]));
      if (it != ranks_.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == merges_.size()) break;
    const auto& rule = merges_[best_rank];
    std::vector<std::string> out;
    out.reserve(syms.size());
    for (std::size_t i = 0; i < syms.size();) {
      if (i + 1 < syms.size() && syms[i] == rule.left && syms[i + 1] == rule.right) {
        out.push_back(syms[i] + syms[i + 1]);
        i += 2;
      } else {
        out.push_back(std::move(syms[i]));
        ++i;
      }
    }
    syms = std::move(out);
  }
  return syms;
}

Tokens BpeModel::apply(const Tokens& tokens) const {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto units = segment(tok);
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (i + 1 < units.size()) units[i] += kContinuation;
      out.push_back(std::move(units[i]));
    }
  }
  return out;
}

BpeModel BpeModel::prefix(std::size_t k) const {
  std::vector<std::pair<std::string, std::string>> m;
  for (std::size_t i = 0; i < std::min(k, merges_.size()); ++i) m.emplace_back(merges_[i].left, merges_[i].right);
  return BpeModel(std::move(m));
}

void BpeModel::write(std::ostream& out) const {
  out << "#mmt-bpe v1\n";
  for (const auto& m : merges_) out << m.left << ' ' << m.right << '\n';
}

void BpeModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BpeFormatError("cannot write BPE model '" + path + "'");
  write(out);
}

BpeModel BpeModel::read(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line) || line != "#mmt-bpe v1") {
    throw BpeFormatError(origin + ": missing '#mmt-bpe v1' header");
  }
  std::vector<std::pair<std::string, std::string>> merges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0 || sp + 1 == line.size() || line.find(' ', sp + 1) != std::string::npos) {
      throw BpeFormatError(origin + ":" + std::to_string(line_no) + ": expected 'left right'");
    }
    merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
  }
  return BpeModel(std::move(merges));
}

BpeModel BpeModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BpeFormatError("cannot open BPE model '" + path + "'");
  return read(in, path);
}

std::uint64_t BpeModel::fingerprint() const {
  std::ostringstream ss;
  write(ss);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ss.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

WordCounts count_words(const std::vector<Tokens>& sentences) {
  WordCounts counts;
  for (const auto& s : sentences) {
    for (const auto& w : s) ++counts[w];
  }
  return counts;
}

BpeModel learn_bpe(const WordCounts& words, std::size_t n_merges) {
  if (n_merges == 0 || words.empty()) return BpeModel{};
  return PairLearner(words).run(n_merges);
}

BpeModel learn_bpe(const std::vector<Tokens>& sentences, std::size_t n_merges) {
  return learn_bpe(count_words(sentences), n_merges);
}

Tokens decode_bpe(const Tokens& subwords) {
  Tokens out;
  std::string current;
  bool open = false;
  for (const auto& unit : subwords) {
    if (unit.size() >= kContinuation.size() && unit.ends_with(kContinuation)) {
      current.append(unit, 0, unit.size() - kContinuation.size());
      open = true;
    } else {
      current += unit;
      out.push_back(std::move(current));
      current.clear();
      open = false;
    }
  }
  if (open) out.push_back(std::move(current));
  return out;
}

}  // namespace mmt::subword
