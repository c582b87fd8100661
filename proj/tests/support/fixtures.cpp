#include "fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "mmt/inference/translate.hpp"
#include "mmt/model/nmt_model.hpp"

namespace mmt::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  Rng rng(static_cast<std::uint64_t>(std::hash<std::string>{}(tag)) ^
          static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(this)));
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = fs::temp_directory_path() / ("mmt-" + tag + "-" + std::to_string(rng.next_u64() % 1000000007));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string shell_output(const std::string& command) {
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run: " + command);
  std::string out;
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  if (::pclose(pipe) != 0) throw std::runtime_error("command failed: " + command);
  return out;
}

model::ModelConfig grad_check_config() {
  model::ModelConfig c;
  c.emb_size = 4;
  c.hidden_size = 5;
  c.n_layers = 1;
  c.src_vocab = 7;
  c.tgt_vocab = 7;
  c.visual_regions = 3;
  c.visual_dim = 2;
  c.dropout = 0.0;
  return c;
}

CopyTask make_copy_task(std::size_t n_pairs, std::uint64_t seed) {
  CopyTask task;
  constexpr std::size_t kWords = 8;
  task.model.emb_size = 16;
  task.model.hidden_size = 32;
  task.model.n_layers = 1;
  task.model.src_vocab = subword::Vocabulary::kReserved + kWords;
  task.model.tgt_vocab = subword::Vocabulary::kReserved + kWords;
  task.model.visual_regions = 4;
  task.model.visual_dim = 8;
  task.model.dropout = 0.0;

  task.train.batch_size = 8;
  task.train.max_epochs = 300;
  task.train.lr = 0.01;
  task.train.dropout = 0.0;
  task.train.seed = seed;
  task.train.mode = trainer::TrainMode::scratch;

  Rng rng(seed);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    model::SentencePair p;
    const auto len = 2 + rng.below(4);
    for (std::size_t t = 0; t < len; ++t) {
      p.src.push_back(static_cast<TokenId>(subword::Vocabulary::kReserved + rng.below(kWords)));
    }
    p.tgt = p.src;
    p.feature_key = std::to_string(i) + "_img" + std::to_string(i % 5);
    ids.push_back(p.feature_key);
    task.pairs.push_back(std::move(p));
  }
  task.features = corpus::synthetic_features(ids, task.model.visual_regions, task.model.visual_dim, seed + 1);
  return task;
}

double copy_accuracy(const model::NmtModel<float>& net, const CopyTask& task, bool with_features) {
  std::size_t exact = 0;
  inference::BeamOptions options;
  options.max_len = 50;
  for (const auto& p : task.pairs) {
    ad::Tensor<float> visual({task.model.visual_regions, task.model.visual_dim});
    if (with_features) {
      const auto f = task.features.at(p.feature_key);
      std::copy(f.begin(), f.end(), visual.data().begin());
    }
    const inference::ModelScorer scorer(net, p.src, visual);
    if (inference::greedy_decode(scorer, options).tokens == p.tgt) ++exact;
  }
  return static_cast<double>(exact) / static_cast<double>(task.pairs.size());
}

ToyScorer::ToyScorer(std::size_t vocab, std::uint64_t seed, double temperature)
    : vocab_(vocab), seed_(seed), temperature_(temperature) {}

double ToyScorer::log_prob(const std::vector<TokenId>& prefix, TokenId token) const {
  std::uint64_t h = seed_ * 0x9E3779B97F4A7C15ULL + prefix.size();
  for (auto t : prefix) h = (h ^ static_cast<std::uint64_t>(t + 1)) * 0x100000001B3ULL;
  Rng rng(h);
  std::vector<double> logits(vocab_);
  for (auto& l : logits) l = temperature_ * rng.normal();
  double m = logits[0];
  for (double l : logits) m = std::max(m, l);
  double z = 0.0;
  for (double l : logits) z += std::exp(l - m);
  return logits[static_cast<std::size_t>(token)] - m - std::log(z);
}

inference::ScoredStep<ToyScorer::State> ToyScorer::step(const State& state, TokenId prev) const {
  State next = state;
  if (state.started) next.prefix.push_back(prev);
  next.started = true;
  inference::ScoredStep<State> out;
  for (std::size_t w = 0; w < vocab_; ++w) out.log_probs.push_back(log_prob(next.prefix, static_cast<TokenId>(w)));
  out.state = std::move(next);
  return out;
}

namespace {

void enumerate(const ToyScorer& scorer, std::vector<TokenId>& prefix, double ll, std::size_t max_len, TokenId eos,
               inference::Hypothesis& best, bool& found) {
  const double closed = ll + scorer.log_prob(prefix, eos);
  if (!found || closed > best.log_likelihood) {
    best = {prefix, closed, true};
    found = true;
  }
  if (prefix.size() == max_len) return;
  for (std::size_t w = 0; w < scorer.vocab_size(); ++w) {
    const auto token = static_cast<TokenId>(w);
    if (token == eos) continue;
    const double next = ll + scorer.log_prob(prefix, token);
    prefix.push_back(token);
    enumerate(scorer, prefix, next, max_len, eos, best, found);
    prefix.pop_back();
  }
}

}  // namespace

inference::Hypothesis enumerate_best(const ToyScorer& scorer, std::size_t max_len, TokenId eos) {
  inference::Hypothesis best;
  bool found = false;
  std::vector<TokenId> prefix;
  enumerate(scorer, prefix, 0.0, max_len, eos, best, found);
  return best;
}

std::size_t search_space_size(std::size_t vocab, std::size_t max_len) {
  std::size_t total = 0, layer = 1;
  for (std::size_t k = 0; k <= max_len; ++k) {
    total += layer;
    layer *= vocab - 1;
  }
  return total;
}

std::vector<std::pair<std::string, std::string>> naive_bpe(const std::map<std::string, std::uint64_t>& words,
                                                           std::size_t n_merges) {
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> state;
  for (const auto& [word, count] : words) {
    std::vector<std::string> symbols;
    for (char32_t cp : corpus::utf8_decode(word)) symbols.push_back(corpus::utf8_encode(std::u32string(1, cp)));
    state.emplace_back(std::move(symbols), count);
  }
  std::vector<std::pair<std::string, std::string>> merges;
  while (merges.size() < n_merges) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> pairs;
    for (const auto& [symbols, count] : state) {
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) pairs[{symbols[i], symbols[i + 1]}] += count;
    }
    const std::pair<std::string, std::string>* best = nullptr;
    std::uint64_t best_count = 0;
    for (const auto& [pair, count] : pairs) {
      if (count > best_count) {
        best = &pair;
        best_count = count;
      }
    }
    if (!best || best_count < 2) break;
    const auto chosen = *best;
    merges.push_back(chosen);
    for (auto& [symbols, count] : state) {
      std::vector<std::string> merged;
      for (std::size_t i = 0; i < symbols.size();) {
        if (i + 1 < symbols.size() && symbols[i] == chosen.first && symbols[i + 1] == chosen.second) {
          merged.push_back(chosen.first + chosen.second);
          i += 2;
        } else {
          merged.push_back(symbols[i++]);
        }
      }
      symbols = std::move(merged);
    }
  }
  return merges;
}

std::vector<std::string> bpe_fixture_words() {
  return {"low",     "low",     "low",     "lower",   "lowest",  "newer",   "newer",  "wider",   "wide",
          "widest",  "newest",  "new",     "slow",    "slower",  "slowly",  "flow",   "flower",  "flowers",
          "glow",    "glowing", "growing", "going",   "doing",   "done",    "lone",   "alone",   "aaaa",
          "aaa",     "banana",  "bandana", "cabana",  "ananas",  "एक",      "एक",     "आदमी",    "आदमी",
          "आदमियों", "लड़का",    "लड़की",   "लड़के",   "सफेद",    "सफ़ेद",   "the",    "then",    "there",
          "these",   "those",   "this",    "thistle", "thesis"};
}

}  // namespace mmt::testing
