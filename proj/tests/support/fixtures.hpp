#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mmt/common/rng.hpp"
#include "mmt/corpus/feature_file.hpp"
#include "mmt/inference/beam_search.hpp"
#include "mmt/model/batch.hpp"
#include "mmt/model/config.hpp"
#include "mmt/model/nmt_model.hpp"
#include "mmt/subword/bpe.hpp"
#include "mmt/trainer/train_config.hpp"

namespace mmt::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
/// Standard output of `sh -c command`; throws if the command fails.
std::string shell_output(const std::string& command);

// Micro network used by the end-to-end gradient check.
model::ModelConfig grad_check_config();

// Copy task: target = source over a small vocabulary, with synthetic features.
struct CopyTask {
  model::ModelConfig model;
  trainer::TrainConfig train;
  std::vector<model::SentencePair> pairs;
  corpus::FeatureStore features{1, 1};
};

CopyTask make_copy_task(std::size_t n_pairs = 32, std::uint64_t seed = 11);

/// Exact-match rate of greedy decoding over the task's own sources.
double copy_accuracy(const model::NmtModel<float>& net, const CopyTask& task, bool with_features);

// Hand-built step distributions for beam-search oracles: the next-token
// distribution is a seeded pseudo-random function of the whole prefix.
class ToyScorer {
 public:
  struct State {
    std::vector<TokenId> prefix;
    bool started = false;
  };

  ToyScorer(std::size_t vocab, std::uint64_t seed, double temperature = 1.5);

  State initial_state() const { return {}; }
  inference::ScoredStep<State> step(const State& state, TokenId prev) const;
  std::size_t vocab_size() const noexcept { return vocab_; }
  /// Log-probability of `token` after `prefix`.
  double log_prob(const std::vector<TokenId>& prefix, TokenId token) const;

 private:
  std::size_t vocab_;
  std::uint64_t seed_;
  double temperature_;
};

/// Exhaustive search over every token sequence of up to max_len content
/// tokens closed by eos (forced at the limit), no banned tokens; returns the
/// best sequence and its log-likelihood. Ties resolved by first found in
/// (length, lexicographic) order.
inference::Hypothesis enumerate_best(const ToyScorer& scorer, std::size_t max_len, TokenId eos);
std::size_t search_space_size(std::size_t vocab, std::size_t max_len);

/// Straightforward BPE learner: recounts every adjacent pair from scratch
/// after each merge.
std::vector<std::pair<std::string, std::string>> naive_bpe(const std::map<std::string, std::uint64_t>& words,
                                                           std::size_t n_merges);

/// The 50-word corpus the BPE oracle runs on.
std::vector<std::string> bpe_fixture_words();

}  // namespace mmt::testing
