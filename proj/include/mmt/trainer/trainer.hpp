#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmt/common/rng.hpp"
#include "mmt/corpus/feature_file.hpp"
#include "mmt/model/batch.hpp"
#include "mmt/model/nmt_model.hpp"
#include "mmt/trainer/checkpoint.hpp"
#include "mmt/trainer/train_config.hpp"

namespace mmt::trainer {

class TrainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // token-weighted mean cross-entropy with dropout active
  double valid_ppl = 0.0;
  double time_s = 0.0;
};

/// "epoch=E train_loss=X valid_ppl=Y time_s=Z"
std::string format_epoch_log(const EpochLog& log);

/// Id-mapped pairs plus the store holding their visual features (null in
/// the text-only phase).
struct TrainSet {
  std::vector<model::SentencePair> pairs;
  const corpus::FeatureStore* features = nullptr;
};

struct TrainResult {
  Checkpoint best;
  std::vector<EpochLog> log;
  std::size_t dropped = 0;  // training pairs removed by the length filter
};

/// Groups indices into batches of similar source/target length: a seeded
/// shuffle, a stable sort by length, chunking, and a shuffle of the chunks.
std::vector<std::vector<std::size_t>> length_bucketed_batches(const std::vector<model::SentencePair>& pairs,
                                                              std::size_t batch_size, Rng& rng);

/// Token-weighted mean cross-entropy over `set` in evaluation mode.
double mean_token_loss(const model::NmtModel<float>& model, const TrainSet& set, std::size_t batch_size);

using EpochCallback = std::function<void(const EpochLog&)>;

/// Runs config.max_epochs epochs of Adam over `train_set`, evaluating
/// validation perplexity after each, and returns the lowest-perplexity
/// checkpoint. Pretrain mode takes no features (zero visual input);
/// finetune and scratch need a feature record for every pair. With an empty
/// validation set the perplexity is measured on the training pairs.
TrainResult train(const TrainConfig& config, model::NmtModel<float>& model, const TrainSet& train_set,
                  const TrainSet& valid_set, const EpochCallback& on_epoch = {}, const KeyValues& meta = {});

}  // namespace mmt::trainer
