#include "mmt/trainer/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mmt/corpus/corpus.hpp"
#include "mmt/trainer/adam.hpp"

namespace mmt::trainer {
namespace {

bool multimodal(TrainMode mode) { return mode != TrainMode::pretrain; }

void check_features(const TrainSet& set, bool required, const char* which) {
  if (!required) {
    if (set.features) throw TrainError(std::string(which) + ": text-only pre-training takes no visual features");
    return;
  }
  if (set.pairs.empty()) return;
  if (!set.features) throw TrainError(std::string(which) + ": multimodal training needs a feature file");
  for (const auto& p : set.pairs) {
    if (!set.features->contains(p.feature_key)) {
      throw TrainError(std::string(which) + ": no visual features for example '" + p.feature_key + "'");
    }
  }
}

std::vector<model::SentencePair> usable(const std::vector<model::SentencePair>& pairs, std::size_t max_len,
                                        std::size_t* dropped) {
  auto kept = corpus::length_filter(pairs, max_len);
  std::erase_if(kept, [](const model::SentencePair& p) { return p.src.empty(); });
  if (dropped) *dropped = pairs.size() - kept.size();
  return kept;
}

model::Batch<float> gather(const model::NmtModel<float>& model, const std::vector<model::SentencePair>& pairs,
                           std::span<const std::size_t> index, const corpus::FeatureStore* features) {
  std::vector<const model::SentencePair*> rows;
  rows.reserve(index.size());
  for (auto i : index) rows.push_back(&pairs[i]);
  return model::make_batch<float>(rows, model.config().visual_regions, model.config().visual_dim, features);
}

}  // namespace

std::string format_epoch_log(const EpochLog& log) {
  std::ostringstream out;
  out << "epoch=" << log.epoch << " train_loss=" << format_real(log.train_loss)
      << " valid_ppl=" << format_real(log.valid_ppl) << " time_s=" << format_real(std::round(log.time_s * 1000) / 1000);
  return out.str();
}

std::vector<std::vector<std::size_t>> length_bucketed_batches(const std::vector<model::SentencePair>& pairs,
                                                              std::size_t batch_size, Rng& rng) {
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = pairs[a];
    const auto& pb = pairs[b];
    return std::pair(pa.src.size(), pa.tgt.size()) < std::pair(pb.src.size(), pb.tgt.size());
  });
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t i = 0; i < order.size(); i += batch_size) {
    const auto end = std::min(order.size(), i + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  rng.shuffle(batches.begin(), batches.end());
  return batches;
}

double mean_token_loss(const model::NmtModel<float>& model, const TrainSet& set, std::size_t batch_size) {
  if (set.pairs.empty()) throw TrainError("cannot evaluate on an empty set");
  double total = 0.0;
  std::size_t tokens = 0;
  std::vector<std::size_t> index(set.pairs.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  for (std::size_t i = 0; i < index.size(); i += batch_size) {
    const auto n = std::min(batch_size, index.size() - i);
    const auto batch = gather(model, set.pairs, std::span(index).subspan(i, n), set.features);
    ad::Tape<float> tape(false);
    const auto p = model.bind(tape);
    const auto loss = model.forward_loss(tape, p, batch, false, nullptr);
    const auto count = batch.target_tokens();
    total += static_cast<double>(loss.value()[0]) * static_cast<double>(count);
    tokens += count;
  }
  return total / static_cast<double>(tokens);
}

TrainResult train(const TrainConfig& config, model::NmtModel<float>& model, const TrainSet& train_set,
                  const TrainSet& valid_set, const EpochCallback& on_epoch, const KeyValues& meta) {
  config.validate();
  TrainResult result;
  TrainSet data{usable(train_set.pairs, config.max_len, &result.dropped), train_set.features};
  if (data.pairs.empty()) throw TrainError("training data is empty after length filtering");
  TrainSet valid{usable(valid_set.pairs, config.max_len, nullptr), valid_set.features};
  const bool mm = multimodal(config.mode);
  check_features(data, mm, "training data");
  check_features(valid, mm, "validation data");

  model.set_dropout(config.dropout);
  const AdamOptions adam{config.lr, config.beta1, config.beta2, config.eps};
  auto state = AdamState<float>::zeros_like(model.params());
  Rng root(config.seed);
  Rng shuffle_rng = root.split();
  Rng dropout_rng = root.split();
  const TrainSet& monitor = valid.pairs.empty() ? data : valid;

  double best_ppl = 0.0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    std::size_t tokens = 0;
    for (const auto& index : length_bucketed_batches(data.pairs, config.batch_size, shuffle_rng)) {
      const auto batch = gather(model, data.pairs, index, data.features);
      model.params().zero_grad();
      ad::Tape<float> tape;
      const auto p = model.bind(tape);
      const auto loss = model.forward_loss(tape, p, batch, true, &dropout_rng);
      tape.backward(loss);
      if (config.clip_norm > 0.0) clip_grad_norm(model.params(), config.clip_norm);
      adam_step(model.params(), state, adam);
      const auto count = batch.target_tokens();
      loss_sum += static_cast<double>(loss.value()[0]) * static_cast<double>(count);
      tokens += count;
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(tokens);
    entry.valid_ppl = std::exp(mean_token_loss(model, monitor, config.batch_size));
    entry.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);

    if (epoch == 1 || entry.valid_ppl < best_ppl) {
      best_ppl = entry.valid_ppl;
      result.best = snapshot(model, config, epoch, entry.valid_ppl, meta);
    }
  }
  return result;
}

}  // namespace mmt::trainer
