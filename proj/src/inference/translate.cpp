#include "mmt/inference/translate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "mmt/common/kv_config.hpp"
#include "mmt/inference/selection.hpp"

namespace mmt::inference {

std::vector<double> log_softmax(std::span<const float> logits) {
  double m = -std::numeric_limits<double>::infinity();
  for (float v : logits) m = std::max(m, static_cast<double>(v));
  double sum = 0.0;
  for (float v : logits) sum += std::exp(static_cast<double>(v) - m);
  const double lse = m + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = static_cast<double>(logits[i]) - lse;
  return out;
}

ScoredStep<ModelScorer::State> ModelScorer::step(const State& state, TokenId prev) const {
  auto s = decoder_.step(state, prev);
  return {log_softmax(s.logits.data()), std::move(s.state)};
}

std::string bpe_fingerprint_text(const BpeModel& bpe) {
  constexpr char digits[] = "0123456789abcdef";
  auto v = bpe.fingerprint();
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

namespace {

void check_model(const TranslationModel& m, const BpeModel& bpe, std::size_t index) {
  const auto name = "model " + std::to_string(index + 1);
  if (!m.model || !m.src_vocab || !m.tgt_vocab) throw TranslateError(name + ": incomplete model bundle");
  if (m.model->config().src_vocab != m.src_vocab->size() || m.model->config().tgt_vocab != m.tgt_vocab->size()) {
    throw TranslateError(name + ": vocabulary sizes do not match the checkpoint");
  }
  if (!m.bpe_fingerprint.empty() && m.bpe_fingerprint != bpe_fingerprint_text(bpe)) {
    throw TranslateError(name + ": trained with a different BPE model (fingerprint " + m.bpe_fingerprint +
                         ", given " + bpe_fingerprint_text(bpe) + ")");
  }
}

Translation translate_one(const std::vector<TranslationModel>& models, const BpeModel& bpe,
                          const SourceSentence& source, const corpus::FeatureStore* features,
                          const TranslateOptions& options) {
  Translation out;
  const Tokens subwords = bpe.apply(source.tokens);
  if (subwords.empty()) return out;
  std::vector<std::vector<Hypothesis>> nbest;
  for (const auto& m : models) {
    const auto& cfg = m.model->config();
    ad::Tensor<float> visual({cfg.visual_regions, cfg.visual_dim});
    if (features) {
      if (!features->contains(source.feature_key)) {
        throw TranslateError("no visual features for example '" + source.feature_key + "'");
      }
      const auto f = features->at(source.feature_key);
      if (f.size() != visual.size()) throw TranslateError("feature file shape does not match the model");
      std::copy(f.begin(), f.end(), visual.data().begin());
    }
    const ModelScorer scorer(*m.model, m.src_vocab->encode(subwords), visual);
    nbest.push_back(beam_search(scorer, options.beam));
  }
  const auto chosen = select_hypothesis(std::span<const std::vector<Hypothesis>>(nbest), kUnkId);
  out.chosen_model = chosen.model;
  out.log_likelihood = chosen.hypothesis.log_likelihood;
  const auto& vocab = *models[chosen.model].tgt_vocab;
  for (auto id : chosen.hypothesis.tokens) out.subwords.push_back(vocab.token(id));
  out.text = corpus::detokenize(subword::decode_bpe(out.subwords));
  return out;
}

}  // namespace

std::vector<Translation> translate_corpus(const std::vector<TranslationModel>& models, const BpeModel& bpe,
                                          const std::vector<SourceSentence>& sources,
                                          const corpus::FeatureStore* features, const TranslateOptions& options) {
  if (models.empty()) throw TranslateError("translate: at least one model is required");
  for (std::size_t i = 0; i < models.size(); ++i) check_model(models[i], bpe, i);

  std::vector<Translation> results(sources.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_at = sources.size();
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < sources.size(); i = next++) {
      try {
        results[i] = translate_one(models, bpe, sources[i], features, options);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  const auto n_threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(sources.size(), 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

void write_translations(std::ostream& text, const std::vector<Translation>& translations) {
  for (const auto& t : translations) text << t.text << '\n';
}

void write_score_sidecar(std::ostream& sidecar, const std::vector<Translation>& translations) {
  for (std::size_t i = 0; i < translations.size(); ++i) {
    sidecar << i << '\t' << translations[i].chosen_model << '\t' << format_real(translations[i].log_likelihood)
            << '\n';
  }
}

}  // namespace mmt::inference
