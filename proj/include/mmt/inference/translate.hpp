#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmt/corpus/feature_file.hpp"
#include "mmt/corpus/text.hpp"
#include "mmt/inference/beam_search.hpp"
#include "mmt/model/nmt_model.hpp"
#include "mmt/subword/bpe.hpp"
#include "mmt/subword/vocabulary.hpp"

namespace mmt::inference {

using corpus::Tokens;
using subword::BpeModel;
using subword::Vocabulary;

class TranslateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// StepScorer over a trained model for one source sentence.
class ModelScorer {
 public:
  using State = model::SentenceDecoder<float>::State;

  ModelScorer(const model::NmtModel<float>& model, std::vector<TokenId> src, const ad::Tensor<float>& visual)
      : decoder_(model, std::move(src), visual) {}

  State initial_state() const { return decoder_.initial_state(); }
  ScoredStep<State> step(const State& state, TokenId prev) const;

 private:
  model::SentenceDecoder<float> decoder_;
};

/// log_softmax computed in double precision.
std::vector<double> log_softmax(std::span<const float> logits);

struct TranslationModel {
  const model::NmtModel<float>* model = nullptr;
  const Vocabulary* src_vocab = nullptr;
  const Vocabulary* tgt_vocab = nullptr;
  std::string bpe_fingerprint;  // empty skips the check
};

struct SourceSentence {
  Tokens tokens;            // normalized words
  std::string feature_key;  // empty for text-only decoding
};

struct Translation {
  std::string text;
  std::size_t chosen_model = 0;
  double log_likelihood = 0.0;
  Tokens subwords;
};

struct TranslateOptions {
  BeamOptions beam;
  std::size_t threads = 1;
};

std::string bpe_fingerprint_text(const BpeModel& bpe);

/// Beam-searches every sentence under each model, keeps the selected
/// hypothesis, and undoes BPE and tokenization. Results are in input order
/// regardless of the thread count. An empty source line yields an empty
/// translation.
std::vector<Translation> translate_corpus(const std::vector<TranslationModel>& models, const BpeModel& bpe,
                                          const std::vector<SourceSentence>& sources,
                                          const corpus::FeatureStore* features, const TranslateOptions& options);

/// One translation per line, plus "line_index<TAB>chosen_model<TAB>log_likelihood".
void write_translations(std::ostream& text, const std::vector<Translation>& translations);
void write_score_sidecar(std::ostream& sidecar, const std::vector<Translation>& translations);

}  // namespace mmt::inference
