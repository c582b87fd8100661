#pragma once

#include <span>
#include <vector>

#include "mmt/autodiff/ops.hpp"
#include "mmt/autodiff/tape.hpp"
#include "mmt/common/rng.hpp"
#include "mmt/model/batch.hpp"
#include "mmt/model/config.hpp"

namespace mmt::model {

/// Bidirectional GRU encoder over source subwords and a GRU decoder that
/// attends twice per step: additively over the encoder annotations and,
/// with a separate attention of the same form, over the L visual region
/// vectors. Text-only phases feed an all-zero visual block so both phases
/// share one parameter layout.
///
/// Per decoder step, with s the previous top-layer state:
///   c_txt, a_txt = attend(s, annotations)      a = softmax(v . tanh(W_q s + b + W_k k_i))
///   c_vis, a_vis = attend'(s, visual regions)
///   layer 0 input = [emb(y_prev); c_txt; c_vis], layers > 0 take the layer below
///   logits = W_out dropout(tanh(W_r [s_top; c_txt; c_vis; emb] + b_r)) + b_out
/// The decoder starts from tanh(W_b [fwd_last; bwd_first] + b_b) per layer.
/// Dropout applies to embeddings, between stacked layers, and to the readout.
template <typename T>
class NmtModel {
 public:
  using Var = ad::Var<T>;
  using Tape = ad::Tape<T>;
  using Tensor = ad::Tensor<T>;

  struct GruParams {
    std::size_t w_ih, w_hh, b_ih, b_hh;
  };
  struct AttentionParams {
    std::size_t w_query, w_key, bias, v;
  };

  /// Parameters bound to one tape.
  struct Bound {
    std::vector<Var> vars;
    const Var& operator[](std::size_t i) const { return vars[i]; }
  };

  struct AttentionResult {
    Var context;  // [B, K]
    Var weights;  // [B, N]
  };

  /// Source-side graph values reused at every decoder step.
  struct Memory {
    Var annotations;    // [B, S, 2H]
    Var text_proj;      // [B, S, A]
    Var text_mask;      // [B, S] additive: 0 valid, -1e9 padding (invalid handle when unpadded)
    Var visual;         // [B, L, D]
    Var visual_proj;    // [B, L, A]
    Var final_forward;  // [B, H] top layer, last valid position
    Var final_backward; // [B, H] top layer, position 0
  };

  struct StepResult {
    Var logits;  // [B, V_tgt]
    std::vector<Var> state;
    AttentionResult text;
    AttentionResult visual;
  };

  explicit NmtModel(const ModelConfig& config);

  const ModelConfig& config() const noexcept { return config_; }
  /// Training-time dropout rate; does not change the parameter layout.
  void set_dropout(double rate);
  ad::ParamStore<T>& params() noexcept { return params_; }
  const ad::ParamStore<T>& params() const noexcept { return params_; }

  /// Every parameter element ~ uniform(-range, range), in registration order.
  void init_uniform(Rng& rng, double range = 0.1);

  /// Binds parameters as differentiable leaves (grads accumulate into the store).
  Bound bind(Tape& tape);
  /// Binds parameters as borrowed constants; the tape must not record grads.
  Bound bind(Tape& tape) const;

  // Graph pieces. `rng` may be null when train is false.
  Memory encode(Tape& tape, const Bound& p, std::span<const TokenId> src, std::size_t batch, std::size_t src_len,
                std::span<const std::size_t> lengths, const Tensor& visual, bool train, Rng* rng) const;
  std::vector<Var> initial_state(const Bound& p, const Memory& memory) const;
  AttentionResult attend(const Bound& p, const AttentionParams& which, const Var& query, const Var& keys,
                         const Var& keys_proj, const Var& mask) const;
  StepResult decode_step(const Bound& p, std::span<const TokenId> prev, const std::vector<Var>& state,
                         const Memory& memory, bool train, Rng* rng) const;

  /// Mean token cross-entropy over non-pad targets (teacher forcing).
  Var forward_loss(Tape& tape, const Bound& p, const Batch<T>& batch, bool train, Rng* rng) const;

  const AttentionParams& text_attention() const noexcept { return attn_text_; }
  const AttentionParams& visual_attention() const noexcept { return attn_visual_; }
  std::size_t encoder_gru_index(std::size_t layer, bool backward) const { return layer * 2 + (backward ? 1 : 0); }
  const GruParams& encoder_gru(std::size_t i) const { return enc_[i]; }

 private:
  Var gru_cell(const Bound& p, const GruParams& g, const Var& x, const Var& h) const;
  Var project_keys(const Bound& p, const AttentionParams& which, const Var& keys) const;

  ModelConfig config_;
  ad::ParamStore<T> params_;
  std::size_t src_emb_ = 0, tgt_emb_ = 0;
  std::vector<GruParams> enc_;  // layer-major, forward then backward
  std::vector<GruParams> dec_;
  std::vector<std::pair<std::size_t, std::size_t>> bridge_;  // weight, bias per decoder layer
  AttentionParams attn_text_{}, attn_visual_{};
  std::size_t readout_w_ = 0, readout_b_ = 0, out_w_ = 0, out_b_ = 0;
};

/// Value-level decoding interface for one sentence, used by beam search.
/// Each call evaluates on a private gradient-free tape, so a const model can
/// be shared by concurrent decoders.
template <typename T>
class SentenceDecoder {
 public:
  struct State {
    std::vector<ad::Tensor<T>> hidden;  // per layer, [1, H]
  };
  struct Step {
    ad::Tensor<T> logits;  // [V_tgt]
    State state;
    std::vector<T> text_weights;
    std::vector<T> visual_weights;
  };

  /// visual: [L, D] block (zeros for text-only decoding).
  SentenceDecoder(const NmtModel<T>& model, std::vector<TokenId> src, const ad::Tensor<T>& visual);

  std::size_t vocab_size() const noexcept { return model_->config().tgt_vocab; }
  const ad::Tensor<T>& annotations() const noexcept { return annotations_; }  // [S, 2H]
  const State& initial_state() const noexcept { return initial_; }
  Step step(const State& state, TokenId prev) const;

 private:
  const NmtModel<T>* model_;
  std::vector<TokenId> src_;
  ad::Tensor<T> annotations_, text_proj_, visual_, visual_proj_;
  State initial_;
};

/// Per-target-token log-probabilities (including the final </s>) computed
/// with the batched teacher-forcing graph.
template <typename T>
std::vector<double> teacher_forced_log_probs(const NmtModel<T>& model, const SentencePair& pair,
                                             const ad::Tensor<T>& visual);

}  // namespace mmt::model
