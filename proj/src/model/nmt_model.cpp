#include "mmt/model/nmt_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mmt::model {

namespace ops = mmt::ad;

namespace {

constexpr double kMaskedScore = -1e9;

template <typename T>
typename NmtModel<T>::GruParams add_gru(ad::ParamStore<T>& store, const std::string& prefix, std::size_t in,
                                        std::size_t hidden) {
  typename NmtModel<T>::GruParams g{};
  g.w_ih = store.add(prefix + ".w_ih", {in, 3 * hidden});
  g.w_hh = store.add(prefix + ".w_hh", {hidden, 3 * hidden});
  g.b_ih = store.add(prefix + ".b_ih", {3 * hidden});
  g.b_hh = store.add(prefix + ".b_hh", {3 * hidden});
  return g;
}

template <typename T>
typename NmtModel<T>::AttentionParams add_attention(ad::ParamStore<T>& store, const std::string& prefix,
                                                    std::size_t query, std::size_t key, std::size_t attn) {
  typename NmtModel<T>::AttentionParams a{};
  a.w_query = store.add(prefix + ".w_query", {query, attn});
  a.w_key = store.add(prefix + ".w_key", {key, attn});
  a.bias = store.add(prefix + ".bias", {attn});
  a.v = store.add(prefix + ".v", {attn, 1});
  return a;
}

}  // namespace

template <typename T>
NmtModel<T>::NmtModel(const ModelConfig& config) : config_(config) {
  config_.validate();
  const std::size_t E = config_.emb_size, H = config_.hidden_size, D = config_.visual_dim;
  src_emb_ = params_.add("src_embedding", {config_.src_vocab, E});
  tgt_emb_ = params_.add("tgt_embedding", {config_.tgt_vocab, E});
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const std::size_t in = l == 0 ? E : 2 * H;
    enc_.push_back(add_gru(params_, "encoder.l" + std::to_string(l) + ".fwd", in, H));
    enc_.push_back(add_gru(params_, "encoder.l" + std::to_string(l) + ".bwd", in, H));
  }
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const auto prefix = "bridge.l" + std::to_string(l);
    bridge_.emplace_back(params_.add(prefix + ".weight", {2 * H, H}), params_.add(prefix + ".bias", {H}));
  }
  attn_text_ = add_attention(params_, "attn_text", H, 2 * H, H);
  attn_visual_ = add_attention(params_, "attn_visual", H, D, H);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const std::size_t in = l == 0 ? E + 2 * H + D : H;
    dec_.push_back(add_gru(params_, "decoder.l" + std::to_string(l), in, H));
  }
  readout_w_ = params_.add("readout.weight", {H + 2 * H + D + E, H});
  readout_b_ = params_.add("readout.bias", {H});
  out_w_ = params_.add("generator.weight", {H, config_.tgt_vocab});
  out_b_ = params_.add("generator.bias", {config_.tgt_vocab});
}

template <typename T>
void NmtModel<T>::set_dropout(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) throw std::invalid_argument("dropout must lie in [0,1)");
  config_.dropout = rate;
}

template <typename T>
void NmtModel<T>::init_uniform(Rng& rng, double range) {
  for (auto& p : params_) {
    for (auto& v : p.value.data()) v = static_cast<T>(rng.uniform(-range, range));
  }
}

template <typename T>
typename NmtModel<T>::Bound NmtModel<T>::bind(Tape& tape) {
  Bound b;
  b.vars.reserve(params_.size());
  for (auto& p : params_) b.vars.push_back(tape.param(p));
  return b;
}

template <typename T>
typename NmtModel<T>::Bound NmtModel<T>::bind(Tape& tape) const {
  if (tape.grad_enabled()) throw std::logic_error("const model can only bind to a gradient-free tape");
  Bound b;
  b.vars.reserve(params_.size());
  for (const auto& p : params_) b.vars.push_back(tape.borrow(p.value));
  return b;
}

template <typename T>
typename NmtModel<T>::Var NmtModel<T>::gru_cell(const Bound& p, const GruParams& g, const Var& x,
                                                 const Var& h) const {
  const std::size_t H = config_.hidden_size;
  const auto gi = ops::add(ops::matmul(x, p[g.w_ih]), p[g.b_ih]);
  const auto gh = ops::add(ops::matmul(h, p[g.w_hh]), p[g.b_hh]);
  const auto r = ops::sigmoid(ops::add(ops::narrow(gi, 1, 0, H), ops::narrow(gh, 1, 0, H)));
  const auto z = ops::sigmoid(ops::add(ops::narrow(gi, 1, H, H), ops::narrow(gh, 1, H, H)));
  const auto n = ops::tanh(ops::add(ops::narrow(gi, 1, 2 * H, H), ops::mul(r, ops::narrow(gh, 1, 2 * H, H))));
  // h' = (1 - z) * n + z * h
  return ops::add(n, ops::mul(z, ops::sub(h, n)));
}

template <typename T>
typename NmtModel<T>::Var NmtModel<T>::project_keys(const Bound& p, const AttentionParams& which,
                                                     const Var& keys) const {
  const auto& s = keys.shape();
  const auto flat = ops::reshape(keys, {s[0] * s[1], s[2]});
  const auto proj = ops::matmul(flat, p[which.w_key]);
  return ops::reshape(proj, {s[0], s[1], proj.shape()[1]});
}

template <typename T>
typename NmtModel<T>::AttentionResult NmtModel<T>::attend(const Bound& p, const AttentionParams& which,
                                                          const Var& query, const Var& keys, const Var& keys_proj,
                                                          const Var& mask) const {
  const auto& ks = keys.shape();
  const std::size_t B = ks[0], N = ks[1], K = ks[2];
  if (N == 0) throw std::invalid_argument("attend: no keys");
  const std::size_t A = keys_proj.shape()[2];
  const auto q = ops::add(ops::matmul(query, p[which.w_query]), p[which.bias]);
  const auto hidden = ops::tanh(ops::add(keys_proj, ops::repeat_axis(q, 1, N)));
  auto scores = ops::reshape(ops::matmul(ops::reshape(hidden, {B * N, A}), p[which.v]), {B, N});
  if (mask.valid()) scores = ops::add(scores, mask);
  const auto weights = ops::softmax(scores);
  const auto context = ops::reshape(ops::matmul(ops::reshape(weights, {B, 1, N}), keys), {B, K});
  return {context, weights};
}

template <typename T>
typename NmtModel<T>::Memory NmtModel<T>::encode(Tape& tape, const Bound& p, std::span<const TokenId> src,
                                                 std::size_t batch, std::size_t src_len,
                                                 std::span<const std::size_t> lengths, const Tensor& visual,
                                                 bool train, Rng* rng) const {
  const std::size_t B = batch, S = src_len, H = config_.hidden_size;
  if (B == 0 || S == 0) throw std::invalid_argument("encode: empty source");
  if (src.size() != B * S || lengths.size() != B) throw std::invalid_argument("encode: inconsistent batch layout");
  if (visual.shape() != ad::Shape{B, config_.visual_regions, config_.visual_dim}) {
    throw ad::ShapeError("encode: visual block " + ad::to_string(visual.shape()) + " does not match [" +
                         std::to_string(B) + "," + std::to_string(config_.visual_regions) + "," +
                         std::to_string(config_.visual_dim) + "]");
  }
  if (train && config_.dropout > 0.0 && rng == nullptr) throw std::invalid_argument("encode: training needs an rng");
  const auto drop = [&](const Var& x) { return train ? ops::dropout(x, config_.dropout, true, *rng) : x; };

  std::vector<Var> inputs(S);
  std::vector<std::vector<std::uint8_t>> keep(S, std::vector<std::uint8_t>(B, 1));
  std::vector<bool> padded(S, false);
  std::vector<TokenId> column(B);
  for (std::size_t t = 0; t < S; ++t) {
    for (std::size_t b = 0; b < B; ++b) {
      column[b] = src[b * S + t];
      if (t >= lengths[b]) keep[t][b] = 0, padded[t] = true;
    }
    inputs[t] = drop(ops::embedding(p[src_emb_], std::span<const TokenId>(column)));
  }

  const auto zeros = tape.constant(Tensor({B, H}));
  std::vector<Var> fwd(S), bwd(S), layer_out(S);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const auto& gf = enc_[encoder_gru_index(l, false)];
    const auto& gb = enc_[encoder_gru_index(l, true)];
    Var h = zeros;
    for (std::size_t t = 0; t < S; ++t) {
      const auto next = gru_cell(p, gf, inputs[t], h);
      h = padded[t] ? ops::select_rows(std::span<const std::uint8_t>(keep[t]), next, h) : next;
      fwd[t] = h;
    }
    h = zeros;
    for (std::size_t t = S; t-- > 0;) {
      const auto next = gru_cell(p, gb, inputs[t], h);
      h = padded[t] ? ops::select_rows(std::span<const std::uint8_t>(keep[t]), next, h) : next;
      bwd[t] = h;
    }
    for (std::size_t t = 0; t < S; ++t) {
      layer_out[t] = ops::concat({fwd[t], bwd[t]}, 1);
      if (l + 1 < config_.n_layers) inputs[t] = drop(layer_out[t]);
    }
  }

  Memory m;
  std::vector<Var> rows(S);
  for (std::size_t t = 0; t < S; ++t) rows[t] = ops::reshape(layer_out[t], {B, 1, 2 * H});
  m.annotations = ops::concat(std::span<const Var>(rows), 1);
  m.text_proj = project_keys(p, attn_text_, m.annotations);
  if (std::find(padded.begin(), padded.end(), true) != padded.end()) {
    Tensor mask({B, S});
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t t = lengths[b]; t < S; ++t) mask[b * S + t] = static_cast<T>(kMaskedScore);
    }
    m.text_mask = tape.constant(std::move(mask));
  }
  m.visual = tape.borrow(visual);
  m.visual_proj = project_keys(p, attn_visual_, m.visual);
  m.final_forward = fwd[S - 1];
  m.final_backward = bwd[0];
  return m;
}

template <typename T>
std::vector<typename NmtModel<T>::Var> NmtModel<T>::initial_state(const Bound& p, const Memory& memory) const {
  const auto finals = ops::concat({memory.final_forward, memory.final_backward}, 1);
  std::vector<Var> state;
  for (const auto& [w, b] : bridge_) state.push_back(ops::tanh(ops::add(ops::matmul(finals, p[w]), p[b])));
  return state;
}

template <typename T>
typename NmtModel<T>::StepResult NmtModel<T>::decode_step(const Bound& p, std::span<const TokenId> prev,
                                                          const std::vector<Var>& state, const Memory& memory,
                                                          bool train, Rng* rng) const {
  if (state.size() != config_.n_layers) throw std::invalid_argument("decode_step: wrong number of state layers");
  if (train && config_.dropout > 0.0 && rng == nullptr) throw std::invalid_argument("decode_step: training needs an rng");
  const auto drop = [&](const Var& x) { return train ? ops::dropout(x, config_.dropout, true, *rng) : x; };

  StepResult out;
  const auto emb = drop(ops::embedding(p[tgt_emb_], prev));
  const auto& query = state.back();
  out.text = attend(p, attn_text_, query, memory.annotations, memory.text_proj, memory.text_mask);
  out.visual = attend(p, attn_visual_, query, memory.visual, memory.visual_proj, Var{});
  Var input = ops::concat({emb, out.text.context, out.visual.context}, 1);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const auto h = gru_cell(p, dec_[l], input, state[l]);
    out.state.push_back(h);
    if (l + 1 < config_.n_layers) input = drop(h);
  }
  const auto features = ops::concat({out.state.back(), out.text.context, out.visual.context, emb}, 1);
  const auto readout = drop(ops::tanh(ops::add(ops::matmul(features, p[readout_w_]), p[readout_b_])));
  out.logits = ops::add(ops::matmul(readout, p[out_w_]), p[out_b_]);
  return out;
}

template <typename T>
typename NmtModel<T>::Var NmtModel<T>::forward_loss(Tape& tape, const Bound& p, const Batch<T>& batch, bool train,
                                                    Rng* rng) const {
  if (batch.size == 0) throw std::invalid_argument("forward_loss: empty batch");
  const std::size_t B = batch.size, T_steps = batch.tgt_len;
  const auto memory =
      encode(tape, p, batch.src, B, batch.src_len, batch.src_lengths, batch.visual, train, rng);
  auto state = initial_state(p, memory);
  std::vector<Var> logits;
  std::vector<TokenId> prev(B), targets(B * T_steps);
  for (std::size_t t = 0; t < T_steps; ++t) {
    for (std::size_t b = 0; b < B; ++b) {
      prev[b] = batch.tgt_in[b * T_steps + t];
      targets[t * B + b] = batch.tgt_out[b * T_steps + t];
    }
    auto step = decode_step(p, std::span<const TokenId>(prev), state, memory, train, rng);
    logits.push_back(step.logits);
    state = std::move(step.state);
  }
  const auto all = ops::concat(std::span<const Var>(logits), 0);
  return ops::cross_entropy(all, std::span<const TokenId>(targets), kPadId);
}

// SentenceDecoder ------------------------------------------------------------

template <typename T>
SentenceDecoder<T>::SentenceDecoder(const NmtModel<T>& model, std::vector<TokenId> src, const ad::Tensor<T>& visual)
    : model_(&model), src_(std::move(src)) {
  const auto& cfg = model.config();
  if (src_.empty()) throw std::invalid_argument("decoder: empty source sentence");
  if (visual.shape() != ad::Shape{cfg.visual_regions, cfg.visual_dim}) {
    throw ad::ShapeError("decoder: visual block " + ad::to_string(visual.shape()) + " does not match the model");
  }
  visual_ = visual.reshaped({1, cfg.visual_regions, cfg.visual_dim});
  ad::Tape<T> tape(false);
  const auto p = model.bind(tape);
  const std::size_t len = src_.size();
  const auto memory = model.encode(tape, p, src_, 1, len, std::span<const std::size_t>(&len, 1), visual_, false, nullptr);
  annotations_ = memory.annotations.value().reshaped({len, 2 * cfg.hidden_size});
  text_proj_ = memory.text_proj.value();
  visual_proj_ = memory.visual_proj.value();
  for (const auto& h : model.initial_state(p, memory)) initial_.hidden.push_back(h.value());
}

template <typename T>
typename SentenceDecoder<T>::Step SentenceDecoder<T>::step(const State& state, TokenId prev) const {
  const auto& cfg = model_->config();
  ad::Tape<T> tape(false);
  const auto p = model_->bind(tape);
  typename NmtModel<T>::Memory memory;
  const auto annotations = annotations_.reshaped({1, annotations_.dim(0), annotations_.dim(1)});
  memory.annotations = tape.borrow(annotations);
  memory.text_proj = tape.borrow(text_proj_);
  memory.visual = tape.borrow(visual_);
  memory.visual_proj = tape.borrow(visual_proj_);
  std::vector<ad::Var<T>> hidden;
  for (const auto& h : state.hidden) hidden.push_back(tape.borrow(h));
  const TokenId ids[1] = {prev};
  const auto out = model_->decode_step(p, ids, hidden, memory, false, nullptr);
  Step step;
  step.logits = out.logits.value().reshaped({cfg.tgt_vocab});
  for (const auto& h : out.state) step.state.hidden.push_back(h.value());
  const auto tw = out.text.weights.value().data();
  const auto vw = out.visual.weights.value().data();
  step.text_weights.assign(tw.begin(), tw.end());
  step.visual_weights.assign(vw.begin(), vw.end());
  return step;
}

template <typename T>
std::vector<double> teacher_forced_log_probs(const NmtModel<T>& model, const SentencePair& pair,
                                             const ad::Tensor<T>& visual) {
  const auto& cfg = model.config();
  const SentencePair* rows[1] = {&pair};
  auto batch = make_batch<T>(rows, cfg.visual_regions, cfg.visual_dim, nullptr);
  if (visual.size() != batch.visual.size()) throw ad::ShapeError("teacher_forced_log_probs: visual block size mismatch");
  std::copy(visual.data().begin(), visual.data().end(), batch.visual.data().begin());

  ad::Tape<T> tape(false);
  const auto p = model.bind(tape);
  const auto memory = model.encode(tape, p, batch.src, 1, batch.src_len, batch.src_lengths, batch.visual, false, nullptr);
  auto state = model.initial_state(p, memory);
  std::vector<double> out;
  for (std::size_t t = 0; t < batch.tgt_len; ++t) {
    const TokenId prev[1] = {batch.tgt_in[t]};
    auto step = model.decode_step(p, prev, state, memory, false, nullptr);
    const auto logp = ops::log_softmax(step.logits).value();
    out.push_back(static_cast<double>(logp[static_cast<std::size_t>(batch.tgt_out[t])]));
    state = std::move(step.state);
  }
  return out;
}

template class NmtModel<float>;
template class NmtModel<double>;
template class SentenceDecoder<float>;
template class SentenceDecoder<double>;
template std::vector<double> teacher_forced_log_probs(const NmtModel<float>&, const SentencePair&,
                                                      const ad::Tensor<float>&);
template std::vector<double> teacher_forced_log_probs(const NmtModel<double>&, const SentencePair&,
                                                      const ad::Tensor<double>&);

}  // namespace mmt::model
