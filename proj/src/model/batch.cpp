#include "mmt/model/batch.hpp"

#include <algorithm>
#include <stdexcept>

namespace mmt::model {

template <typename T>
std::size_t Batch<T>::target_tokens() const {
  return static_cast<std::size_t>(std::count_if(tgt_out.begin(), tgt_out.end(), [](TokenId t) { return t != kPadId; }));
}

template <typename T>
Batch<T> make_batch(std::span<const SentencePair* const> pairs, std::size_t regions, std::size_t dim,
                    const corpus::FeatureStore* features) {
  if (pairs.empty()) throw std::invalid_argument("make_batch: empty batch");
  if (features && (features->regions() != regions || features->dim() != dim)) {
    throw std::invalid_argument("make_batch: feature store is " + std::to_string(features->regions()) + "x" +
                                std::to_string(features->dim()) + " but the model expects " + std::to_string(regions) +
                                "x" + std::to_string(dim));
  }
  Batch<T> b;
  b.size = pairs.size();
  for (const auto* p : pairs) {
    if (p->src.empty()) throw std::invalid_argument("make_batch: empty source sentence");
    b.src_len = std::max(b.src_len, p->src.size());
    b.tgt_len = std::max(b.tgt_len, p->tgt.size() + 1);
  }
  b.src.assign(b.size * b.src_len, kPadId);
  b.tgt_in.assign(b.size * b.tgt_len, kPadId);
  b.tgt_out.assign(b.size * b.tgt_len, kPadId);
  b.visual = ad::Tensor<T>({b.size, regions, dim});
  for (std::size_t i = 0; i < b.size; ++i) {
    const auto& p = *pairs[i];
    std::copy(p.src.begin(), p.src.end(), b.src.begin() + static_cast<std::ptrdiff_t>(i * b.src_len));
    b.src_lengths.push_back(p.src.size());
    b.tgt_in[i * b.tgt_len] = kBosId;
    for (std::size_t t = 0; t < p.tgt.size(); ++t) {
      b.tgt_in[i * b.tgt_len + t + 1] = p.tgt[t];
      b.tgt_out[i * b.tgt_len + t] = p.tgt[t];
    }
    b.tgt_out[i * b.tgt_len + p.tgt.size()] = kEosId;
    if (features) {
      const auto f = features->at(p.feature_key);
      std::copy(f.begin(), f.end(), b.visual.data().begin() + static_cast<std::ptrdiff_t>(i * regions * dim));
    }
  }
  return b;
}

template struct Batch<float>;
template struct Batch<double>;
template Batch<float> make_batch(std::span<const SentencePair* const>, std::size_t, std::size_t,
                                 const corpus::FeatureStore*);
template Batch<double> make_batch(std::span<const SentencePair* const>, std::size_t, std::size_t,
                                  const corpus::FeatureStore*);

}  // namespace mmt::model
