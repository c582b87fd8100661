#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmt/autodiff/tensor.hpp"
#include "mmt/corpus/feature_file.hpp"
#include "mmt/subword/vocabulary.hpp"

namespace mmt::model {

/// One id-mapped training pair. `tgt` excludes <s> and </s>; feature_key
/// names the visual record (unused in text-only phases).
struct SentencePair {
  std::vector<TokenId> src;
  std::vector<TokenId> tgt;
  std::string feature_key;
};

/// Padded mini-batch, row-major with the batch index outermost.
template <typename T>
struct Batch {
  std::size_t size = 0;
  std::size_t src_len = 0;  // padded source length S
  std::size_t tgt_len = 0;  // decoder steps T = longest target + 1
  std::vector<TokenId> src;      // [B*S]
  std::vector<std::size_t> src_lengths;
  std::vector<TokenId> tgt_in;   // [B*T]: <s> y_1 .. y_n <pad>...
  std::vector<TokenId> tgt_out;  // [B*T]: y_1 .. y_n </s> <pad>...
  ad::Tensor<T> visual;          // [B, L, D]

  std::size_t target_tokens() const;
};

/// Pads `pairs` into a batch. With `features` null the visual block is all
/// zeros (text-only phase); otherwise every pair's feature_key must exist
/// and the store's L x D must equal (regions, dim).
template <typename T>
Batch<T> make_batch(std::span<const SentencePair* const> pairs, std::size_t regions, std::size_t dim,
                    const corpus::FeatureStore* features);

}  // namespace mmt::model
