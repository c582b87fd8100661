#pragma once

#include <cstddef>
#include <string_view>

#include "mmt/common/kv_config.hpp"

namespace mmt::model {

/// Network dimensions. Defaults follow the reference setup: 500-unit
/// embeddings and recurrent states, 2 layers, 7x7x512 visual grid, 0.3 dropout.
struct ModelConfig {
  std::size_t emb_size = 500;
  std::size_t hidden_size = 500;
  std::size_t n_layers = 2;
  std::size_t src_vocab = 0;
  std::size_t tgt_vocab = 0;
  std::size_t visual_regions = 49;
  std::size_t visual_dim = 512;
  double dropout = 0.3;

  /// Throws std::invalid_argument on any size < 1 or dropout outside [0,1).
  void validate() const;

  /// Writes every field under "model." keys.
  void to_key_values(KeyValues& kv) const;
  /// Reads "model." keys present in kv; missing keys keep their defaults.
  static ModelConfig from_key_values(const KeyValues& kv);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace mmt::model
