#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mmt/common/kv_config.hpp"

namespace mmt::trainer {

/// pretrain: text-only with zero visual input; finetune: multimodal, starting
/// from a pretrained checkpoint; scratch: multimodal from random init.
enum class TrainMode { pretrain, finetune, scratch };

std::string_view to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view text);

struct TrainConfig {
  std::size_t batch_size = 40;
  std::size_t max_epochs = 25;
  std::size_t max_len = 50;
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double dropout = 0.3;
  std::uint64_t seed = 1;
  TrainMode mode = TrainMode::scratch;
  double clip_norm = 0.0;  // global gradient-norm cap; 0 disables

  void validate() const;
  void to_key_values(KeyValues& kv) const;
  static TrainConfig from_key_values(const KeyValues& kv);

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

}  // namespace mmt::trainer
