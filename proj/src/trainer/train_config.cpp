#include "mmt/trainer/train_config.hpp"

#include <stdexcept>

namespace mmt::trainer {

std::string_view to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::pretrain: return "pretrain";
    case TrainMode::finetune: return "finetune";
    case TrainMode::scratch: return "scratch";
  }
  return "scratch";
}

TrainMode parse_train_mode(std::string_view text) {
  if (text == "pretrain") return TrainMode::pretrain;
  if (text == "finetune") return TrainMode::finetune;
  if (text == "scratch") return TrainMode::scratch;
  throw ConfigError("unknown training mode '" + std::string(text) + "' (expected pretrain|finetune|scratch)");
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
  if (max_epochs < 1) throw std::invalid_argument("train config: max_epochs must be >= 1");
  if (max_len < 1) throw std::invalid_argument("train config: max_len must be >= 1");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw std::invalid_argument("train config: beta1 must lie in (0,1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw std::invalid_argument("train config: beta2 must lie in (0,1)");
  if (!(lr >= 0.0)) throw std::invalid_argument("train config: lr must be >= 0");
  if (!(eps > 0.0)) throw std::invalid_argument("train config: eps must be > 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("train config: dropout must lie in [0,1)");
  if (!(clip_norm >= 0.0)) throw std::invalid_argument("train config: clip_norm must be >= 0");
}

void TrainConfig::to_key_values(KeyValues& kv) const {
  kv["train.batch_size"] = std::to_string(batch_size);
  kv["train.max_epochs"] = std::to_string(max_epochs);
  kv["train.max_len"] = std::to_string(max_len);
  kv["train.lr"] = format_real(lr);
  kv["train.beta1"] = format_real(beta1);
  kv["train.beta2"] = format_real(beta2);
  kv["train.eps"] = format_real(eps);
  kv["train.dropout"] = format_real(dropout);
  kv["train.seed"] = std::to_string(seed);
  kv["train.mode"] = std::string(to_string(mode));
  kv["train.clip_norm"] = format_real(clip_norm);
}

TrainConfig TrainConfig::from_key_values(const KeyValues& kv) {
  TrainConfig c;
  const auto size = [&](const char* key, std::size_t& field) {
    if (const auto it = kv.find(key); it != kv.end()) {
      const auto v = parse_int(key, it->second);
      if (v < 0) throw ConfigError(std::string("negative value for '") + key + "'");
      field = static_cast<std::size_t>(v);
    }
  };
  const auto real = [&](const char* key, double& field) {
    if (const auto it = kv.find(key); it != kv.end()) field = parse_real(key, it->second);
  };
  size("train.batch_size", c.batch_size);
  size("train.max_epochs", c.max_epochs);
  size("train.max_len", c.max_len);
  real("train.lr", c.lr);
  real("train.beta1", c.beta1);
  real("train.beta2", c.beta2);
  real("train.eps", c.eps);
  real("train.dropout", c.dropout);
  real("train.clip_norm", c.clip_norm);
  if (const auto it = kv.find("train.seed"); it != kv.end()) {
    const auto v = parse_int("train.seed", it->second);
    if (v < 0) throw ConfigError("negative value for 'train.seed'");
    c.seed = static_cast<std::uint64_t>(v);
  }
  if (const auto it = kv.find("train.mode"); it != kv.end()) c.mode = parse_train_mode(it->second);
  return c;
}

}  // namespace mmt::trainer
