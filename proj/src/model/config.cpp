#include "mmt/model/config.hpp"

#include <stdexcept>
#include <string>

namespace mmt::model {

void ModelConfig::validate() const {
  const auto positive = [](std::size_t v, const char* name) {
    if (v < 1) throw std::invalid_argument(std::string("model config: ") + name + " must be >= 1");
  };
  positive(emb_size, "emb_size");
  positive(hidden_size, "hidden_size");
  positive(n_layers, "n_layers");
  positive(src_vocab, "src_vocab");
  positive(tgt_vocab, "tgt_vocab");
  positive(visual_regions, "visual_regions");
  positive(visual_dim, "visual_dim");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("model config: dropout must lie in [0,1)");
}

void ModelConfig::to_key_values(KeyValues& kv) const {
  kv["model.emb_size"] = std::to_string(emb_size);
  kv["model.hidden_size"] = std::to_string(hidden_size);
  kv["model.n_layers"] = std::to_string(n_layers);
  kv["model.src_vocab"] = std::to_string(src_vocab);
  kv["model.tgt_vocab"] = std::to_string(tgt_vocab);
  kv["model.visual_regions"] = std::to_string(visual_regions);
  kv["model.visual_dim"] = std::to_string(visual_dim);
  kv["model.dropout"] = format_real(dropout);
}

ModelConfig ModelConfig::from_key_values(const KeyValues& kv) {
  ModelConfig c;
  const auto size = [&](const char* key, std::size_t& field) {
    if (const auto it = kv.find(key); it != kv.end()) {
      const auto v = parse_int(key, it->second);
      if (v < 0) throw ConfigError(std::string("negative value for '") + key + "'");
      field = static_cast<std::size_t>(v);
    }
  };
  size("model.emb_size", c.emb_size);
  size("model.hidden_size", c.hidden_size);
  size("model.n_layers", c.n_layers);
  size("model.src_vocab", c.src_vocab);
  size("model.tgt_vocab", c.tgt_vocab);
  size("model.visual_regions", c.visual_regions);
  size("model.visual_dim", c.visual_dim);
  if (const auto it = kv.find("model.dropout"); it != kv.end()) c.dropout = parse_real("model.dropout", it->second);
  return c;
}

}  // namespace mmt::model
