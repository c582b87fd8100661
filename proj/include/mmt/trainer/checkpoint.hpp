#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmt/autodiff/tensor.hpp"
#include "mmt/common/kv_config.hpp"
#include "mmt/model/config.hpp"
#include "mmt/model/nmt_model.hpp"
#include "mmt/trainer/train_config.hpp"

namespace mmt::trainer {

inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class CheckpointErrorKind { io, bad_magic, bad_version, truncated, bad_config, shape_mismatch };

std::string_view to_string(CheckpointErrorKind kind);

class CheckpointError : public std::runtime_error {
 public:
  CheckpointError(CheckpointErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  CheckpointErrorKind kind() const noexcept { return kind_; }

 private:
  CheckpointErrorKind kind_;
};

struct NamedTensor {
  std::string name;
  ad::Tensor<float> value;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

struct Checkpoint {
  model::ModelConfig model;
  TrainConfig train;
  std::size_t epoch = 0;
  double valid_ppl = 0.0;
  KeyValues meta;  // free-form "meta." entries, e.g. the BPE fingerprint
  std::vector<NamedTensor> params;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// "MMCK", u32 version, u32 config length + key=value text, u32 n_params,
/// then per parameter: u16 name length, name, u8 ndim, ndim x u32, f32 data.
void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);

/// Parses and validates that the stored tensors match the parameter layout
/// implied by the embedded model config (names, order and shapes).
Checkpoint read_checkpoint(std::istream& in, const std::string& origin = "<checkpoint>");
Checkpoint load_checkpoint(const std::string& path);

Checkpoint snapshot(const model::NmtModel<float>& model, const TrainConfig& train, std::size_t epoch,
                    double valid_ppl, const KeyValues& meta = {});

/// Copies checkpoint tensors into `model`; shapes must agree.
void restore(model::NmtModel<float>& model, const Checkpoint& ckpt);

/// Fresh model built from the checkpoint's config with its weights loaded.
model::NmtModel<float> instantiate(const Checkpoint& ckpt);

}  // namespace mmt::trainer
