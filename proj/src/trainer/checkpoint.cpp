#include "mmt/trainer/checkpoint.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "mmt/common/binary_io.hpp"

namespace mmt::trainer {
namespace {

constexpr char kMagic[4] = {'M', 'M', 'C', 'K'};

void check_layout(const model::ModelConfig& config, const std::vector<NamedTensor>& params,
                  const std::string& origin) {
  const model::NmtModel<float> reference(config);
  const auto& expected = reference.params();
  if (expected.size() != params.size()) {
    throw CheckpointError(CheckpointErrorKind::shape_mismatch,
                          origin + ": " + std::to_string(params.size()) + " tensors stored, model config implies " +
                              std::to_string(expected.size()));
  }
  std::size_t i = 0;
  for (const auto& p : expected) {
    const auto& got = params[i++];
    if (got.name != p.name || got.value.shape() != p.value.shape()) {
      throw CheckpointError(CheckpointErrorKind::shape_mismatch,
                            origin + ": tensor '" + got.name + "' " + ad::to_string(got.value.shape()) +
                                " does not match expected '" + p.name + "' " + ad::to_string(p.value.shape()));
    }
  }
}

}  // namespace

std::string_view to_string(CheckpointErrorKind kind) {
  switch (kind) {
    case CheckpointErrorKind::io: return "io";
    case CheckpointErrorKind::bad_magic: return "bad magic";
    case CheckpointErrorKind::bad_version: return "bad version";
    case CheckpointErrorKind::truncated: return "truncated";
    case CheckpointErrorKind::bad_config: return "bad config";
    case CheckpointErrorKind::shape_mismatch: return "shape mismatch";
  }
  return "io";
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  KeyValues kv;
  ckpt.model.to_key_values(kv);
  ckpt.train.to_key_values(kv);
  kv["checkpoint.epoch"] = std::to_string(ckpt.epoch);
  kv["checkpoint.valid_ppl"] = format_real(ckpt.valid_ppl);
  for (const auto& [k, v] : ckpt.meta) kv["meta." + k] = v;
  const std::string text = format_key_values(kv);

  io::write_bytes(out, kMagic, sizeof kMagic);
  io::write_uint<std::uint32_t>(out, kCheckpointVersion);
  io::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
  io::write_bytes(out, text.data(), text.size());
  io::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.params.size()));
  for (const auto& p : ckpt.params) {
    if (p.name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw CheckpointError(CheckpointErrorKind::io, "parameter name too long: " + p.name);
    }
    if (p.value.rank() > std::numeric_limits<std::uint8_t>::max()) {
      throw CheckpointError(CheckpointErrorKind::io, "too many dimensions in " + p.name);
    }
    io::write_uint<std::uint16_t>(out, static_cast<std::uint16_t>(p.name.size()));
    io::write_bytes(out, p.name.data(), p.name.size());
    io::write_uint<std::uint8_t>(out, static_cast<std::uint8_t>(p.value.rank()));
    for (auto d : p.value.shape()) io::write_uint<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    io::write_f32(out, p.value.data());
  }
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError(CheckpointErrorKind::io, "cannot open " + path + " for writing");
  write_checkpoint(out, ckpt);
  out.flush();
  if (!out) throw CheckpointError(CheckpointErrorKind::io, "write failed for " + path);
}

Checkpoint read_checkpoint(std::istream& in, const std::string& origin) {
  Checkpoint ckpt;
  try {
    char magic[4];
    io::read_bytes(in, magic, sizeof magic, "magic");
    if (!std::equal(magic, magic + 4, kMagic)) {
      throw CheckpointError(CheckpointErrorKind::bad_magic, origin + ": not a checkpoint (bad magic)");
    }
    const auto version = io::read_uint<std::uint32_t>(in, "version");
    if (version != kCheckpointVersion) {
      throw CheckpointError(CheckpointErrorKind::bad_version,
                            origin + ": unsupported checkpoint version " + std::to_string(version));
    }
    const auto text_len = io::read_uint<std::uint32_t>(in, "config length");
    const std::string text = io::read_string(in, text_len, "config block");

    try {
      const KeyValues kv = parse_key_values(text, origin);
      ckpt.model = model::ModelConfig::from_key_values(kv);
      ckpt.train = TrainConfig::from_key_values(kv);
      for (const auto& [k, v] : kv) {
        if (k.starts_with("meta.")) ckpt.meta.emplace(k.substr(5), v);
      }
      if (const auto it = kv.find("checkpoint.epoch"); it != kv.end()) {
        ckpt.epoch = static_cast<std::size_t>(parse_int("checkpoint.epoch", it->second));
      }
      if (const auto it = kv.find("checkpoint.valid_ppl"); it != kv.end()) {
        ckpt.valid_ppl = parse_real("checkpoint.valid_ppl", it->second);
      }
      ckpt.model.validate();
    } catch (const CheckpointError&) {
      throw;
    } catch (const std::exception& e) {
      throw CheckpointError(CheckpointErrorKind::bad_config, origin + ": " + e.what());
    }

    const auto n = io::read_uint<std::uint32_t>(in, "parameter count");
    ckpt.params.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      NamedTensor p;
      const auto name_len = io::read_uint<std::uint16_t>(in, "name length");
      p.name = io::read_string(in, name_len, "parameter name");
      const auto ndim = io::read_uint<std::uint8_t>(in, "rank");
      ad::Shape shape(ndim);
      for (auto& d : shape) d = io::read_uint<std::uint32_t>(in, "dimension");
      p.value = ad::Tensor<float>(shape);
      io::read_f32(in, p.value.data(), "tensor payload");
      ckpt.params.push_back(std::move(p));
    }
  } catch (const io::TruncatedInput& e) {
    throw CheckpointError(CheckpointErrorKind::truncated, origin + ": " + e.what());
  }
  check_layout(ckpt.model, ckpt.params, origin);
  return ckpt;
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(CheckpointErrorKind::io, "cannot open checkpoint " + path);
  return read_checkpoint(in, path);
}

Checkpoint snapshot(const model::NmtModel<float>& model, const TrainConfig& train, std::size_t epoch,
                    double valid_ppl, const KeyValues& meta) {
  Checkpoint c;
  c.model = model.config();
  c.train = train;
  c.epoch = epoch;
  c.valid_ppl = valid_ppl;
  c.meta = meta;
  for (const auto& p : model.params()) c.params.push_back({p.name, p.value});
  return c;
}

void restore(model::NmtModel<float>& model, const Checkpoint& ckpt) {
  check_layout(model.config(), ckpt.params, "checkpoint");
  std::size_t i = 0;
  for (auto& p : model.params()) p.value = ckpt.params[i++].value;
}

model::NmtModel<float> instantiate(const Checkpoint& ckpt) {
  model::NmtModel<float> m(ckpt.model);
  restore(m, ckpt);
  return m;
}

}  // namespace mmt::trainer
