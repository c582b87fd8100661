#pragma once

#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmt/common/kv_config.hpp"
#include "mmt/model/config.hpp"
#include "mmt/trainer/train_config.hpp"

namespace mmt::cli {

/// Contradictory or missing command-line input (exit status 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model and training settings after merging a config file with overrides.
/// Keys are "model.<field>" / "train.<field>"; the prefix may be dropped when
/// the field name is unambiguous. Vocabulary sizes come from the data and
/// model dropout follows train.dropout, so neither is settable.
struct RunConfig {
  model::ModelConfig model;
  trainer::TrainConfig train;
  std::set<std::string> explicit_keys;  // qualified keys set by file or overrides
};

std::vector<std::string> settable_keys();
/// Throws ConfigError for keys outside settable_keys().
std::string qualify_key(std::string_view key);
/// Later maps override earlier ones.
RunConfig resolve_run_config(const std::vector<KeyValues>& layers);

/// Runs the `mmt` command line. Returns 0 on success, 2 on usage errors and
/// 1 on runtime failures (one "error: ..." line on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmt::cli
