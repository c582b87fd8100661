#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "mmt/inference/beam_search.hpp"

namespace mmt::inference {

struct Selection {
  Hypothesis hypothesis;
  std::size_t model = 0;  // index of the n-best list it came from
};

/// Pools every list, drops hypotheses containing `unk`, and returns the
/// highest log-likelihood survivor (earlier lists and positions win ties).
/// If every hypothesis contains `unk`, the overall best is returned.
/// Throws std::invalid_argument when all lists are empty.
Selection select_hypothesis(std::span<const std::vector<Hypothesis>> nbest_lists, TokenId unk = kUnkId);
Selection select_hypothesis(const std::vector<Hypothesis>& nbest_a, const std::vector<Hypothesis>& nbest_b,
                            TokenId unk = kUnkId);

}  // namespace mmt::inference
