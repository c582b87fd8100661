#include "mmt/inference/selection.hpp"

#include <algorithm>
#include <cmath>

namespace mmt::inference {

double ranking_score(const Hypothesis& h, double length_penalty) {
  if (length_penalty == 0.0) return h.log_likelihood;
  return h.log_likelihood / std::pow(static_cast<double>(h.tokens.size() + 1), length_penalty);
}

Selection select_hypothesis(std::span<const std::vector<Hypothesis>> nbest_lists, TokenId unk) {
  const Hypothesis* best_clean = nullptr;
  const Hypothesis* best_any = nullptr;
  std::size_t clean_model = 0, any_model = 0;
  for (std::size_t m = 0; m < nbest_lists.size(); ++m) {
    for (const auto& h : nbest_lists[m]) {
      if (!best_any || h.log_likelihood > best_any->log_likelihood) {
        best_any = &h;
        any_model = m;
      }
      if (std::ranges::find(h.tokens, unk) != h.tokens.end()) continue;
      if (!best_clean || h.log_likelihood > best_clean->log_likelihood) {
        best_clean = &h;
        clean_model = m;
      }
    }
  }
  if (!best_any) throw std::invalid_argument("select_hypothesis: no hypotheses to choose from");
  if (best_clean) return {*best_clean, clean_model};
  return {*best_any, any_model};
}

Selection select_hypothesis(const std::vector<Hypothesis>& nbest_a, const std::vector<Hypothesis>& nbest_b,
                            TokenId unk) {
  const std::vector<Hypothesis> lists[2] = {nbest_a, nbest_b};
  return select_hypothesis(std::span<const std::vector<Hypothesis>>(lists), unk);
}

}  // namespace mmt::inference
