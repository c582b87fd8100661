#pragma once

#include <array>
#include <string>
#include <vector>

#include "mmt/corpus/text.hpp"

namespace mmt::metrics {

using corpus::Tokens;

struct BleuReport {
  double bleu = 0.0;                     // 0..100
  std::array<double, 4> precisions{};    // clipped, 0..1
  std::array<std::size_t, 4> matches{};
  std::array<std::size_t, 4> totals{};
  double brevity_penalty = 0.0;
  double ratio = 0.0;                    // hyp_len / ref_len
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

/// 4-gram corpus BLEU: clipped counts summed over the corpus, geometric mean
/// of the four precisions, BP = min(1, exp(1 - ref_len/hyp_len)). An order
/// with no hypothesis n-grams has precision 0. `smooth` adds one to the
/// numerator and denominator of orders 2-4 (sentence-level diagnostics).
BleuReport corpus_bleu(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs, bool smooth = false);

/// "BLEU = 42.47 (p1/p2/p3/p4 = 70.1/48.2/35.3/26.1, BP = 0.987, ratio = 0.987)"
std::string format_bleu(const BleuReport& report);
/// bleu=..., p1..p4=..., bp=..., ratio=..., hyp_len=..., ref_len=... one per line.
std::string bleu_key_values(const BleuReport& report);

}  // namespace mmt::metrics
