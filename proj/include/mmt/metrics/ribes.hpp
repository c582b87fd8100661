#pragma once

#include <string>
#include <vector>

#include "mmt/corpus/text.hpp"

namespace mmt::metrics {

struct RibesOptions {
  double alpha = 0.25;  // unigram precision exponent
  double beta = 0.10;   // brevity penalty exponent
};

/// Reference position of each hypothesis word that can be aligned: a word
/// occurring exactly once in both sides aligns directly; otherwise the
/// shortest left or right context n-gram that is unique in both sides is
/// used. Unresolvable words are skipped.
std::vector<std::size_t> ribes_alignment(const corpus::Tokens& hyp, const corpus::Tokens& ref);

/// Normalized Kendall's tau of the alignment, times precision^alpha times
/// BP^beta. Empty alignment gives 0.
double ribes(const corpus::Tokens& hyp, const corpus::Tokens& ref, const RibesOptions& options = {});

struct RibesReport {
  double ribes = 0.0;
  std::vector<double> sentence_scores;
};

/// Mean of the sentence scores.
RibesReport corpus_ribes(const std::vector<corpus::Tokens>& hyps, const std::vector<corpus::Tokens>& refs,
                         const RibesOptions& options = {});

}  // namespace mmt::metrics
