#include "mmt/metrics/ribes.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace mmt::metrics {
namespace {

using View = std::span<const std::string>;

// Occurrences of `gram` in `seq` (overlapping) and the first start position.
std::size_t occurrences(View gram, View seq, std::size_t* first) {
  std::size_t count = 0;
  for (std::size_t j = 0; j + gram.size() <= seq.size(); ++j) {
    if (std::equal(gram.begin(), gram.end(), seq.begin() + static_cast<std::ptrdiff_t>(j))) {
      if (count == 0 && first) *first = j;
      ++count;
    }
  }
  return count;
}

}  // namespace

std::vector<std::size_t> ribes_alignment(const corpus::Tokens& hyp, const corpus::Tokens& ref) {
  const View h(hyp), r(ref);
  std::vector<std::size_t> aligned;
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::size_t pos = 0;
    const auto in_ref = occurrences(h.subspan(i, 1), r, &pos);
    if (in_ref == 0) continue;
    if (in_ref == 1 && occurrences(h.subspan(i, 1), h, nullptr) == 1) {
      aligned.push_back(pos);
      continue;
    }
    for (std::size_t window = 1; window < std::max(i + 1, h.size() - i); ++window) {
      if (window <= i) {
        const auto gram = h.subspan(i - window, window + 1);
        if (occurrences(gram, r, &pos) == 1 && occurrences(gram, h, nullptr) == 1) {
          aligned.push_back(pos + window);
          break;
        }
      }
      if (i + window < h.size()) {
        const auto gram = h.subspan(i, window + 1);
        if (occurrences(gram, r, &pos) == 1 && occurrences(gram, h, nullptr) == 1) {
          aligned.push_back(pos);
          break;
        }
      }
    }
  }
  return aligned;
}

double ribes(const corpus::Tokens& hyp, const corpus::Tokens& ref, const RibesOptions& options) {
  if (hyp.empty() || ref.empty()) return 0.0;
  const auto aligned = ribes_alignment(hyp, ref);
  const std::size_t n = aligned.size();
  double nkt = 0.0;
  if (n == 1 && ref.size() == 1) {
    nkt = 1.0;
  } else if (n >= 2) {
    std::size_t ascending = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) ascending += aligned[i] < aligned[j] ? 1 : 0;
    }
    nkt = static_cast<double>(ascending) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
  }
  if (nkt == 0.0) return 0.0;
  const double precision = static_cast<double>(n) / static_cast<double>(hyp.size());
  const double bp = hyp.size() >= ref.size()
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(hyp.size()));
  return nkt * std::pow(precision, options.alpha) * std::pow(bp, options.beta);
}

RibesReport corpus_ribes(const std::vector<corpus::Tokens>& hyps, const std::vector<corpus::Tokens>& refs,
                         const RibesOptions& options) {
  if (hyps.size() != refs.size()) throw std::invalid_argument("corpus_ribes: hypothesis/reference count mismatch");
  if (hyps.empty()) throw std::invalid_argument("corpus_ribes: empty corpus");
  RibesReport r;
  double sum = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    r.sentence_scores.push_back(ribes(hyps[i], refs[i], options));
    sum += r.sentence_scores.back();
  }
  r.ribes = sum / static_cast<double>(hyps.size());
  return r;
}

}  // namespace mmt::metrics
