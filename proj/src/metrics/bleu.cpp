#include "mmt/metrics/bleu.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>

#include "mmt/common/kv_config.hpp"

namespace mmt::metrics {
namespace {

using NgramCounts = std::map<std::span<const std::string>, std::size_t,
                             decltype([](std::span<const std::string> a, std::span<const std::string> b) {
                               return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                             })>;

NgramCounts count_ngrams(const Tokens& tokens, std::size_t n) {
  NgramCounts counts;
  const std::span<const std::string> all(tokens);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[all.subspan(i, n)];
  return counts;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

BleuReport corpus_bleu(const std::vector<Tokens>& hyps, const std::vector<Tokens>& refs, bool smooth) {
  if (hyps.size() != refs.size()) {
    throw std::invalid_argument("corpus_bleu: " + std::to_string(hyps.size()) + " hypotheses but " +
                                std::to_string(refs.size()) + " references");
  }
  if (hyps.empty()) throw std::invalid_argument("corpus_bleu: empty corpus");
  BleuReport r;
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    r.hyp_len += hyps[s].size();
    r.ref_len += refs[s].size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto h = count_ngrams(hyps[s], n);
      const auto ref = count_ngrams(refs[s], n);
      for (const auto& [gram, count] : h) {
        r.totals[n - 1] += count;
        if (const auto it = ref.find(gram); it != ref.end()) r.matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < 4; ++n) {
    double m = static_cast<double>(r.matches[n]);
    double t = static_cast<double>(r.totals[n]);
    if (smooth && n > 0) {
      m += 1.0;
      t += 1.0;
    }
    r.precisions[n] = t > 0.0 ? m / t : 0.0;
    if (r.precisions[n] > 0.0) {
      log_sum += std::log(r.precisions[n]);
    } else {
      zero = true;
    }
  }
  if (r.hyp_len > 0) {
    r.ratio = r.ref_len > 0 ? static_cast<double>(r.hyp_len) / static_cast<double>(r.ref_len) : 0.0;
    r.brevity_penalty = r.hyp_len >= r.ref_len
                            ? 1.0
                            : std::exp(1.0 - static_cast<double>(r.ref_len) / static_cast<double>(r.hyp_len));
  }
  if (!zero && r.hyp_len > 0) {
    r.bleu = 100.0 * r.brevity_penalty * std::exp(log_sum / 4.0);
  }
  return r;
}

std::string format_bleu(const BleuReport& r) {
  std::ostringstream out;
  out << "BLEU = " << fixed(r.bleu, 2) << " (p1/p2/p3/p4 = ";
  for (std::size_t n = 0; n < 4; ++n) out << (n ? "/" : "") << fixed(100.0 * r.precisions[n], 1);
  out << ", BP = " << fixed(r.brevity_penalty, 3) << ", ratio = " << fixed(r.ratio, 3) << ")";
  return out.str();
}

std::string bleu_key_values(const BleuReport& r) {
  std::ostringstream out;
  out << "bleu=" << format_real(r.bleu) << '\n';
  for (std::size_t n = 0; n < 4; ++n) out << 'p' << n + 1 << '=' << format_real(r.precisions[n]) << '\n';
  out << "bp=" << format_real(r.brevity_penalty) << '\n'
      << "ratio=" << format_real(r.ratio) << '\n'
      << "hyp_len=" << r.hyp_len << '\n'
      << "ref_len=" << r.ref_len << '\n';
  return out.str();
}

}  // namespace mmt::metrics
