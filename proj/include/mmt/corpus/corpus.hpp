#pragma once

#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmt/corpus/text.hpp"

namespace mmt::corpus {

/// Error raised while parsing a corpus file; carries the 1-based line number.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& path, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Axis-aligned region in pixels; w, h >= 1 and x, y >= 0.
struct RegionBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;
  friend bool operator==(const RegionBox&, const RegionBox&) = default;
};

/// One multimodal corpus row. Texts hold normalized, space-joined tokens.
struct RawExample {
  std::string image_id;
  RegionBox region;
  std::string src_text;
  std::string tgt_text;
  friend bool operator==(const RawExample&, const RawExample&) = default;
};

struct ParallelExample {
  std::string src_text;
  std::string tgt_text;
  friend bool operator==(const ParallelExample&, const ParallelExample&) = default;
};

struct ParallelCorpus {
  std::vector<ParallelExample> examples;
  std::size_t dropped = 0;  // lines where one side normalized to nothing
};

struct SplitStats {
  std::size_t n_sentences = 0;
  std::size_t src_tokens = 0;
  std::size_t tgt_tokens = 0;
  double avg_src_len = 0.0;
  double avg_tgt_len = 0.0;
};

/// Multimodal TSV: image_id, x, y, w, h, english, hindi (7 fields, no header).
std::vector<RawExample> load_multimodal_tsv(const std::string& path);
std::vector<RawExample> parse_multimodal_tsv(std::istream& in, const std::string& origin);
void write_multimodal_tsv(std::ostream& out, const std::vector<RawExample>& examples);

/// Two-column TSV (source, target). Lines normalizing to an empty side are
/// dropped and counted rather than rejected.
ParallelCorpus load_parallel_tsv(const std::string& path);
ParallelCorpus parse_parallel_tsv(std::istream& in, const std::string& origin);

/// Line-aligned source and target files.
ParallelCorpus load_parallel_files(const std::string& src_path, const std::string& tgt_path);

/// One normalized sentence per line; empty lines stay (as empty strings) so
/// that line counts are preserved.
std::vector<std::string> load_text_lines(const std::string& path);

/// Intersects the box with [0, img_w) x [0, img_h). Throws std::invalid_argument
/// when the image size is not positive or the intersection is empty.
RegionBox clamp_region(const RegionBox& region, int img_w, int img_h);

template <typename E>
concept TokenizedPair = requires(const E& e) {
  { e.src.size() } -> std::convertible_to<std::size_t>;
  { e.tgt.size() } -> std::convertible_to<std::size_t>;
};

/// Keeps examples whose source and target lengths are both <= max_len.
template <TokenizedPair E>
std::vector<E> length_filter(const std::vector<E>& examples, std::size_t max_len = 50) {
  std::vector<E> kept;
  kept.reserve(examples.size());
  for (const auto& e : examples) {
    if (e.src.size() <= max_len && e.tgt.size() <= max_len) kept.push_back(e);
  }
  return kept;
}

SplitStats compute_stats(const std::vector<RawExample>& examples);
SplitStats compute_stats(const std::vector<ParallelExample>& examples);

/// Human-readable table followed by key=value lines.
void print_stats(std::ostream& out, const std::string& label, const SplitStats& stats);

/// Key under which the feature file stores the row's visual features:
/// "<row_index>_<image_id>" with a 0-based row index.
std::string feature_key(std::size_t row_index, const std::string& image_id);

}  // namespace mmt::corpus
