#include "mmt/corpus/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace mmt::corpus {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

int parse_coord(std::string_view field, const std::string& origin, std::size_t line, const char* name) {
  int v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw CorpusError(origin, line, std::string("non-integer ") + name + " '" + std::string(field) + "'");
  }
  return v;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

template <typename Example>
SplitStats stats_of(const std::vector<Example>& examples) {
  SplitStats s;
  s.n_sentences = examples.size();
  for (const auto& e : examples) {
    s.src_tokens += split_whitespace(e.src_text).size();
    s.tgt_tokens += split_whitespace(e.tgt_text).size();
  }
  if (s.n_sentences > 0) {
    s.avg_src_len = static_cast<double>(s.src_tokens) / static_cast<double>(s.n_sentences);
    s.avg_tgt_len = static_cast<double>(s.tgt_tokens) / static_cast<double>(s.n_sentences);
  }
  return s;
}

}  // namespace

CorpusError::CorpusError(const std::string& path, std::size_t line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::vector<RawExample> parse_multimodal_tsv(std::istream& in, const std::string& origin) {
  std::vector<RawExample> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(raw);
    const auto fields = split_tabs(line);
    if (fields.size() != 7) {
      throw CorpusError(origin, line_no, "expected 7 tab-separated fields, found " + std::to_string(fields.size()));
    }
    RawExample ex;
    ex.image_id = std::string(fields[0]);
    if (ex.image_id.empty()) throw CorpusError(origin, line_no, "empty image id");
    ex.region.x = parse_coord(fields[1], origin, line_no, "x");
    ex.region.y = parse_coord(fields[2], origin, line_no, "y");
    ex.region.w = parse_coord(fields[3], origin, line_no, "w");
    ex.region.h = parse_coord(fields[4], origin, line_no, "h");
    if (ex.region.x < 0 || ex.region.y < 0) throw CorpusError(origin, line_no, "negative region origin");
    if (ex.region.w <= 0 || ex.region.h <= 0) throw CorpusError(origin, line_no, "region width/height must be positive");
    ex.src_text = join_tokens(normalize_text(fields[5]));
    ex.tgt_text = join_tokens(normalize_text(fields[6]));
    if (ex.src_text.empty() || ex.tgt_text.empty()) throw CorpusError(origin, line_no, "empty text after normalization");
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<RawExample> load_multimodal_tsv(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_multimodal_tsv(in, path);
}

void write_multimodal_tsv(std::ostream& out, const std::vector<RawExample>& examples) {
  for (const auto& e : examples) {
    out << e.image_id << '\t' << e.region.x << '\t' << e.region.y << '\t' << e.region.w << '\t' << e.region.h
        << '\t' << e.src_text << '\t' << e.tgt_text << '\n';
  }
}

ParallelCorpus parse_parallel_tsv(std::istream& in, const std::string& origin) {
  ParallelCorpus corpus;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto fields = split_tabs(strip_cr(raw));
    if (fields.size() != 2) {
      throw CorpusError(origin, line_no, "expected 2 tab-separated fields, found " + std::to_string(fields.size()));
    }
    ParallelExample ex{join_tokens(normalize_text(fields[0])), join_tokens(normalize_text(fields[1]))};
    if (ex.src_text.empty() || ex.tgt_text.empty()) {
      ++corpus.dropped;
      continue;
    }
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

ParallelCorpus load_parallel_tsv(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_parallel_tsv(in, path);
}

ParallelCorpus load_parallel_files(const std::string& src_path, const std::string& tgt_path) {
  auto src_in = open_or_throw(src_path);
  auto tgt_in = open_or_throw(tgt_path);
  ParallelCorpus corpus;
  std::string s, t;
  std::size_t line_no = 0;
  for (;;) {
    const bool has_s = static_cast<bool>(std::getline(src_in, s));
    const bool has_t = static_cast<bool>(std::getline(tgt_in, t));
    if (!has_s && !has_t) break;
    ++line_no;
    if (has_s != has_t) throw CorpusError(has_s ? tgt_path : src_path, line_no, "parallel files differ in line count");
    ParallelExample ex{join_tokens(normalize_text(strip_cr(s))), join_tokens(normalize_text(strip_cr(t)))};
    if (ex.src_text.empty() || ex.tgt_text.empty()) {
      ++corpus.dropped;
      continue;
    }
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

std::vector<std::string> load_text_lines(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) lines.push_back(join_tokens(normalize_text(strip_cr(raw))));
  return lines;
}

RegionBox clamp_region(const RegionBox& region, int img_w, int img_h) {
  if (img_w < 1 || img_h < 1) throw std::invalid_argument("clamp_region: image size must be positive");
  const long long x0 = std::max<long long>(region.x, 0);
  const long long y0 = std::max<long long>(region.y, 0);
  const long long x1 = std::min<long long>(static_cast<long long>(region.x) + region.w, img_w);
  const long long y1 = std::min<long long>(static_cast<long long>(region.y) + region.h, img_h);
  if (x1 <= x0 || y1 <= y0) {
    throw std::invalid_argument("clamp_region: region does not overlap the " + std::to_string(img_w) + "x" +
                                std::to_string(img_h) + " image");
  }
  return RegionBox{static_cast<int>(x0), static_cast<int>(y0), static_cast<int>(x1 - x0), static_cast<int>(y1 - y0)};
}

SplitStats compute_stats(const std::vector<RawExample>& examples) { return stats_of(examples); }
SplitStats compute_stats(const std::vector<ParallelExample>& examples) { return stats_of(examples); }

void print_stats(std::ostream& out, const std::string& label, const SplitStats& stats) {
  std::ostringstream table;
  table << std::left << std::setw(14) << "split" << std::setw(12) << "sentences" << std::setw(20)
        << "avg length source" << "avg length target\n";
  table << std::setw(14) << label << std::setw(12) << stats.n_sentences << std::setw(20) << std::fixed
        << std::setprecision(2) << stats.avg_src_len << stats.avg_tgt_len << '\n';
  table << std::setprecision(4);
  table << "n_sentences=" << stats.n_sentences << '\n'
        << "src_tokens=" << stats.src_tokens << '\n'
        << "tgt_tokens=" << stats.tgt_tokens << '\n'
        << "avg_src_len=" << stats.avg_src_len << '\n'
        << "avg_tgt_len=" << stats.avg_tgt_len << '\n';
  out << table.str();
}

std::string feature_key(std::size_t row_index, const std::string& image_id) {
  return std::to_string(row_index) + "_" + image_id;
}

}  // namespace mmt::corpus
