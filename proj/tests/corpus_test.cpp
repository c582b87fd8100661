#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "mmt/common/rng.hpp"
#include "mmt/corpus/corpus.hpp"
#include "mmt/corpus/feature_file.hpp"
#include "mmt/corpus/text.hpp"

namespace {

using namespace mmt::corpus;
using mmt::testing::TempDir;

TEST(Normalize, LowercasesAndSplits) {
  EXPECT_EQ(normalize_text("The Man"), (Tokens{"the", "man"}));
  EXPECT_EQ(normalize_text("A man, smiling."), (Tokens{"a", "man", ",", "smiling", "."}));
  EXPECT_EQ(normalize_text("एक आदमी"), (Tokens{"एक", "आदमी"}));
  EXPECT_TRUE(normalize_text("").empty());
  EXPECT_TRUE(normalize_text(" \t ").empty());
}

TEST(Normalize, UnicodeCaseAndPunctuation) {
  EXPECT_EQ(normalize_text("ÉCOLE Straße"), (Tokens{"école", "straße"}));
  EXPECT_EQ(normalize_text("man's (red) hat!"), (Tokens{"man", "'", "s", "(", "red", ")", "hat", "!"}));
  EXPECT_EQ(normalize_text("यह लाल है।"), (Tokens{"यह", "लाल", "है", "।"}));
}

TEST(Normalize, IsIdempotent) {
  mmt::Rng rng(17);
  const std::vector<std::string> pieces = {"A", "b", "Ç", ",", ".", " ", "  ", "\t", "!?", "é", "ह", "।", "x-y",
                                           "'", "\xff", "Ω", "(", ")", "1", "9"};
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const auto n = rng.below(12);
    for (std::uint64_t k = 0; k < n; ++k) s += pieces[rng.below(pieces.size())];
    const auto once = normalize_text(s);
    EXPECT_EQ(normalize_text(join_tokens(once)), once) << s;
  }
}

TEST(Normalize, InvalidUtf8BecomesReplacement) {
  EXPECT_EQ(normalize_text("a\xff"), (Tokens{"a\xEF\xBF\xBD"}));
}

TEST(Detokenize, GluesPunctuation) {
  EXPECT_EQ(detokenize({"a", "man", ",", "smiling", "."}), "a man, smiling.");
  EXPECT_EQ(detokenize({"(", "red", ")", "hat"}), "(red) hat");
  EXPECT_EQ(detokenize({}), "");
}

TEST(MultimodalTsv, ParsesFields) {
  std::istringstream in("2391240\t103\t67\t372\t345\ta man climbs\tएक आदमी चढ़ता है\n");
  const auto rows = parse_multimodal_tsv(in, "t");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].image_id, "2391240");
  EXPECT_EQ(rows[0].region, (RegionBox{103, 67, 372, 345}));
  EXPECT_EQ(rows[0].src_text, "a man climbs");
  EXPECT_EQ(rows[0].tgt_text, "एक आदमी चढ़ता है");
}

TEST(MultimodalTsv, ErrorsNameTheLine) {
  const auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_multimodal_tsv(in, "t");
    } catch (const CorpusError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  const std::string good = "1\t0\t0\t5\t5\ta\tb\n";
  EXPECT_EQ(line_of(good + "1\t0\t0\t5\t5\ta\n"), 2u);
  EXPECT_EQ(line_of(good + good + "1\tx\t0\t5\t5\ta\tb\n"), 3u);
  EXPECT_EQ(line_of("1\t0\t0\t0\t5\ta\tb\n"), 1u);
  EXPECT_EQ(line_of("1\t0\t0\t5\t-1\ta\tb\n"), 1u);
  EXPECT_EQ(line_of("1\t0\t0\t5\t5\t...\t \n"), 1u);
}

TEST(MultimodalTsv, EmptyFileAndRoundTrip) {
  std::istringstream empty("");
  EXPECT_TRUE(parse_multimodal_tsv(empty, "e").empty());

  std::istringstream in("7\t1\t2\t3\t4\tThe Dog, barking.\tकुत्ता भौंक रहा है।\n8\t0\t0\t1\t1\tX\tY\n");
  const auto rows = parse_multimodal_tsv(in, "t");
  std::ostringstream out;
  write_multimodal_tsv(out, rows);
  std::istringstream again(out.str());
  EXPECT_EQ(parse_multimodal_tsv(again, "t2"), rows);
}

TEST(ParallelTsv, DropsEmptySides) {
  std::istringstream in("a b\tc\n...\t\nx\ty z\n");
  const auto c = parse_parallel_tsv(in, "p");
  EXPECT_EQ(c.examples.size(), 2u);
  EXPECT_EQ(c.dropped, 1u);
}

TEST(ParallelFiles, LineAligned) {
  TempDir dir("corpus");
  mmt::testing::write_text(dir.file("s"), "One\nTwo\n");
  mmt::testing::write_text(dir.file("t"), "एक\nदो\n");
  const auto c = load_parallel_files(dir.file("s"), dir.file("t"));
  ASSERT_EQ(c.examples.size(), 2u);
  EXPECT_EQ(c.examples[1].src_text, "two");
  EXPECT_EQ(c.examples[1].tgt_text, "दो");
}

TEST(ClampRegion, Examples) {
  EXPECT_EQ(clamp_region({10, 20, 100, 50}, 640, 480), (RegionBox{10, 20, 100, 50}));
  EXPECT_EQ(clamp_region({600, 400, 100, 100}, 640, 480), (RegionBox{600, 400, 40, 80}));
  EXPECT_THROW(clamp_region({700, 500, 10, 10}, 640, 480), std::invalid_argument);
}

TEST(ClampRegion, OutputAlwaysInside) {
  mmt::Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    const int iw = 1 + static_cast<int>(rng.below(300)), ih = 1 + static_cast<int>(rng.below(300));
    const RegionBox box{static_cast<int>(rng.below(400)), static_cast<int>(rng.below(400)),
                        1 + static_cast<int>(rng.below(400)), 1 + static_cast<int>(rng.below(400))};
    const bool overlaps = box.x < iw && box.y < ih;
    if (!overlaps) {
      EXPECT_THROW(clamp_region(box, iw, ih), std::invalid_argument);
      continue;
    }
    const auto c = clamp_region(box, iw, ih);
    EXPECT_GE(c.x, 0);
    EXPECT_GE(c.y, 0);
    EXPECT_GE(c.w, 1);
    EXPECT_GE(c.h, 1);
    EXPECT_LE(c.x + c.w, iw);
    EXPECT_LE(c.y + c.h, ih);
  }
}

struct Pair {
  Tokens src, tgt;
};

TEST(LengthFilter, BoundaryInclusive) {
  const std::vector<Pair> in = {{Tokens(50, "a"), Tokens(50, "b")}, {Tokens(51, "a"), Tokens(10, "b")},
                                {Tokens(3, "a"), Tokens(51, "b")}};
  const auto kept = length_filter(in);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].src.size(), 50u);
  EXPECT_TRUE(length_filter(std::vector<Pair>{}).empty());
}

TEST(Stats, SmallExample) {
  const std::vector<ParallelExample> ex = {{"a b c", "x"}, {"a b c d e", "y z"}};
  const auto s = compute_stats(ex);
  EXPECT_EQ(s.n_sentences, 2u);
  EXPECT_DOUBLE_EQ(s.avg_src_len, 4.0);
  EXPECT_DOUBLE_EQ(s.avg_tgt_len, 1.5);
  const auto none = compute_stats(std::vector<ParallelExample>{});
  EXPECT_EQ(none.n_sentences, 0u);
  EXPECT_EQ(none.avg_src_len, 0.0);
}

TEST(Stats, MatchesShellWordCount) {
  TempDir dir("stats");
  const std::string path = dir.file("fixture.tsv");
  mmt::testing::write_text(path,
                           "1\t0\t0\t9\t9\ta man is walking\tएक आदमी चल रहा है\n"
                           "2\t0\t0\t9\t9\tred car\tलाल कार\n"
                           "3\t0\t0\t9\t9\tthe sky is blue .\tआकाश नीला है ।\n"
                           "4\t0\t0\t9\t9\tdog\tकुत्ता\n"
                           "5\t0\t0\t9\t9\ttwo white birds on a wire\tतार पर दो सफेद पक्षी\n"
                           "6\t0\t0\t9\t9\tgreen leaves\tहरी पत्तियां\n"
                           "7\t0\t0\t9\t9\ta tall building , glass windows\tएक ऊंची इमारत , कांच की खिड़कियां\n"
                           "8\t0\t0\t9\t9\tcloudy sky\tबादल वाला आकाश\n"
                           "9\t0\t0\t9\t9\tman wearing a hat\tटोपी पहने आदमी\n"
                           "10\t0\t0\t9\t9\ttrain on tracks\tपटरियों पर ट्रेन\n");
  const auto rows = load_multimodal_tsv(path);
  const auto s = compute_stats(rows);
  const auto wc = [&](int field) {
    return std::stoul(mmt::testing::shell_output("cut -f" + std::to_string(field) + " '" + path + "' | awk '{n += NF} END {print n + 0}'"));
  };
  const auto lines = std::stoul(mmt::testing::shell_output("wc -l < '" + path + "'"));
  EXPECT_EQ(s.n_sentences, lines);
  EXPECT_EQ(s.src_tokens, wc(6));
  EXPECT_EQ(s.tgt_tokens, wc(7));
  EXPECT_DOUBLE_EQ(s.avg_src_len, static_cast<double>(wc(6)) / static_cast<double>(lines));
  EXPECT_DOUBLE_EQ(s.avg_tgt_len, static_cast<double>(wc(7)) / static_cast<double>(lines));

  std::ostringstream out;
  print_stats(out, "train", s);
  EXPECT_NE(out.str().find("n_sentences=10\n"), std::string::npos);
  EXPECT_NE(out.str().find("avg_src_len="), std::string::npos);
}

TEST(Stats, Additive) {
  const std::vector<ParallelExample> a = {{"a b", "c"}, {"d", "e f g"}};
  const std::vector<ParallelExample> b = {{"h i j", "k"}};
  auto ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const auto sa = compute_stats(a), sb = compute_stats(b), sab = compute_stats(ab);
  EXPECT_EQ(sab.n_sentences, sa.n_sentences + sb.n_sentences);
  EXPECT_EQ(sab.src_tokens, sa.src_tokens + sb.src_tokens);
  EXPECT_EQ(sab.tgt_tokens, sa.tgt_tokens + sb.tgt_tokens);
}

TEST(FeatureFile, RoundTripBitwise) {
  const auto store = synthetic_features({"0_a", "1_b", "2_a"}, 3, 2, 5);
  std::ostringstream out;
  store.write(out);
  const std::string bytes = out.str();
  EXPECT_EQ(bytes.substr(0, 4), "MMTF");
  EXPECT_EQ(bytes.size(), 4 + 16 + 3 * (4 + 3) + 3 * 3 * 2 * 4);
  std::istringstream in(bytes);
  const auto back = FeatureStore::read(in, "mem");
  ASSERT_EQ(back.ids(), store.ids());
  EXPECT_EQ(back.regions(), 3u);
  EXPECT_EQ(back.dim(), 2u);
  for (const auto& id : store.ids()) {
    const auto x = store.at(id), y = back.at(id);
    EXPECT_TRUE(std::equal(x.begin(), x.end(), y.begin(), y.end()));
  }
}

TEST(FeatureFile, Errors) {
  FeatureStore store(2, 2);
  const float ok[4] = {1, 2, 3, 4};
  store.add("a", ok);
  EXPECT_THROW(store.add("a", ok), FeatureFileError);
  const float bad[4] = {1, NAN, 3, 4};
  EXPECT_THROW(store.add("b", bad), FeatureFileError);
  const float small[3] = {1, 2, 3};
  EXPECT_THROW(store.add("c", small), FeatureFileError);
  try {
    store.at("missing_id");
    FAIL();
  } catch (const FeatureFileError& e) {
    EXPECT_NE(std::string(e.what()).find("missing_id"), std::string::npos);
  }

  std::ostringstream out;
  store.write(out);
  const auto bytes = out.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(FeatureStore::read(truncated, "t"), FeatureFileError);
  std::istringstream magic("XXXX" + bytes.substr(4));
  EXPECT_THROW(FeatureStore::read(magic, "m"), FeatureFileError);
}

TEST(FeatureFile, SyntheticIsSeeded) {
  const auto a = synthetic_features({"x", "y"}, 4, 3, 9);
  const auto b = synthetic_features({"x", "y"}, 4, 3, 9);
  const auto c = synthetic_features({"x", "y"}, 4, 3, 10);
  std::ostringstream sa, sb, sc;
  a.write(sa);
  b.write(sb);
  c.write(sc);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str(), sc.str());
}

TEST(FeatureKey, RowAndImage) { EXPECT_EQ(feature_key(0, "2391240"), "0_2391240"); }

}  // namespace
