#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "mmt/common/binary_io.hpp"
#include "mmt/common/kv_config.hpp"
#include "mmt/common/rng.hpp"

namespace {

using mmt::Rng;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, KnownFirstOutputs) {
  // splitmix64(0) seeding followed by xoshiro256**, computed independently.
  Rng rng(0);
  std::uint64_t s[4];
  std::uint64_t z = 0;
  for (auto& word : s) {
    z += 0x9E3779B97F4A7C15ULL;
    std::uint64_t t = z;
    t = (t ^ (t >> 30)) * 0xBF58476D1CE4E5B9ULL;
    t = (t ^ (t >> 27)) * 0x94D049BB133111EBULL;
    word = t ^ (t >> 31);
  }
  const auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  for (int i = 0; i < 5; ++i) {
    const std::uint64_t expected = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    EXPECT_EQ(rng.next_u64(), expected) << "draw " << i;
  }
}

TEST(Rng, UniformAndBelowStayInRange) {
  Rng rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const auto k = rng.below(6);
    ASSERT_LT(k, 6u);
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Rng, NormalHasRoughlyUnitMoments) {
  Rng rng(3);
  double sum = 0, sq = 0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(9);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  rng.shuffle(w.begin(), w.end());
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(KeyValues, ParsesCommentsAndSpaces) {
  const auto kv = mmt::parse_key_values("# header\n  lr = 0.01  # trailing\n\nmodel.emb_size=16\n");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("lr"), "0.01");
  EXPECT_EQ(kv.at("model.emb_size"), "16");
}

TEST(KeyValues, RejectsDuplicatesAndMissingEquals) {
  EXPECT_THROW(mmt::parse_key_values("a = 1\na = 2\n"), mmt::ConfigError);
  EXPECT_THROW(mmt::parse_key_values("just words\n"), mmt::ConfigError);
}

TEST(KeyValues, FormatParsesBack) {
  mmt::KeyValues kv{{"b", "2"}, {"a", "x y"}};
  EXPECT_EQ(mmt::format_key_values(kv), "a=x y\nb=2\n");
  EXPECT_EQ(mmt::parse_key_values(mmt::format_key_values(kv)), kv);
}

TEST(KeyValues, TypedParsersNameTheKey) {
  EXPECT_EQ(mmt::parse_int("k", "-12"), -12);
  EXPECT_DOUBLE_EQ(mmt::parse_real("k", "1e-8"), 1e-8);
  EXPECT_TRUE(mmt::parse_bool("k", "true"));
  try {
    mmt::parse_int("train.batch_size", "forty");
    FAIL();
  } catch (const mmt::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("train.batch_size"), std::string::npos);
  }
}

TEST(KeyValues, FormatRealRoundTrips) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.below(200)) - 100);
    EXPECT_EQ(mmt::parse_real("v", mmt::format_real(v)), v);
  }
  EXPECT_EQ(mmt::format_real(0.001), "0.001");
}

TEST(BinaryIo, IntegersAreLittleEndian) {
  std::ostringstream out;
  mmt::io::write_uint<std::uint32_t>(out, 0x01020304u);
  EXPECT_EQ(out.str(), std::string("\x04\x03\x02\x01", 4));
  std::istringstream in(out.str());
  EXPECT_EQ(mmt::io::read_uint<std::uint32_t>(in, "x"), 0x01020304u);
  EXPECT_THROW(mmt::io::read_uint<std::uint32_t>(in, "x"), mmt::io::TruncatedInput);
}

}  // namespace
