#include <gtest/gtest.h>

#include <set>

#include "regspec/config.hpp"
#include "regspec/error.hpp"
#include "regspec/rng.hpp"

using namespace regspec;

TEST(CounterRng, SameKeySameStream) {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterRng, DerivedStreamsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 1000; ++s) firsts.insert(CounterRng(derive_seed(7, s)).next_u64());
  EXPECT_EQ(firsts.size(), 1000u);
}

TEST(CounterRng, UniformRanges) {
  CounterRng r(3);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double o = r.uniform_open_low();
    ASSERT_GT(o, 0.0);
    ASSERT_LE(o, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(CounterRng, NormalMoments) {
  CounterRng r(11);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(HashDouble, NegativeZeroFolds) { EXPECT_EQ(hash_double(0.0), hash_double(-0.0)); }

TEST(KeyValueConfig, ParsesListsCommentsAndRepeats) {
  const auto cfg = KeyValueConfig::parse(
      "# header\n"
      "n = 2000   # trailing\n"
      "ntau = none, auto , 0.5\n"
      "ntau = 8\n"
      "\n"
      "name=  hello world \n");
  EXPECT_EQ(cfg.get_int("n"), 2000);
  const std::vector<std::string> taus = {"none", "auto", "0.5", "8"};
  EXPECT_EQ(cfg.values("ntau"), taus);
  EXPECT_EQ(cfg.get_string("name"), "hello world");
  EXPECT_FALSE(cfg.contains("missing"));
  EXPECT_FALSE(cfg.find_double("missing").has_value());
}

TEST(KeyValueConfig, RejectsMalformedInput) {
  EXPECT_THROW(KeyValueConfig::parse("just a line\n"), InvalidArgument);
  const auto cfg = KeyValueConfig::parse("n = abc\n");
  EXPECT_THROW(cfg.get_int("n"), InvalidArgument);
  EXPECT_THROW(cfg.get_double("missing"), InvalidArgument);
}

TEST(KeyValueConfig, NumberParsers) {
  EXPECT_EQ(parse_double("1e-3"), 1e-3);
  EXPECT_EQ(parse_int("-12"), -12);
  EXPECT_EQ(parse_u64("18446744073709551615"), 18446744073709551615ULL);
  EXPECT_THROW(parse_int("1.5"), InvalidArgument);
  EXPECT_THROW(parse_u64("-1"), InvalidArgument);
}
