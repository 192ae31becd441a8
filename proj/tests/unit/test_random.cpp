#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "radionet/errors.hpp"
#include "radionet/random.hpp"

using namespace radionet;

TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::apply({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPiDigits) {
  const auto out = Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RandomStream, SameLabelSameDraws) {
  RandomStream a(42, Purpose::decay, 7, 3, 1);
  RandomStream b(42, Purpose::decay, 7, 3, 1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, LabelsAreIndependent) {
  std::set<std::uint64_t> firsts;
  for (std::uint32_t node = 0; node < 50; ++node) {
    for (auto p : {Purpose::decay, Purpose::shift, Purpose::topology}) {
      firsts.insert(RandomStream(1, p, node).next_u64());
    }
  }
  EXPECT_EQ(firsts.size(), 150u);
  EXPECT_NE(RandomStream(1, Purpose::decay).next_u64(), RandomStream(2, Purpose::decay).next_u64());
}

TEST(RandomStream, UniformRanges) {
  RandomStream r(3, Purpose::generic);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double w = r.uniform_open_closed();
    EXPECT_GT(w, 0.0);
    EXPECT_LE(w, 1.0);
    EXPECT_LT(r.uniform_below(7), 7u);
  }
}

TEST(RandomStream, CoinPow2Frequency) {
  RandomStream r(5, Purpose::generic);
  int heads = 0;
  const int trials = 200000;
  for (int i = 0; i < trials; ++i) heads += r.coin_pow2(3) ? 1 : 0;
  EXPECT_NEAR(heads / static_cast<double>(trials), 0.125, 0.005);
  EXPECT_TRUE(r.coin_pow2(0));
}

TEST(Exponential, InverseCdfAtOneIsZero) { EXPECT_DOUBLE_EQ(exponential_from_uniform(1.0, 0.3), 0.0); }

TEST(Exponential, InverseCdfKnownPoint) {
  EXPECT_NEAR(exponential_from_uniform(std::exp(-2.0), 1.0), 2.0, 1e-12);
}

TEST(Exponential, MeanMatchesRate) {
  RandomStream r(11, Purpose::monte_carlo);
  double sum = 0.0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) sum += sample_exponential(r, 0.5);
  EXPECT_NEAR(sum / draws, 2.0, 0.01);
}

TEST(Exponential, RejectsNonPositiveRate) {
  RandomStream r(1, Purpose::generic);
  EXPECT_THROW(sample_exponential(r, 0.0), ValidationError);
}

TEST(DeriveSeed, DeterministicAndLabelSensitive) {
  const StreamLabel a{make_tag(Purpose::generic, 1), 2, 3};
  const StreamLabel b{make_tag(Purpose::generic, 1), 2, 4};
  EXPECT_EQ(derive_seed(9, a), derive_seed(9, a));
  EXPECT_NE(derive_seed(9, a), derive_seed(9, b));
}
