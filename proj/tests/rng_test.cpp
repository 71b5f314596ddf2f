#include "fsir/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsir {
namespace {

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterStream, RandomAccessMatchesSequential) {
  CounterStream s(12345);
  for (std::uint64_t i = 0; i < 50; ++i) EXPECT_EQ(s.next_u64(), CounterStream::at(12345, i));
  CounterStream offset(12345, 17);
  EXPECT_EQ(offset.next_u64(), CounterStream::at(12345, 17));
}

TEST(CounterStream, KeysGiveDifferentStreams) {
  EXPECT_NE(CounterStream::at(replication_stream(7, 0), 0), CounterStream::at(replication_stream(7, 1), 0));
  EXPECT_EQ(replication_stream(0b1100, 0b1010), 0b0110u);
}

TEST(CounterStream, UniformOpenInterval) {
  CounterStream s(9);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(CounterStream, NormalMoments) {
  CounterStream s(31);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  EXPECT_NEAR(m1 / n, 0.0, 0.01);
  EXPECT_NEAR(m2 / n, 1.0, 0.01);
  EXPECT_NEAR(m4 / n, 3.0, 0.06);
}

TEST(NormalQuantile, KnownValues) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.8413447460685429), 1.0, 1e-12);
}

TEST(CounterStream, BelowStaysInRange) {
  CounterStream s(4);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = s.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(Permutation, IsPermutationAndDeterministic) {
  CounterStream a(77), b(77);
  const auto p = permutation(102, a);
  EXPECT_EQ(p, permutation(102, b));
  auto sorted = p;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> expected(102);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(sorted, expected);
  EXPECT_NE(p, expected);
}

}  // namespace
}  // namespace fsir
