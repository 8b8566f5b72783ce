#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "netflux/rng.hpp"

using netflux::Philox4x32;

namespace {

// Counter words (c0, c1, c2, c3) map to (index lo/hi, stream lo/hi).
Philox4x32::Block philox(std::uint32_t k0, std::uint32_t k1, std::array<std::uint32_t, 4> c) {
  Philox4x32 gen(static_cast<std::uint64_t>(k1) << 32 | k0,
                 static_cast<std::uint64_t>(c[3]) << 32 | c[2]);
  return gen.block(static_cast<std::uint64_t>(c[1]) << 32 | c[0]);
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  EXPECT_EQ(philox(0, 0, {0, 0, 0, 0}),
            (Philox4x32::Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox(0xffffffff, 0xffffffff, {0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}),
            (Philox4x32::Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox(0xa4093822, 0x299f31d0, {0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}),
            (Philox4x32::Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, SameSeedSameStream) {
  Philox4x32 a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i)
    ASSERT_EQ(a(), b());
}

TEST(Philox, StreamsDiffer) {
  Philox4x32 a(42, 1), b(42, 2);
  int equal = 0;
  for (int i = 0; i < 100; ++i)
    equal += a() == b();
  EXPECT_LT(equal, 3);
}

TEST(Philox, UniformRangeAndMean) {
  Philox4x32 gen(3);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double u = gen.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n) ~ 6.5e-4
  EXPECT_NEAR(sum / n, 0.5, 4e-3);
}

TEST(Philox, UniformOpenLowExcludesZero) {
  Philox4x32 gen(5);
  for (int i = 0; i < 10000; ++i) {
    double u = gen.uniform_open_low();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(Philox, BelowIsUniform) {
  Philox4x32 gen(11);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i)
    ++counts[gen.below(7)];
  // chi-square with 6 dof; 22.5 is the 0.999 quantile
  double chi = 0.0;
  for (int c : counts)
    chi += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi, 22.5);
  EXPECT_EQ(gen.below(1), 0u);
  EXPECT_LT(gen.below(1ULL << 40), 1ULL << 40);
}

TEST(Philox, ShuffleIsPermutation) {
  Philox4x32 gen(9);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i)
    v[i] = i;
  gen.shuffle(std::span<int>(v));
  std::set<int> s(v.begin(), v.end());
  EXPECT_EQ(s.size(), 50u);
  EXPECT_EQ(*s.begin(), 0);
  EXPECT_EQ(*s.rbegin(), 49);
}

TEST(DeriveSeed, DistinctCoordinates) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 10; ++a)
    for (std::uint64_t b = 0; b < 10; ++b)
      for (std::uint64_t c = 0; c < 10; ++c)
        seen.insert(netflux::derive_seed(1, a, b, c));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(netflux::derive_seed(1, 2, 3), netflux::derive_seed(2, 2, 3));
  static_assert(netflux::derive_seed(1, 2, 3, 4) == netflux::derive_seed(1, 2, 3, 4));
}
