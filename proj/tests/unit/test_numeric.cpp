#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ipress/numeric.hpp"

using namespace ipress;

TEST(CompensatedSum, RecoversSmallTermsNextToLargeOnes) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000.0);
}

TEST(LogSumExp, MatchesDirectSumAndHandlesExtremes) {
  LogSumExp acc;
  EXPECT_TRUE(acc.empty());
  EXPECT_EQ(acc.value(), -kInf);
  double direct = 0.0;
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double x = d(rng);
    acc.add(x);
    direct += std::exp(x);
  }
  EXPECT_NEAR(acc.value(), std::log(direct), 1e-13);

  LogSumExp big;
  big.add(1000.0);
  big.add(1000.0);
  EXPECT_NEAR(big.value(), 1000.0 + std::log(2.0), 1e-12);
  big.add(-kInf);
  EXPECT_NEAR(big.value(), 1000.0 + std::log(2.0), 1e-12);
  big.add(kInf);
  EXPECT_EQ(big.value(), kInf);
}

TEST(FindThreshold, LocatesRootOfDecreasingFunction) {
  ThresholdOptions opt;
  opt.tolerance = 1e-12;
  const auto r = find_threshold([](double x) { return std::log(2.0) - x; }, opt);
  ASSERT_EQ(r.status, ThresholdSearch::Status::Found);
  EXPECT_NEAR(r.value, std::log(2.0), 1e-12);
  EXPECT_LE(r.lower, r.value);
  EXPECT_GE(r.upper, r.value);
}

TEST(FindThreshold, ExpandsFarBrackets) {
  ThresholdOptions opt;
  opt.radius = 0.5;
  const auto r = find_threshold([](double x) { return 12345.0 - x; }, opt);
  ASSERT_EQ(r.status, ThresholdSearch::Status::Found);
  EXPECT_NEAR(r.value, 12345.0, 1e-6);
  EXPECT_GT(r.expansions, 0);
}

TEST(FindThreshold, InfiniteValuesAndJumps) {
  // +inf left of 1, finite and decreasing after: threshold at the jump if
  // the function is already negative there.
  const auto jump = find_threshold([](double x) { return x < 1.0 ? kInf : -1.0; }, {});
  ASSERT_EQ(jump.status, ThresholdSearch::Status::Found);
  EXPECT_NEAR(jump.value, 1.0, 1e-9);

  ThresholdOptions small;
  small.max_expansions = 5;
  EXPECT_EQ(find_threshold([](double) { return 1.0; }, small).status, ThresholdSearch::Status::AlwaysPositive);
  EXPECT_EQ(find_threshold([](double) { return -1.0; }, small).status, ThresholdSearch::Status::NeverPositive);
}

TEST(FormatExtended, Infinities) {
  EXPECT_EQ(format_extended(kInf), "+inf");
  EXPECT_EQ(format_extended(-kInf), "-inf");
  EXPECT_EQ(std::stod(format_extended(0.1)), 0.1);
}
