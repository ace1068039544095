#include <gtest/gtest.h>

#include <cmath>

#include "ipress/error.hpp"
#include "ipress/potential.hpp"

using namespace ipress;

TEST(Potential, AlphaFareyValues) {
  const auto p = Potential::alpha_farey_geometric();
  EXPECT_DOUBLE_EQ(p.at(1), std::log(2.0));
  EXPECT_DOUBLE_EQ(p.at(2), std::log(3.0));
  EXPECT_DOUBLE_EQ(p.at(10), std::log(11.0 / 9.0));
  EXPECT_TRUE(p.flags().strictly_positive);
}

TEST(Potential, TableRejectsMissingTuplesAndSignViolations) {
  const auto t = Potential::from_table(1, {{{1}, 0.5}, {{2}, 1.5}});
  EXPECT_DOUBLE_EQ(t.at(2), 1.5);
  EXPECT_THROW(t.at(3), DomainError);
  SignFlags pos;
  pos.strictly_positive = true;
  const auto bad = Potential::from_table(1, {{{1}, -0.5}}, pos);
  EXPECT_THROW(bad.at(1), PreconditionError);
}

TEST(BirkhoffSum, TelescopesForGeometricPotentialOnRenewalLoops) {
  // Along 1 k k-1 ... 2 the geometric potential sums to log(k(k+1)).
  const auto spec = ShiftSpec::renewal();
  const auto p = Potential::alpha_farey_geometric();
  for (Symbol k = 2; k <= 40; ++k) {
    std::vector<Symbol> w{1};
    for (Symbol s = k; s >= 2; --s) w.push_back(s);
    const auto b = birkhoff_sum(p, spec, w, BoundaryMode::Exact);
    EXPECT_NEAR(b.value, std::log(double(k) * double(k + 1)), 1e-12) << k;
  }
}

TEST(BirkhoffSum, BoundaryModesForDepthTwo) {
  const auto spec = ShiftSpec::full(2);
  const auto trunc = truncate_all(spec);
  // p(a, b) = a * b
  const auto p = Potential::from_table(2, {{{1, 1}, 1.0}, {{1, 2}, 2.0}, {{2, 1}, 2.0}, {{2, 2}, 4.0}});
  const std::vector<Symbol> w{1, 2};
  EXPECT_THROW(birkhoff_sum(p, spec, w, BoundaryMode::Exact, {}, &trunc), ModeError);
  EXPECT_DOUBLE_EQ(birkhoff_sum(p, spec, w, BoundaryMode::Sup, {}, &trunc).value, 2.0 + 4.0);
  EXPECT_DOUBLE_EQ(birkhoff_sum(p, spec, w, BoundaryMode::Inf, {}, &trunc).value, 2.0 + 2.0);
  const std::vector<Symbol> next{1};
  const auto exact = birkhoff_sum(p, spec, w, BoundaryMode::Sup, next, &trunc);
  EXPECT_EQ(exact.boundary, BoundaryMode::Exact);
  EXPECT_DOUBLE_EQ(exact.value, 4.0);
}

TEST(Potential, CoboundarySumsTelescope) {
  const auto spec = ShiftSpec::full(3);
  const auto h = Potential::from_table(1, {{{1}, 0.3}, {{2}, -1.1}, {{3}, 2.0}});
  const auto g = Potential::coboundary(h);
  EXPECT_EQ(g.depth(), 2u);
  // Closed orbit: the sum over a periodic word with its continuation is 0.
  const std::vector<Symbol> w{1, 3, 2, 2};
  const auto b = birkhoff_sum(g, spec, w, BoundaryMode::Exact, std::vector<Symbol>{1});
  EXPECT_NEAR(b.value, 0.0, 1e-14);
}

TEST(Potential, CombineKeepsOnlyJustifiedFlags) {
  const auto one = Potential::constant(1.0);
  const auto af = Potential::alpha_farey_geometric();
  const auto sum = combine(one, af, {1.0, 2.0});
  EXPECT_TRUE(sum.flags().strictly_positive);
  EXPECT_NEAR(sum.at(1), 1.0 + 2.0 * std::log(2.0), 1e-15);
  const auto diff = combine(one, af, {1.0, -1.0});
  EXPECT_FALSE(diff.flags().nonnegative);
  EXPECT_EQ(combine(one, Potential::constant(2.0), {0.5, 1.0}).constant_value(), 2.5);
}
