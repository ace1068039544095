#include <gtest/gtest.h>

#include <cmath>

#include "ipress/error.hpp"
#include "ipress/flows.hpp"
#include "ipress/properties.hpp"
#include "oracles.hpp"

using namespace ipress;

TEST(Savchenko, ConstantRoofs) {
  const auto base = ShiftSpec::full(2);
  const auto t = truncate_all(base);
  EXPECT_NEAR(savchenko_entropy(base, Potential::constant(1.0), t).value, std::log(2.0), 1e-10);
  EXPECT_NEAR(savchenko_entropy(base, Potential::constant(2.0), t).value, std::log(2.0) / 2.0, 1e-10);
}

TEST(Savchenko, RandomRoofsAgainstDenseOracleAndScaling) {
  for (std::uint64_t seed = 300; seed < 306; ++seed) {
    const auto fx = random_fixture(seed, 4, true);
    const double h = savchenko_entropy(fx.spec, fx.psi, fx.trunc).value;
    const double want = oracle::dense_pseudo_inverse(fx.matrix, std::vector<double>(4, 0.0), fx.psi_values);
    EXPECT_NEAR(h, want, 1e-9) << seed;
    std::vector<double> scaled = fx.psi_values;
    for (double& v : scaled) v *= 3.0;
    const double h3 = savchenko_entropy(fx.spec, symbol_potential(scaled, "3 tau", true), fx.trunc).value;
    EXPECT_NEAR(h3, h / 3.0, 1e-9) << seed;
  }
}

TEST(FlowPressure, ConstantFiberShift) {
  for (std::uint64_t seed = 400; seed < 404; ++seed) {
    const auto fx = random_fixture(seed, 4, true);
    const FlowSpec zero{fx.spec, fx.psi, Potential::zero()};
    const double p0 = flow_pressure(zero, fx.trunc).value;
    for (double c : {-0.7, 0.4}) {
      // g = c contributes c tau over each fiber.
      const FlowSpec shifted{fx.spec, fx.psi, combine(Potential::zero(), fx.psi, {0.0, c})};
      EXPECT_NEAR(flow_pressure(shifted, fx.trunc).value, c + p0, 1e-9) << seed;
    }
  }
}

TEST(FlowPressure, RoofMustBePositive) {
  const auto base = ShiftSpec::full(2);
  const FlowSpec bad{base, Potential::zero(), Potential::zero()};
  EXPECT_THROW(flow_pressure(bad, truncate_all(base)), PreconditionError);
}

TEST(FlowPressure, ReducibleBaseTakesTheMaximum) {
  // Two disjoint loops: 1 -> 1 and 2 <-> 3.
  const auto spec = ShiftSpec::from_matrix({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  const auto tau = Potential::from_table(1, {{{1}, 1.0}, {{2}, 0.5}, {{3}, 0.5}}, SignFlags{true, true, 0.5});
  const auto g = Potential::from_table(1, {{{1}, 0.3}, {{2}, 0.0}, {{3}, 0.0}});
  const FlowSpec flow{spec, tau, g};
  // At 1: root of exp(0.3 - b) = 1; at 2: exp(-b) = 1.
  EXPECT_NEAR(flow_pressure(flow, truncate_all(spec)).value, 0.3, 1e-9);
}
