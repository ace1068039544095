#include <gtest/gtest.h>

#include "ipress/properties.hpp"

using namespace ipress;

TEST(RandomFixture, DeterministicAndWellFormed) {
  const auto a = random_fixture(5, 6);
  const auto b = random_fixture(5, 6);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_EQ(a.phi_values, b.phi_values);
  for (const auto& row : a.matrix) {
    int s = 0;
    for (int x : row) s += x;
    EXPECT_GT(s, 0);
  }
  for (double v : a.psi_values) {
    EXPECT_GE(v, 0.5);
    EXPECT_LE(v, 2.0);
  }
}

TEST(PropertySuite, HoldsOnRandomFixtures) {
  std::vector<std::vector<PropertyOutcome>> runs;
  for (std::uint64_t seed = 0; seed < 10; ++seed) runs.push_back(run_property_suite(random_fixture(seed)));
  const auto merged = merge_outcomes(runs);
  EXPECT_GE(merged.size(), 10u);
  for (const auto& o : merged) {
    EXPECT_TRUE(o.passed) << o.name << ": " << o.detail;
    EXPECT_GT(o.checks, 0u) << o.name;
  }
}

TEST(PropertySuite, ReportsViolationsAtAbsurdTolerance) {
  // A negative tolerance turns every equality check into a failure, which
  // shows the recorder is not vacuous.
  const auto outcomes = run_property_suite(random_fixture(1), -1.0);
  bool any_failed = false;
  for (const auto& o : outcomes) any_failed = any_failed || !o.passed;
  EXPECT_TRUE(any_failed);
}
