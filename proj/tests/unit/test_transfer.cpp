#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ipress/numeric.hpp"
#include "ipress/properties.hpp"
#include "ipress/transfer.hpp"
#include "oracles.hpp"

using namespace ipress;

TEST(Components, ReducibleMatrix) {
  // 1 <-> 2 ; 2 -> 3 ; 3 -> 3 ; 4 -> 1, 4 has no cycle.
  const auto spec = ShiftSpec::from_matrix({{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}});
  const TransferGraph g(truncate_all(spec), 1);
  const auto c = strongly_connected_components(g);
  ASSERT_EQ(c.members.size(), 3u);
  std::size_t nontrivial = 0;
  for (bool b : c.nontrivial) nontrivial += b;
  EXPECT_EQ(nontrivial, 2u);
  EXPECT_EQ(c.component_of[0], c.component_of[1]);
  EXPECT_NE(c.component_of[0], c.component_of[2]);

  const auto at3 = relevant_components(g, c, WordCollection::periodic_at(3));
  ASSERT_EQ(at3.size(), 1u);
  EXPECT_EQ(at3[0], c.component_of[2]);
  EXPECT_EQ(relevant_components(g, c, WordCollection::periodic_at(4)).size(), 0u);
  EXPECT_EQ(relevant_components(g, c, WordCollection::starting_in({3})).size(), 1u);
  EXPECT_EQ(relevant_components(g, c, WordCollection::starting_in({4})).size(), 2u);
}

TEST(SpectralRadius, RandomMatricesAgainstDenseEigensolver) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto fx = random_fixture(seed, 6);
    const double got = finite_pressure(fx.trunc, fx.phi);
    std::vector<double> zero(6, 0.0);
    const double want = std::log(oracle::spectral_radius(oracle::weighted(fx.matrix, fx.phi_values, zero, 0.0)));
    EXPECT_NEAR(got, want, 1e-11) << seed;
  }
}

TEST(SpectralRadius, DepthTwoGraphOnTuples) {
  const auto spec = ShiftSpec::full(2);
  const auto p = Potential::from_table(2, {{{1, 1}, 0.0}, {{1, 2}, 1.0}, {{2, 1}, 1.0}, {{2, 2}, 0.0}});
  // Matrix [[1, e], [e, 1]] on symbols: radius 1 + e.
  EXPECT_NEAR(finite_pressure(truncate_all(spec), p), std::log(1.0 + std::exp(1.0)), 1e-12);
  const TransferGraph g(truncate_all(spec), 3);
  EXPECT_EQ(g.size(), 4u);
}

TEST(SpectralRadius, PeriodicBlock) {
  // Pure 3-cycle: eigenvalues are cube roots of the cycle weight.
  const auto spec = ShiftSpec::from_matrix({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  const auto p = Potential::from_table(1, {{{1}, 0.2}, {{2}, 0.7}, {{3}, -0.3}});
  EXPECT_NEAR(finite_pressure(truncate_all(spec), p), (0.2 + 0.7 - 0.3) / 3.0, 1e-12);
}

TEST(SpectralRadius, BadlyScaledRenewalTruncation) {
  // Renewal shift on 1..N with weights exp(-s - b log((s+1)/(s-1))) at very
  // negative b: the Perron vector spans thousands of orders of magnitude.
  // Oracle: the loops at 1 have weight w_k, and rho solves
  // sum_k w_k rho^-k = 1, located by bisection in log space.
  const std::size_t n = 60;
  const double b = -400.0;
  auto weight = [&](Symbol s) {
    const double psi = s == 1 ? std::log(2.0) : std::log((s + 1.0) / (s - 1.0));
    return -static_cast<double>(s) - b * psi;
  };
  const auto trunc = truncate_prefix(ShiftSpec::renewal(), n);
  std::vector<std::pair<std::vector<Symbol>, double>> rows;
  for (Symbol s = 1; s <= n; ++s) rows.push_back({{s}, weight(s)});
  const auto p = Potential::from_table(1, rows);
  std::vector<double> loop(n + 1, 0.0);
  double acc = 0.0;
  for (Symbol k = 1; k <= n; ++k) {
    acc += weight(k);
    loop[k] = acc;  // the loop 1 k k-1 ... 2 visits every symbol up to k once
  }
  auto f = [&](double lr) {
    LogSumExp s;
    for (std::size_t k = 1; k <= n; ++k) s.add(loop[k] - static_cast<double>(k) * lr);
    return s.value();
  };
  const double want = oracle::bisect(f, -1e5, 1e5, 300);
  const double got = finite_pressure(trunc, p);
  EXPECT_NEAR(got, want, 1e-9 * std::abs(want));
}

TEST(PerronVectors, EigenEquations) {
  const auto fx = random_fixture(17, 5, true);
  const TransferGraph g(fx.trunc, 1);
  const auto w = g.edge_values(fx.phi);
  const auto c = strongly_connected_components(g);
  const auto pv = perron_vectors(g, w, c, 0);
  const double lambda = std::exp(pv.log_radius);
  const auto m = oracle::weighted(fx.matrix, fx.phi_values, std::vector<double>(5, 0.0), 0.0);
  Eigen::VectorXd r(5), l(5);
  for (std::size_t i = 0; i < 5; ++i) {
    r(pv.states[i]) = pv.right[i];
    l(pv.states[i]) = pv.left[i];
  }
  EXPECT_NEAR(l.sum(), 1.0, 1e-12);
  EXPECT_LT((m * r - lambda * r).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((m.transpose() * l - lambda * l).cwiseAbs().maxCoeff(), 1e-10);
}
