#include <gtest/gtest.h>

#include <cmath>

#include "ipress/error.hpp"
#include "ipress/numeric.hpp"
#include "ipress/pressure.hpp"
#include "ipress/properties.hpp"
#include "oracles.hpp"

using namespace ipress;

TEST(PseudoInverse, FullShiftEntropy) {
  for (std::size_t n : {2u, 3u, 7u}) {
    const auto t = truncate_all(ShiftSpec::full(n));
    const auto r = pseudo_inverse_pressure(t, Potential::zero(), Potential::constant(1.0), WordCollection::all());
    EXPECT_NEAR(r.value, std::log(double(n)), 1e-9);
    EXPECT_LE(r.lower, r.value);
    EXPECT_GE(r.upper, r.value);
    EXPECT_EQ(r.method, Method::PseudoInverse);
  }
}

TEST(PseudoInverse, RandomFixturesAgainstDenseOracle) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto fx = random_fixture(seed, 5, true);
    const auto r = pseudo_inverse_pressure(fx.trunc, fx.phi, fx.psi, WordCollection::all());
    const double want = oracle::dense_pseudo_inverse(fx.matrix, fx.phi_values, fx.psi_values);
    EXPECT_NEAR(r.value, want, 1e-9) << seed;
  }
}

TEST(PseudoInverse, HarmonicSeriesFamily) {
  // phi = -beta log|F'| with psi = 1 on the renewal shift: loops at 1 solve
  // sum_k (k(k+1))^-beta e^-tk = 1.
  const auto spec = ShiftSpec::renewal();
  const auto trunc = truncate_prefix(spec, 1500);
  for (double beta : {0.25, 0.5, 0.75}) {
    const auto phi = combine(Potential::zero(), Potential::alpha_farey_geometric(), {0.0, -beta});
    const auto r = pseudo_inverse_pressure(trunc, phi, Potential::constant(1.0), WordCollection::periodic_at(1));
    const auto o = oracle::harmonic_series_root(beta);
    EXPECT_GE(r.value, o.lower - 1e-8) << beta;
    EXPECT_LE(r.value, o.upper + 1e-8) << beta;
  }
}

TEST(PseudoInverse, RejectsNonPositivePsi) {
  const auto t = truncate_all(ShiftSpec::full(2));
  EXPECT_THROW(pseudo_inverse_pressure(t, Potential::zero(), Potential::zero(), WordCollection::all()),
               PreconditionError);
}

TEST(PseudoInverse, CollectionWithoutCyclesIsMinusInfinity) {
  const auto spec = ShiftSpec::from_matrix({{0, 1}, {0, 1}});
  const auto r = pseudo_inverse_pressure(truncate_all(spec), Potential::zero(), Potential::constant(1.0),
                                         WordCollection::periodic_at(1));
  EXPECT_EQ(r.value, -kInf);
}

TEST(Window, AgreesWithPseudoInverseOnFiniteIrreducibleShifts) {
  for (std::uint64_t seed : {3u, 8u, 21u}) {
    const auto fx = random_fixture(seed, 4, true);
    const auto pseudo = pseudo_inverse_pressure(fx.trunc, fx.phi, fx.psi, WordCollection::all());
    const double t_max = 16.0;
    const auto r = critical_exponent(fx.spec, fx.phi, fx.psi, WordCollection::all(), fx.trunc, 1.0, t_max, 64);
    EXPECT_NEAR(r.value, pseudo.value, 10.0 / t_max + 1e-6) << seed;
  }
}

TEST(Window, EtaIndependence) {
  const auto fx = random_fixture(5, 3, true);
  std::vector<double> values;
  for (double eta : {0.5, 1.0, 2.0}) {
    const auto r = critical_exponent(fx.spec, fx.phi, fx.psi, WordCollection::all(), fx.trunc, eta, 16.0, 64);
    values.push_back(r.value);
  }
  // Each estimate is within 10 / T_max of the limit.
  const double tol = 2.0 * (10.0 / 16.0 + 1e-6);
  EXPECT_NEAR(values[0], values[1], tol);
  EXPECT_NEAR(values[1], values[2], tol);
}

TEST(Window, RenewalDivergenceCarriesAWitness) {
  const auto spec = ShiftSpec::renewal();
  WindowOptions opt;
  opt.t_grid = {1.0, 2.0};
  const auto r = estimate_pressure_window(spec, Potential::zero(), Potential::alpha_farey_geometric(),
                                          WordCollection::all(), truncate_prefix(spec, 64), opt);
  EXPECT_EQ(r.value, kInf);
  ASSERT_TRUE(r.certificate.has_value());
  const auto& c = *r.certificate;
  EXPECT_GT(c.witness.length(), 0u);
  ASSERT_GE(c.log_sums.size(), 2u);
  for (std::size_t i = 1; i < c.log_sums.size(); ++i) EXPECT_GT(c.log_sums[i], c.log_sums[i - 1]);
  // The witness lies in the window.
  double s = 0.0;
  const auto psi = Potential::alpha_farey_geometric();
  for (Symbol x : c.witness.symbols) s += psi.at(x);
  EXPECT_GT(s, c.window_upper - c.eta);
  EXPECT_LE(s, c.window_upper);
}

TEST(Exhaustion, MonotoneLowerBounds) {
  const auto spec = ShiftSpec::renewal();
  std::vector<std::vector<Symbol>> sets;
  for (std::size_t n : {5u, 10u, 20u, 40u, 80u}) sets.push_back(spec.first_symbols(n));
  const auto r = exhaustion_sequence(spec, Potential::zero(), Potential::constant(1.0), WordCollection::all(), sets);
  ASSERT_EQ(r.sequence.size(), sets.size());
  for (std::size_t i = 1; i < r.sequence.size(); ++i) EXPECT_GE(r.sequence[i], r.sequence[i - 1] - 1e-12);
  EXPECT_LT(r.value, std::log(2.0));
  EXPECT_GT(r.value, std::log(2.0) - 1e-6);
  EXPECT_EQ(r.upper, kInf);
}

TEST(Variational, ResidualVanishesAtTheRoot) {
  for (std::uint64_t seed = 40; seed < 45; ++seed) {
    const auto fx = random_fixture(seed, 5, true);
    const auto r = pseudo_inverse_pressure(fx.trunc, fx.phi, fx.psi, WordCollection::all());
    const auto v = variational_check(fx.trunc, fx.phi, fx.psi, r.value);
    EXPECT_NEAR(v.residual, 0.0, 1e-8) << seed;
    EXPECT_GE(v.entropy, -1e-12);
  }
}
