#include <gtest/gtest.h>

#include <cmath>

#include "ipress/error.hpp"
#include "ipress/group.hpp"
#include "oracles.hpp"

using namespace ipress;
using oracle::Big;

namespace {

// Closed walks of length n on the 2k-regular tree, by distance from the root.
std::vector<Big> tree_returns(std::size_t k, std::size_t n_max) {
  std::vector<Big> dist(n_max + 2, 0), next(n_max + 2, 0), out(n_max + 1, 0);
  dist[0] = 1;
  out[0] = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t d = 0; d <= n_max; ++d) {
      if (dist[d] == 0) continue;
      if (d == 0) {
        next[1] += dist[0] * (2 * k);
      } else {
        next[d - 1] += dist[d];
        next[d + 1] += dist[d] * (2 * k - 1);
      }
    }
    dist.swap(next);
    out[n] = dist[0];
  }
  return out;
}

// Z/2 x Z/2 with elements 0 = e, 1 = a, 2 = b, 3 = ab.
GroupModel klein() { return GroupModel::finite_table({{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}); }

// Brute force over letter sequences for a finite table group.
std::vector<Big> brute_returns(const ExtensionShift& ext, std::size_t n_max) {
  const auto& g = ext.group;
  const std::size_t letters = g.letter_count();
  std::vector<Big> out(n_max + 1, 0);
  out[0] = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<std::size_t> seq(n, 0);
    while (true) {
      bool ok = true;
      for (std::size_t i = 1; i < n && ok; ++i) {
        if (ext.variant == ExtensionVariant::NoBacktrack && seq[i] == g.inverse_letter(seq[i - 1])) ok = false;
      }
      if (ok) {
        auto h = g.identity();
        for (std::size_t l : seq) h = g.multiply(h, g.letter(l));
        if (h == g.identity()) out[n] += 1;
      }
      std::size_t i = 0;
      while (i < n && ++seq[i] == letters) seq[i++] = 0;
      if (i == n) break;
    }
  }
  return out;
}

}  // namespace

TEST(Counting, IntegersMatchCentralBinomials) {
  const ExtensionShift z(GroupModel::z_power(1), ExtensionVariant::Plain);
  const auto closed = return_counts(z, 128);
  const auto first = count_first_returns(z, 64);
  for (unsigned n = 0; n <= 64; ++n) {
    EXPECT_EQ(closed[2 * n], oracle::binomial(2 * n, n)) << n;
    if (n < 64) EXPECT_EQ(closed[2 * n + 1], 0) << n;
  }
  EXPECT_EQ(first[0], 0);
  for (unsigned n = 1; n <= 32; ++n) {
    EXPECT_EQ(first[2 * n], 2 * oracle::binomial(2 * n - 2, n - 1) / n) << n;
    EXPECT_EQ(first[2 * n], 2 * oracle::catalan(n - 1)) << n;
    EXPECT_EQ(first[2 * n - 1], 0);
  }
}

TEST(Counting, FastPathsAgreeWithDirectDp) {
  CountOptions slow;
  slow.use_fast_paths = false;
  for (const auto& g : {GroupModel::z_power(1), GroupModel::z_power(2), GroupModel::free_group(2)}) {
    const ExtensionShift ext(g, ExtensionVariant::Plain);
    EXPECT_EQ(return_counts(ext, 12), return_counts(ext, 12, slow)) << g.describe();
    EXPECT_EQ(count_first_returns(ext, 12), count_first_returns(ext, 12, slow)) << g.describe();
  }
}

TEST(Counting, SquareLatticeAndFreeGroup) {
  const ExtensionShift z2(GroupModel::z_power(2), ExtensionVariant::Plain);
  const auto c2 = return_counts(z2, 20);
  for (unsigned n = 0; n <= 10; ++n) EXPECT_EQ(c2[2 * n], oracle::binomial(2 * n, n) * oracle::binomial(2 * n, n));

  const ExtensionShift f2(GroupModel::free_group(2), ExtensionVariant::Plain);
  EXPECT_EQ(count_paths(f2, 2, PathConstraint::ReturnToId), 4);
  EXPECT_EQ(return_counts(f2, 200), tree_returns(2, 200));
  EXPECT_EQ(count_paths(f2, 5, PathConstraint::All), 1024);
}

TEST(Counting, FiniteGroupsAgainstBruteForce) {
  const ExtensionShift plain(klein(), ExtensionVariant::Plain);
  const ExtensionShift nb(klein(), ExtensionVariant::NoBacktrack);
  EXPECT_EQ(return_counts(plain, 6), brute_returns(plain, 6));
  EXPECT_EQ(return_counts(nb, 6), brute_returns(nb, 6));

  // Z/3 with one generator: (2^n + 2 (-1)^n) / 3 closed walks.
  const auto z3 = GroupModel::finite_table_from_text("e g h\ne g h\ng h e\nh e g\n");
  EXPECT_EQ(z3.generator_count(), 1u);
  const auto c = return_counts(ExtensionShift(z3, ExtensionVariant::Plain), 30);
  for (unsigned n = 0; n <= 30; ++n) {
    const Big want = (Big(1) << n) + (n % 2 ? -2 : 2);
    EXPECT_EQ(c[n], want / 3) << n;
  }
}

TEST(Counting, PreconditionsAndTableValidation) {
  EXPECT_THROW(ExtensionShift(GroupModel::free_group(2), ExtensionVariant::NoBacktrack), PreconditionError);
  EXPECT_THROW(GroupModel::finite_table({{0, 1}, {1, 1}}), DomainError);
  EXPECT_THROW(GroupModel::finite_table_from_text("e a\ne a\n"), DomainError);
  const ExtensionShift z(GroupModel::z_power(1), ExtensionVariant::Plain);
  EXPECT_THROW(count_paths(z, 0, PathConstraint::All), DomainError);
}

TEST(Gap, AmenableAndNonamenableVerdicts) {
  const auto z = pressure_gap(ExtensionShift(GroupModel::z_power(1), ExtensionVariant::Plain), 2000);
  EXPECT_LE(z.gap, 0.01);
  EXPECT_EQ(z.verdict, GapReport::Verdict::AmenableConsistent);

  const auto f = pressure_gap(ExtensionShift(GroupModel::free_group(2), ExtensionVariant::Plain), 1000);
  // Kesten: closed walks on the 4-regular tree grow like (2 sqrt 3)^n.
  EXPECT_NEAR(f.estimate, std::log(2.0 * std::sqrt(3.0)), 0.02);
  EXPECT_EQ(f.verdict, GapReport::Verdict::NonamenableConsistent);

  const auto short_run = pressure_gap(ExtensionShift(GroupModel::z_power(1), ExtensionVariant::Plain), 8);
  EXPECT_EQ(short_run.verdict, GapReport::Verdict::Inconclusive);
  EXPECT_THROW(pressure_gap(ExtensionShift(GroupModel::z_power(1), ExtensionVariant::Plain), 6), DomainError);
}

TEST(ExtensionShiftSpec, BridgeLoopsAreFirstReturns) {
  const ExtensionShift z(GroupModel::z_power(1), ExtensionVariant::Plain);
  const auto es = extension_shift_spec(z);
  const auto trunc = truncate_prefix(es.spec, 24);
  const auto inv = enumerate_simple_loops(es.spec, WordCollection::bridges(es.start, es.terminal), trunc, 8);
  const auto first = count_first_returns(z, 8);
  for (std::size_t n = 1; n <= 8; ++n) {
    EXPECT_EQ(Big(inv.counts()[n]), first[n]) << n;
  }
  for (std::size_t i = 0; i < inv.loop_count(); ++i) {
    auto h = z.group.identity();
    for (Symbol s : inv.expand(i).symbols) h = z.group.multiply(h, z.group.letter(es.letter_of(s)));
    EXPECT_EQ(h, z.group.identity());
  }
}

TEST(BridgeInventory, LoopRouteIsMonotoneInTheCap) {
  const ExtensionShift z(GroupModel::z_power(1), ExtensionVariant::Plain);
  double previous = -kInf;
  for (std::size_t cap : {100u, 1000u}) {
    const auto r = loop_pressure(bridge_inventory(z, cap), Potential::zero(), Potential::constant(1.0));
    EXPECT_GT(r.value, previous);
    EXPECT_LE(r.value, std::log(2.0));
    previous = r.value;
  }
}

TEST(Irreducibility, FiniteExtensions) {
  const auto rep = check_finite_irreducibility(ExtensionShift(klein(), ExtensionVariant::Plain));
  EXPECT_TRUE(rep.finite_state_space);
  EXPECT_TRUE(rep.finitely_irreducible);
  EXPECT_EQ(rep.reachable_states, 4u * 6u);
}
