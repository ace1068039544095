#include <gtest/gtest.h>

#include <set>

#include "ipress/error.hpp"
#include "ipress/shift.hpp"
#include "oracles.hpp"

using namespace ipress;

namespace {

const std::vector<std::vector<int>> kGoldenMean = {{1, 1}, {1, 0}};

}  // namespace

TEST(ShiftSpec, FullShiftAndRenewalIncidence) {
  const auto full = ShiftSpec::full(3);
  EXPECT_TRUE(full.is_finite());
  EXPECT_EQ(full.symbols(), (std::vector<Symbol>{1, 2, 3}));
  EXPECT_TRUE(full.incidence(3, 1));
  EXPECT_THROW(full.incidence(4, 1), DomainError);

  const auto r = ShiftSpec::renewal();
  EXPECT_FALSE(r.is_finite());
  EXPECT_TRUE(r.incidence(1, 1));
  EXPECT_TRUE(r.incidence(1, 7));
  EXPECT_TRUE(r.incidence(7, 6));
  EXPECT_FALSE(r.incidence(7, 5));
  EXPECT_FALSE(r.incidence(2, 2));
  EXPECT_EQ(r.first_symbols(3), (std::vector<Symbol>{1, 2, 3}));
}

TEST(ShiftSpec, MatrixValidation) {
  EXPECT_THROW(ShiftSpec::from_matrix({{1, 1}, {1}}), DomainError);
  EXPECT_THROW(ShiftSpec::from_matrix({{1, 2}, {1, 0}}), DomainError);
  const auto gm = ShiftSpec::from_matrix(kGoldenMean);
  EXPECT_FALSE(gm.incidence(2, 2));
}

TEST(Truncation, PrefixKeepsInducedEdges) {
  const auto t = truncate_prefix(ShiftSpec::renewal(), 5);
  EXPECT_EQ(t.size(), 5u);
  const auto m = incidence_matrix(t);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      const bool expect = i == 0 || j + 1 == i;
      EXPECT_EQ(m[i][j] == 1, expect) << i << "," << j;
    }
  }
  EXPECT_EQ(t.edge_count(), 5u + 4u);
  EXPECT_TRUE(t.retains(5));
  EXPECT_FALSE(t.retains(6));
}

TEST(Truncation, ArbitraryRetainedSet) {
  const auto t = truncate(ShiftSpec::renewal(), {4, 1, 3, 3});
  EXPECT_EQ(t.retained(), (std::vector<Symbol>{1, 3, 4}));
  EXPECT_TRUE(t.edge(*t.index_of(4), *t.index_of(3)));
  EXPECT_FALSE(t.edge(*t.index_of(3), *t.index_of(1)));
}

TEST(Words, EnumerationMatchesBruteForce) {
  const auto spec = ShiftSpec::from_matrix(kGoldenMean);
  const auto t = truncate_all(spec);
  const auto all = collect_words(t, WordCollection::all(), 8);
  std::size_t expected = 0;
  for (std::size_t n = 1; n <= 8; ++n) expected += oracle::words(kGoldenMean, n).size();
  EXPECT_EQ(all.size(), expected);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_TRUE(all[i - 1] < all[i]);
}

TEST(Words, PeriodicCollectionsUseTheClosingEdge) {
  const auto spec = ShiftSpec::from_matrix(kGoldenMean);
  const auto t = truncate_all(spec);
  // Periodic words of length n number the trace of A^n (Lucas numbers).
  const std::vector<std::size_t> lucas = {1, 3, 4, 7, 11, 18, 29};
  for (std::size_t n = 1; n <= lucas.size(); ++n) {
    std::size_t count = 0;
    enumerate_words(t, WordCollection::periodic(), n, [&](std::span<const Symbol> w) {
      if (w.size() == n) ++count;
    });
    EXPECT_EQ(count, lucas[n - 1]) << n;
  }
  for (const auto& w : collect_words(t, WordCollection::periodic_at(2), 6)) {
    EXPECT_EQ(w.symbols.front(), 2u);
    EXPECT_TRUE(spec.incidence(w.symbols.back(), 2));
  }
  EXPECT_THROW(collect_words(t, WordCollection::all(), 0), DomainError);
}

TEST(Words, BridgesStartAndEndInTheGivenSets) {
  const auto spec = ShiftSpec::full(3);
  const auto t = truncate_all(spec);
  const auto c = WordCollection::bridges({1}, {2, 3});
  for (const auto& w : collect_words(t, c, 4)) {
    EXPECT_EQ(w.symbols.front(), 1u);
    EXPECT_NE(w.symbols.back(), 1u);
  }
  // 3^(n-2) * 2 bridges of length n >= 2, none of length 1.
  EXPECT_EQ(collect_words(t, c, 4).size(), 2u + 6u + 18u);
  EXPECT_FALSE(c.contains(spec, std::vector<Symbol>{2, 1}));
}

TEST(Admissibility, Words) {
  const auto r = ShiftSpec::renewal();
  EXPECT_TRUE(is_admissible(r, std::vector<Symbol>{1, 4, 3, 2, 1}));
  EXPECT_FALSE(is_admissible(r, std::vector<Symbol>{1, 4, 2}));
}
