#include <gtest/gtest.h>

#include <random>
#include <set>

#include "udcoh/anderson.hpp"

using namespace udcoh;

namespace {

std::vector<OrderIdeal> all_ideals(std::size_t s) {
  // every antichain of subsets of S, for small s
  std::vector<OrderIdeal> out;
  const Subset full = full_subset(s);
  const std::size_t n = std::size_t{1} << (full + 1);
  std::set<std::vector<Subset>> seen;
  for (std::size_t mask = 0; mask < n; ++mask) {
    std::vector<Subset> sets;
    for (Subset t = 0; t <= full; ++t)
      if ((mask >> t) & 1u) sets.push_back(t);
    auto ideal = OrderIdeal::from_maximal(sets);
    if (seen.insert(ideal.maximal_sets()).second) out.push_back(ideal);
  }
  return out;
}

std::set<LSymbol> symbol_set(const LComplex& l) {
  std::set<LSymbol> out;
  for (int p = -l.s(); p <= 0; ++p) out.insert(l.symbols(p).begin(), l.symbols(p).end());
  return out;
}

}  // namespace

TEST(BuildL, Examples) {
  auto l3 = build_L(make_config({3}, 2));
  EXPECT_EQ(l3.dim(-1), 1u);
  EXPECT_EQ(l3.dim(0), 3u);
  EXPECT_EQ(l3.d(-1), ExactMatrix::from_rows({{0}, {-1}, {-1}}));
  auto l21 = build_L(make_config({3, 7}, 2));
  EXPECT_EQ(l21.dim(-2), 1u);
  EXPECT_EQ(l21.dim(-1), 10u);
  EXPECT_EQ(l21.dim(0), 21u);
  auto trivial = build_L(make_config({3, 7}, 2), OrderIdeal::from_maximal({0}));
  EXPECT_EQ(trivial.dim(0), 1u);
  EXPECT_EQ(trivial.dim(-1), 0u);
  EXPECT_TRUE(trivial.d(-1).is_zero());
  EXPECT_THROW(build_L(make_config({3}, 1), OrderIdeal::from_maximal({0b10})), Error);
}

TEST(BuildL, SizesAtThreePrimes) {
  auto l = build_L(make_config({3, 5, 7}, 1));
  EXPECT_EQ(l.dim(-3), 1u);
  EXPECT_EQ(l.dim(-2), 15u);
  EXPECT_EQ(l.dim(-1), 71u);
  EXPECT_EQ(l.dim(0), 105u);
}

TEST(SplitDifferential, Examples) {
  auto l3 = build_L(make_config({3}, 2));
  auto split = split_differential(l3);
  EXPECT_EQ(split.d1[0], ExactMatrix::from_rows({{0}, {-1}, {-1}}));
  EXPECT_TRUE(split.d2[0].is_zero());
  EXPECT_NO_THROW(split_differential(build_L(make_config({3, 7}, 2))));
  auto empty = build_L(make_config({3, 7}, 2), OrderIdeal{});
  for (int p = -2; p <= 0; ++p) EXPECT_EQ(empty.dim(p), 0u);
  auto es = split_differential(empty);
  for (const auto& m : es.d1) EXPECT_TRUE(m.is_zero());
}

TEST(SplitDifferential, IdentitiesForEveryIdeal) {
  for (auto primes : std::vector<std::vector<long>>{{3, 7}, {3, 5, 7}}) {
    const auto cfg = make_config(primes, 1);
    for (const auto& ideal : all_ideals(primes.size())) {
      auto l = build_L(cfg, ideal);
      EXPECT_NO_THROW(split_differential(l));
      for (int p = -l.s(); p + 1 < 0; ++p) EXPECT_TRUE((l.d(p + 1) * l.d(p)).is_zero());
    }
  }
}

TEST(HomologyOfL, Examples) {
  auto h3 = homology_of_L(build_L(make_config({3}, 2)));
  EXPECT_EQ(h3[0].to_string(), "Z^2");
  EXPECT_TRUE(h3[1].is_zero());
  auto h21 = homology_of_L(build_L(make_config({3, 7}, 2)));
  EXPECT_EQ(h21[0].to_string(), "Z^12");
  EXPECT_TRUE(h21[1].is_zero());
  EXPECT_TRUE(h21[2].is_zero());
  auto h105 = homology_of_L(build_L(make_config({3, 5, 7}, 1)));
  EXPECT_EQ(h105[0].to_string(), "Z^48");
  for (std::size_t k = 1; k < h105.size(); ++k) EXPECT_TRUE(h105[k].is_zero());
}

// Acyclicity for every order ideal, and the augmentation onto U_S(I) is onto
// with kernel exactly the boundaries.
TEST(HomologyOfL, AcyclicForEveryIdeal) {
  for (auto primes : std::vector<std::vector<long>>{{3}, {3, 7}, {3, 5, 7}}) {
    const auto cfg = make_config(primes, 1);
    UniversalDistribution u(cfg);
    for (const auto& ideal : all_ideals(primes.size())) {
      auto l = build_L(cfg, ideal);
      const auto rows = ideal_basis(u, ideal);
      auto h = homology_of_L(l);
      EXPECT_EQ(h[0], (CohomologyGroup{rows.size(), {}}));
      for (std::size_t k = 1; k < h.size(); ++k) EXPECT_TRUE(h[k].is_zero());
      const auto aug = l.augmentation(u, rows);
      EXPECT_TRUE((aug * l.d(-1)).is_zero());
      const auto f = invariant_factors(aug);
      EXPECT_EQ(f.size(), rows.size());
      for (const auto& d : f) EXPECT_EQ(d, 1);
    }
  }
}

TEST(Ideals, SymbolSetsRespectLattice) {
  const auto cfg = make_config({3, 5, 7}, 1);
  auto ideals = all_ideals(3);
  std::mt19937 rng(2);
  for (int k = 0; k < 30; ++k) {
    const auto& a = ideals[rng() % ideals.size()];
    const auto& b = ideals[rng() % ideals.size()];
    auto sa = symbol_set(build_L(cfg, a)), sb = symbol_set(build_L(cfg, b));
    auto meet = symbol_set(build_L(cfg, a.intersect(b)));
    std::vector<Subset> joined = a.maximal_sets();
    joined.insert(joined.end(), b.maximal_sets().begin(), b.maximal_sets().end());
    auto join = symbol_set(build_L(cfg, OrderIdeal::from_maximal(joined)));
    std::set<LSymbol> inter, uni;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(inter, inter.end()));
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(uni, uni.end()));
    EXPECT_EQ(meet, inter);
    EXPECT_EQ(join, uni);
  }
}

TEST(Bidegree, SumsToDegree) {
  auto l = build_L(make_config({3, 5, 7}, 1));
  for (int p = -3; p <= 0; ++p)
    for (const auto& sym : l.symbols(p)) {
      const auto b = l.bidegree(sym);
      EXPECT_EQ(b.p1 + b.p2, p);
    }
}

TEST(FirstFiltration, Examples) {
  const auto c3 = make_config({3}, 2);
  auto e3 = first_filtration_E1(build_L(c3));
  EXPECT_TRUE(e3.concentrated);
  EXPECT_EQ(e3.row_ranks, (std::vector<std::size_t>{1, 1}));

  const auto c21 = make_config({3, 7}, 2);
  auto e21 = first_filtration_E1(build_L(c21));
  EXPECT_TRUE(e21.concentrated);
  // |supp a| = 2, 1, 0 among the 12 basis symbols: 1*5, 1 + 5, 1
  EXPECT_EQ(e21.row_ranks, (std::vector<std::size_t>{5, 6, 1}));
  EXPECT_EQ(e21.row_ranks, expected_E1_ranks(UniversalDistribution(c21), OrderIdeal::full(2)));

  auto trivial = first_filtration_E1(build_L(c21, OrderIdeal::from_maximal({0})));
  ASSERT_EQ(trivial.entries.size(), 1u);
  EXPECT_EQ(trivial.entries[0].group.to_string(), "Z");
}

TEST(FirstFiltration, ConcentratedForEveryIdeal) {
  for (auto primes : std::vector<std::vector<long>>{{3, 7}, {3, 5, 7}}) {
    const auto cfg = make_config(primes, 1);
    UniversalDistribution u(cfg);
    for (const auto& ideal : all_ideals(primes.size())) {
      auto e = first_filtration_E1(build_L(cfg, ideal));
      EXPECT_TRUE(e.concentrated);
      EXPECT_EQ(e.row_ranks, expected_E1_ranks(u, ideal));
    }
  }
}

TEST(GeneralL, AcyclicUpToTwelve) {
  for (long f = 1; f <= 12; ++f) {
    GeneralLComplex l(f);
    for (int p = -l.depth(); p < 0; ++p) {
      EXPECT_TRUE((l.d(p + 1) * l.d(p)).is_zero());
      EXPECT_TRUE(l.homology(p).is_zero()) << f << " at " << p;
    }
    EXPECT_EQ(l.homology(0), (CohomologyGroup{basis(f).size(), {}})) << f;
  }
}
