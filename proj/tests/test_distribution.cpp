#include <gtest/gtest.h>

#include <random>

#include "udcoh/distribution.hpp"

using namespace udcoh;

namespace {

// All distribution relations [a] - sum_{pb=a} [b] at level f, as columns in Z^f.
ExactMatrix relation_matrix(long f) {
  std::vector<Vector> cols;
  for (const auto& pp : factorize(f))
    for (long n = 0; n < f; n += pp.p) {
      Vector col(f, 0);
      col[n] += 1;
      for (long j = 0; j < pp.p; ++j) col[(n / pp.p + j * (f / pp.p)) % f] -= 1;
      cols.push_back(col);
    }
  return ExactMatrix::from_columns(cols, f);
}

// Matrix sending [n] (n = 0..f-1) to its normal form, in basis coordinates.
ExactMatrix projection(long f) {
  Normalizer norm(f);
  const auto b = norm.basis();
  MatrixBuilder m(b.size(), f);
  for (long n = 0; n < f; ++n)
    for (const auto& [k, c] : norm.normalize(n).coefficients)
      m.add(static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), k) - b.begin()), n, c);
  return m.build();
}

long phi(long f) {
  long out = f;
  for (const auto& pp : factorize(f)) out = out / pp.p * (pp.p - 1);
  return out;
}

}  // namespace

TEST(Basis, Examples) {
  auto b3 = basis(3);
  ASSERT_EQ(b3.size(), 2u);
  EXPECT_EQ(b3[0].numerator, 0);
  EXPECT_EQ(b3[1].numerator, 1);
  EXPECT_EQ(basis(21).size(), 12u);
  ASSERT_EQ(basis(1).size(), 1u);
  EXPECT_EQ(basis(1)[0].numerator, 0);
}

TEST(Basis, RankIsEulerPhi) {
  for (long f = 2; f <= 200; ++f) EXPECT_EQ(static_cast<long>(basis(f).size()), phi(f)) << f;
}

TEST(Normalize, Examples) {
  DistElement minus_third{3, {{1, BigInt(-1)}}, 0};
  EXPECT_EQ(normalize_symbol({2, 3}), minus_third);
  for (long f : {1L, 3L, 12L, 21L}) {
    DistElement zero{f, {{0, BigInt(1)}}, 0};
    EXPECT_EQ(normalize_symbol({0, f}), zero);
  }
  // 20/21 = 2/3 + 2/7 is bad at 3 only; one rewrite there, then normalize the pieces.
  Normalizer n21(21);
  DistElement by_hand{21, {}, 0};
  by_hand.add_scaled(n21.normalize(3 * 20 % 21), 1);
  by_hand.add_scaled(n21.normalize((20 + 7) % 21), -1);
  by_hand.add_scaled(n21.normalize((20 + 14) % 21), -1);
  EXPECT_EQ(normalize_symbol({20, 21}), by_hand);
  // 11/21 = 2/3 + 6/7 is bad at both primes; rewriting at 7 first must agree.
  DistElement at_seven{21, {}, 0};
  at_seven.add_scaled(n21.normalize(7 * 11 % 21), 1);
  for (long i = 1; i < 7; ++i) at_seven.add_scaled(n21.normalize((11 + 3 * i) % 21), -1);
  EXPECT_EQ(normalize_symbol({11, 21}), at_seven);
}

// The relation lattice is an independent description of U(f): the quotient
// Z^f / relations must be free of rank phi(f), every relation must normalize
// to zero, and normalization must fix the basis.
TEST(Normalize, AgreesWithRelationLattice) {
  for (long f : {1L, 2L, 3L, 4L, 6L, 8L, 9L, 12L, 15L, 21L, 30L, 36L}) {
    const ExactMatrix rel = relation_matrix(f);
    const auto factors = invariant_factors(rel);
    for (const auto& d : factors) EXPECT_EQ(d, 1) << f;
    EXPECT_EQ(static_cast<long>(f - factors.size()), phi(f)) << f;
    const ExactMatrix proj = projection(f);
    EXPECT_TRUE((proj * rel).is_zero()) << f;
    const auto b = Normalizer(f).basis();
    EXPECT_EQ(proj.select_cols(std::vector<std::size_t>(b.begin(), b.end())), ExactMatrix::identity(b.size()));
  }
}

TEST(Normalize, RelationSoundnessExhaustive) {
  for (long f : {3L, 4L, 12L, 21L}) {
    Normalizer norm(f);
    for (const auto& pp : norm.factors())
      for (long n = 0; n < f; n += pp.p) {
        DistElement sum{f, {}, 0};
        for (long j = 0; j < pp.p; ++j) sum.add_scaled(norm.normalize((n / pp.p + j * (f / pp.p)) % f), 1);
        EXPECT_EQ(DistElement(norm.normalize(n)), sum) << n << "/" << f;
      }
  }
}

TEST(Normalize, IdempotentAndOrderIndependent) {
  std::mt19937 rng(11);
  for (long f : {12L, 21L, 60L, 105L, 180L}) {
    Normalizer norm(f);
    for (long n : norm.basis()) EXPECT_EQ(norm.normalize(n).coefficients.size(), 1u);
    auto largest = [](long, const std::vector<std::size_t>& bad) { return bad.back(); };
    auto random = [&](long, const std::vector<std::size_t>& bad) { return bad[rng() % bad.size()]; };
    for (int k = 0; k < 40; ++k) {
      const long n = static_cast<long>(rng() % f);
      const DistElement ref = norm.normalize(n);
      EXPECT_EQ(norm.normalize_with(n, largest), ref);
      EXPECT_EQ(norm.normalize_with(n, random), ref);
      EXPECT_EQ(norm.normalize(ref), ref);
    }
  }
}

TEST(GaloisAction, Examples) {
  UniversalDistribution u3(make_config({3}, 2));
  EXPECT_EQ(galois_action_matrix(u3, u3.group().sigma(0)), ExactMatrix::from_rows({{1, 0}, {0, -1}}));
  UniversalDistribution u(make_config({3, 7}, 2));
  EXPECT_EQ(galois_action_matrix(u, u.group().identity()), ExactMatrix::identity(12));
  EXPECT_THROW(galois_action_matrix(u, u3.group().identity()), Error);
}

TEST(GaloisAction, IsHomomorphism) {
  std::mt19937 rng(5);
  for (auto primes : std::vector<std::vector<long>>{{3, 7}, {7, 13}}) {
    UniversalDistribution u(make_config(primes, 1));
    const auto all = u.group().elements();
    for (int k = 0; k < 12; ++k) {
      const auto& g = all[rng() % all.size()];
      const auto& h = all[rng() % all.size()];
      EXPECT_EQ(u.action_matrix(u.group().mul(g, h)), u.action_matrix(g) * u.action_matrix(h));
    }
  }
}

TEST(Ideals, Basis) {
  UniversalDistribution u(make_config({3, 7}, 2));
  EXPECT_EQ(ideal_basis(u, OrderIdeal::full(2)).size(), 12u);
  EXPECT_EQ(ideal_basis(u, OrderIdeal::from_maximal({0})), (std::vector<long>{0}));
  // a_7 = 0, a_3 in {0, 1}: numerators 0 and 7
  EXPECT_EQ(ideal_basis(u, OrderIdeal::from_maximal({0b01})), (std::vector<long>{0, 7}));
  EXPECT_TRUE(ideal_basis(u, OrderIdeal{}).empty());
  EXPECT_THROW(OrderIdeal::from_members({0b11}), Error);
  EXPECT_EQ(OrderIdeal::from_members({0, 0b01, 0b10, 0b11}), OrderIdeal::full(2));
  EXPECT_EQ(OrderIdeal::from_maximal({0b01, 0b11, 0}).maximal_sets(), (std::vector<Subset>{0b11}));
  EXPECT_EQ(OrderIdeal::up_to_size(3, 1).members(3), (std::vector<Subset>{0, 1, 2, 4}));
}

TEST(Ideals, SubmodulesAreGaloisStable) {
  UniversalDistribution u(make_config({3, 5, 7}, 1));
  for (const auto& ideal : {OrderIdeal::up_to_size(3, 1), OrderIdeal::from_maximal({0b011, 0b100})}) {
    const auto rows = ideal_basis(u, ideal);
    for (std::size_t i = 0; i < 3; ++i)
      for (long n : rows)
        for (const auto& [m, c] : u.normalize(u.act(u.group().sigma(i), n)).coefficients)
          EXPECT_TRUE(ideal.contains(u.support(m)));
  }
}

TEST(FixedPoints, Examples) {
  UniversalDistribution u3(make_config({3}, 2));
  EXPECT_EQ(fixed_points(u3, 2).structure.to_string(), "Z/2 + Z/2");
  EXPECT_TRUE(fixed_points(u3, 1).structure.is_zero());
  UniversalDistribution u21(make_config({3, 7}, 2));
  EXPECT_EQ(fixed_points(u21, 2).structure, CohomologyGroup::from_cyclic_orders(0, std::vector<BigInt>(4, 2)));
  EXPECT_THROW(fixed_points(u21, 4), Error);
}

TEST(InvariantBasis, FamilyExamples) {
  UniversalDistribution u3(make_config({3}, 2));
  auto fam = theorem_b_family(u3, 2);
  ASSERT_EQ(fam.size(), 2u);
  EXPECT_EQ(fam[0], (DistElement{3, {{0, BigInt(1)}}, 2}));
  EXPECT_EQ(fam[1], (DistElement{3, {{1, BigInt(1)}}, 2}));
  UniversalDistribution u21(make_config({3, 7}, 2));
  auto fam21 = theorem_b_family(u21, 2);
  ASSERT_EQ(fam21.size(), 4u);
  EXPECT_EQ(fam21[0], (DistElement{21, {{0, BigInt(1)}}, 2}));
}

TEST(InvariantBasis, Verified) {
  for (auto [primes, m] : std::vector<std::pair<std::vector<long>, long>>{
           {{3}, 2}, {{3, 7}, 2}, {{7, 13}, 3}, {{7, 13}, 6}, {{3, 5, 7}, 2}}) {
    UniversalDistribution u(make_config(primes, m));
    auto rep = verify_theorem_b(u, m);
    EXPECT_TRUE(rep.fixed);
    EXPECT_TRUE(rep.independent);
    EXPECT_TRUE(rep.spans);
    EXPECT_EQ(rep.family.size(), std::size_t{1} << primes.size());
    EXPECT_EQ(rep.invariants, CohomologyGroup::from_cyclic_orders(0, std::vector<BigInt>(rep.family.size(), m)));
  }
}

TEST(XgBasis, Unimodular) {
  EXPECT_EQ(xg_basis_matrix(1, XgVariant::X), ExactMatrix::identity(1));
  for (long f = 1; f <= 12; ++f)
    for (auto v : {XgVariant::X, XgVariant::Y}) {
      const auto m = xg_basis_matrix(f, v);
      ASSERT_EQ(m.rows(), static_cast<std::size_t>(f));
      ASSERT_EQ(m.cols(), static_cast<std::size_t>(f)) << f;
      EXPECT_EQ(abs(determinant(m)), 1) << f;
    }
  EXPECT_EQ(abs(determinant(xg_basis_matrix(21, XgVariant::X))), 1);
  EXPECT_EQ(abs(determinant(xg_basis_matrix(21, XgVariant::Y))), 1);
}

TEST(LevelInclusion, SplitMonomorphism) {
  for (long f : {4L, 6L, 12L, 21L, 30L, 36L})
    for (long g = 1; g <= f; ++g) {
      if (f % g) continue;
      const auto m = level_inclusion_matrix(g, f);
      const auto factors = invariant_factors(m);
      EXPECT_EQ(factors.size(), m.cols()) << g << " | " << f;
      for (const auto& d : factors) EXPECT_EQ(d, 1);
    }
  EXPECT_THROW(level_inclusion_matrix(5, 12), Error);
}
