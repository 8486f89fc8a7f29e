#include <gtest/gtest.h>

#include "udcoh/resolution.hpp"

using namespace udcoh;

namespace udcoh {
void PrintTo(const CupValue& v, std::ostream* os) { *os << v.coefficient.get_str() << " " << v.index.to_string(); }
}  // namespace udcoh

namespace {

CohomologyGroup cyc(std::vector<long> orders) {
  std::vector<BigInt> big(orders.begin(), orders.end());
  return CohomologyGroup::from_cyclic_orders(0, big);
}

const CohomologyGroup kZ{1, {}};

// Kunneth oracle for H^n(Z/a x Z/b, Z): H^*(Z/m, Z) is Z, 0, Z/m, 0, Z/m, ...
// and the Tor term contributes Z/gcd(a, b) from pairs of positive even degrees
// summing to n + 1.
CohomologyGroup kunneth_two(long a, long b, int n) {
  auto h = [](long m, int k) -> std::optional<BigInt> {
    if (k == 0) return BigInt(0);
    if (k % 2 == 0) return BigInt(m);
    return std::nullopt;
  };
  const long g = std::gcd(a, b);
  std::size_t free = 0;
  std::vector<BigInt> orders;
  for (int i = 0; i <= n; ++i) {
    auto x = h(a, i), y = h(b, n - i);
    if (!x || !y) continue;
    if (*x == 0 && *y == 0) ++free;
    else if (*x == 0) orders.push_back(*y);
    else if (*y == 0) orders.push_back(*x);
    else orders.push_back(g);
  }
  for (int i = 2; i <= n - 1; i += 2)
    if ((n + 1 - i) % 2 == 0 && n + 1 - i >= 2) orders.push_back(g);
  return CohomologyGroup::from_cyclic_orders(free, orders);
}

}  // namespace

TEST(TrivialCochains, DifferentialSquaresToZero) {
  const auto cfg = make_config({3, 5, 7}, 1);
  const auto c = trivial_cochains(cfg, full_subset(3));
  for (int n = 0; n < 6; ++n) EXPECT_TRUE((c.differential(n + 1) * c.differential(n)).is_zero());
  EXPECT_EQ(c.dim(2), 6u);
}

TEST(ClosedForm, Examples) {
  const auto cfg = make_config({3, 7}, 2);
  const auto one = cohomology_Z_closed_form(cfg, 0b01, 4);
  EXPECT_EQ(one[0], kZ);
  EXPECT_EQ(one[2], cyc({2}));
  EXPECT_EQ(one[4], cyc({2}));
  EXPECT_TRUE(one[1].is_zero());
  EXPECT_TRUE(one[3].is_zero());
  const auto two = cohomology_Z_closed_form(cfg, 0b11, 4);
  EXPECT_EQ(two[2], cyc({2, 6}));
  EXPECT_EQ(two[3], cyc({2}));
  EXPECT_EQ(two[4], cyc({2, 6, 2}));
  const auto none = cohomology_Z_closed_form(cfg, 0, 4);
  EXPECT_EQ(none[0], kZ);
  for (int n = 1; n <= 4; ++n) EXPECT_TRUE(none[n].is_zero());
}

TEST(ClosedForm, AgreesWithSmithForm) {
  for (auto primes : std::vector<std::vector<long>>{{3}, {3, 7}, {7, 13}, {3, 5, 7}}) {
    const auto cfg = make_config(primes, 1);
    for (Subset t = 0; t <= full_subset(primes.size()); ++t)
      EXPECT_EQ(cohomology_Z_closed_form(cfg, t, 6), cohomology_Z_snf(cfg, t, 6)) << cfg.describe() << " T=" << t;
  }
}

TEST(ClosedForm, AgreesWithKunneth) {
  for (auto [a, b] : std::vector<std::pair<long, long>>{{3, 7}, {7, 13}, {5, 11}}) {
    const auto cfg = make_config({a, b}, 1);
    const auto h = cohomology_Z_closed_form(cfg, 0b11, 7);
    for (int n = 0; n <= 7; ++n) EXPECT_EQ(h[n], kunneth_two(a - 1, b - 1, n)) << a << "," << b << " n=" << n;
  }
}

TEST(AeGroup, RanksAndDegrees) {
  const auto cfg = make_config({7, 13, 19}, 1);
  const MultiIndex e{{2, 4, 2}};
  // t = 3, deg 8: (Z/6)^{C(2, j)} at degree 8 - j
  EXPECT_EQ(a_e_group(cfg, e, 8), cyc({6}));
  EXPECT_EQ(a_e_group(cfg, e, 7), cyc({6, 6}));
  EXPECT_EQ(a_e_group(cfg, e, 6), cyc({6}));
  EXPECT_TRUE(a_e_group(cfg, e, 5).is_zero());
  EXPECT_EQ(a_e_group(cfg, MultiIndex::zero(3), 0), kZ);
}

TEST(Diagonal, IsChainMap) {
  EXPECT_TRUE(diagonal_is_chain_map(make_config({3}, 1), 5));
  EXPECT_TRUE(diagonal_is_chain_map(make_config({5}, 1), 4));
  EXPECT_TRUE(diagonal_is_chain_map(make_config({3, 5}, 1), 4));
  EXPECT_TRUE(diagonal_is_chain_map(make_config({3, 5, 7}, 1), 3));
}

TEST(Cup, Examples) {
  const auto c3 = make_config({3}, 2);
  const MultiIndex one{{1}};
  const CupValue unit{1, MultiIndex{{2}}};
  EXPECT_EQ(cup_closed_form(c3, 2, one, one), unit);
  EXPECT_EQ(cup_via_diagonal(c3, 2, one, one), unit);

  const auto c21 = make_config({3, 7}, 2);
  const MultiIndex a{{1, 0}}, b{{0, 1}};
  EXPECT_EQ(cup_closed_form(c21, 0, a, b), (CupValue{1, MultiIndex{{1, 1}}}));
  EXPECT_EQ(cup_closed_form(c21, 0, b, a), (CupValue{-1, MultiIndex{{1, 1}}}));
  EXPECT_EQ(cup_via_diagonal(c21, 0, a, b), (CupValue{1, MultiIndex{{1, 1}}}));
  EXPECT_EQ(cup_via_diagonal(c21, 0, b, a), (CupValue{-1, MultiIndex{{1, 1}}}));

  const auto c7 = make_config({7}, 6);
  const MultiIndex g{{1}};
  EXPECT_EQ(cup_closed_form(c7, 6, g, g), (CupValue{3, MultiIndex{{2}}}));
  EXPECT_EQ(cup_via_diagonal(c7, 6, g, g), (CupValue{3, MultiIndex{{2}}}));
  EXPECT_THROW(cup_closed_form(c21, 4, a, b), Error);
}

TEST(Cup, ClosedFormMatchesDiagonal) {
  for (auto [primes, moduli] : std::vector<std::pair<std::vector<long>, std::vector<long>>>{
           {{3}, {2}}, {{7}, {2, 3, 6}}, {{3, 7}, {2}}, {{7, 13}, {2, 3, 6}}}) {
    const auto cfg = make_config(primes, 1);
    const std::size_t s = primes.size();
    std::vector<MultiIndex> small;
    for (unsigned d = 0; d <= 2; ++d)
      for (const auto& e : multi_indices(s, d, full_subset(s))) small.push_back(e);
    for (long m : moduli)
      for (const auto& e : small)
        for (const auto& f : small) EXPECT_EQ(cup_closed_form(cfg, m, e, f), cup_via_diagonal(cfg, m, e, f));
  }
}

TEST(Cup, GradedAnticommutative) {
  const long m = 6;
  const auto cfg = make_config({7, 13}, m);
  for (unsigned d = 0; d <= 2; ++d)
    for (unsigned d2 = 0; d2 <= 2; ++d2)
      for (const auto& e : multi_indices(2, d, 0b11))
        for (const auto& f : multi_indices(2, d2, 0b11)) {
          const auto ef = cup_closed_form(cfg, m, e, f), fe = cup_closed_form(cfg, m, f, e);
          EXPECT_EQ(ef.coefficient, reduce(fe.coefficient * signs::parity_sign(static_cast<long>(d * d2)), m));
        }
}
