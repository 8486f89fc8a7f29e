#pragma once

// Checks of the cohomology of G_S with coefficients in U_S(I): the closed-form
// prediction, comparison with the double complex, the mod M classes and their
// cup products, and the spectral sequence bookkeeping behind them.

#include <optional>
#include <vector>

#include "udcoh/kcomplex.hpp"

namespace udcoh {

struct DegreeCheck {
  int degree = 0;
  CohomologyGroup computed;
  CohomologyGroup expected;

  bool pass() const { return computed == expected; }
};

struct ComparisonReport {
  std::vector<DegreeCheck> degrees;

  bool pass() const {
    return std::all_of(degrees.begin(), degrees.end(), [](const DegreeCheck& d) { return d.pass(); });
  }
};

/// (+)_{T in I} (+)_{e even, supp e containing T} A_e^{n + |T|}.
inline CohomologyGroup theorem_a_prediction(const PrimeConfig& cfg, const OrderIdeal& ideal, int n) {
  const std::size_t s = cfg.s();
  CohomologyGroup out;
  for (Subset t : ideal.members(s)) {
    const int shifted = n + static_cast<int>(subset_size(t));
    for (const auto& e : even_indices(s, full_subset(s), shifted + static_cast<int>(s)))
      if (is_subset(t, e.support())) out = out.direct_sum(a_e_group(cfg, e, shifted));
  }
  return out;
}

/// H^n(G_S, U_S(I)) by Smith normal form against the prediction, n = 0..n_max.
inline ComparisonReport verify_theorem_A(const PrimeConfig& cfg, int n_max, const OrderIdeal& ideal) {
  const UniversalDistribution u(cfg);
  const auto hom = hom_P_U(u, ideal);
  ComparisonReport rep;
  for (int n = 0; n <= n_max; ++n) rep.degrees.push_back({n, hom.cohomology(n), theorem_a_prediction(cfg, ideal, n)});
  return rep;
}

inline ComparisonReport verify_theorem_A(const PrimeConfig& cfg, int n_max) {
  return verify_theorem_A(cfg, n_max, OrderIdeal::full(cfg.s()));
}

struct QuasiIsoReport {
  ComparisonReport integral;
  ComparisonReport reduced;
  bool chain_map = false;

  bool pass() const { return chain_map && integral.pass() && reduced.pass(); }
};

/// Total cohomology of K(I) against Hom(P, U_S(I)), over Z and mod M, and that
/// the augmentation u commutes with the differentials.
inline QuasiIsoReport verify_quasi_iso(const PrimeConfig& cfg, long modulus, int n_max, const OrderIdeal& ideal) {
  validate_modulus(cfg, modulus);
  const UniversalDistribution u(cfg);
  const auto hom = hom_P_U(u, ideal);
  const KComplex k(cfg, ideal, n_max);
  QuasiIsoReport rep;
  rep.chain_map = true;
  for (int n = -k.s(); n <= n_max; ++n) {
    const ExactMatrix lhs = k.augmentation(u, hom, n + 1) * k.total(n);
    const ExactMatrix rhs = n >= 0 ? hom.differential(n) * k.augmentation(u, hom, n) : ExactMatrix(hom.dim(n + 1), k.dim(n));
    rep.chain_map = rep.chain_map && lhs == rhs;
  }
  for (int n = -k.s(); n <= n_max; ++n) {
    const CohomologyGroup zero;
    rep.integral.degrees.push_back({n, k.cohomology(n), n >= 0 ? hom.cohomology(n) : zero});
    rep.reduced.degrees.push_back({n, k.cohomology(n, modulus), n >= 0 ? hom.cohomology(n, modulus) : zero});
  }
  return rep;
}

inline QuasiIsoReport verify_quasi_iso(const PrimeConfig& cfg, long modulus, int n_max) {
  return verify_quasi_iso(cfg, modulus, n_max, OrderIdeal::full(cfg.s()));
}

/// Pairs (T, e) with T in I, supp e containing T and deg e = n + |T|.
inline std::vector<std::pair<Subset, MultiIndex>> class_indices(std::size_t s, int n, const OrderIdeal& ideal) {
  std::vector<std::pair<Subset, MultiIndex>> out;
  for (Subset t : ideal.members(s)) {
    const int deg = n + static_cast<int>(subset_size(t));
    if (deg < 0) continue;
    for (const auto& e : multi_indices(s, static_cast<unsigned>(deg), full_subset(s)))
      if (is_subset(t, e.support())) out.emplace_back(t, e);
  }
  return out;
}

inline std::size_t modM_class_count(const PrimeConfig& cfg, int n, const OrderIdeal& ideal) {
  return class_indices(cfg.s(), n, ideal).size();
}

inline std::size_t modM_class_count(const PrimeConfig& cfg, int n) {
  return modM_class_count(cfg, n, OrderIdeal::full(cfg.s()));
}

/// (Z/M)^count as a group.
inline CohomologyGroup free_mod(long modulus, std::size_t count) {
  return CohomologyGroup::from_cyclic_orders(0, std::vector<BigInt>(count, BigInt(modulus)));
}

/// The cocycles u(C_{T,e}) of degree n, labelled by (T, e).
struct LiftedClasses {
  int degree = 0;
  std::vector<std::pair<Subset, MultiIndex>> labels;
  std::vector<Vector> cocycles;
};

inline LiftedClasses lifted_classes(const KComplex& k, const UniversalDistribution& u, const ResolutionCochains& hom,
                                    long modulus, int n) {
  LiftedClasses out;
  out.degree = n;
  out.labels = class_indices(k.config().s(), n, k.ideal());
  for (const auto& [t, e] : out.labels) out.cocycles.push_back(evaluate(k, u, hom, lift_cocycle(k, modulus, t, e)).values);
  return out;
}

/// Coordinates of the class of z in the lifted classes, when z lies in their span modulo coboundaries.
inline std::optional<Vector> class_coordinates(const ResolutionCochains& hom, long modulus, const LiftedClasses& basis,
                                               const HomCochain& z) {
  const int n = basis.degree;
  ExactMatrix a = ExactMatrix::from_columns(basis.cocycles, hom.dim(n));
  if (n >= 1) a = a.hstack(hom.differential(n - 1));
  const auto sol = solve_mod(a, z.values, modulus);
  if (!sol) return std::nullopt;
  return Vector(sol->begin(), sol->begin() + static_cast<long>(basis.labels.size()));
}

struct ClassBasisReport {
  int degree = 0;
  std::size_t count = 0;
  CohomologyGroup computed;
  bool spans = false;  // the lifted classes u(C_{T,e}) generate H^n(U/MU)

  bool pass(long modulus) const { return spans && computed == free_mod(modulus, count); }
};

/// H^n(G_S, U_S(I)/M) is free over Z/M on the classes u(C_{T,e}).
inline ClassBasisReport verify_class_basis(const KComplex& k, const UniversalDistribution& u, long modulus, int n) {
  validate_modulus(k.config(), modulus);
  const auto hom = hom_P_U(u, k.ideal());
  ClassBasisReport rep;
  rep.degree = n;
  const auto basis = lifted_classes(k, u, hom, modulus, n);
  rep.count = basis.labels.size();
  rep.computed = hom.cohomology(n, modulus);
  const ExactMatrix lifted = ExactMatrix::from_columns(basis.cocycles, hom.dim(n));
  const ExactMatrix bounds = n >= 1 ? hom.differential(n - 1) : ExactMatrix(hom.dim(n), 0);
  rep.spans = homology_at(bounds.hstack(lifted), hom.differential(n), modulus).is_zero();
  return rep;
}

struct RowCheck {
  int p2 = 0;
  std::size_t count = 0;  // #{(T, e) : |T| = s - p2, supp e containing T, deg e = n + |T|}
  CohomologyGroup computed;
};

struct DegenerationReport {
  int degree = 0;
  std::vector<RowCheck> rows;
  CohomologyGroup total;

  std::size_t row_sum() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.count;
    return n;
  }

  bool pass(long modulus) const {
    CohomologyGroup sum;
    for (const auto& r : rows) {
      if (r.computed != free_mod(modulus, r.count)) return false;
      sum = sum.direct_sum(r.computed);
    }
    return sum == total && total == free_mod(modulus, row_sum());
  }
};

/// Each p2-row of (K_M; d1 + delta) against its pair count, and the row sum
/// against the total cohomology of K_M in degree n.
inline DegenerationReport verify_degeneration(const KComplex& k, long modulus, int n) {
  validate_modulus(k.config(), modulus);
  k.require(n);
  DegenerationReport rep;
  rep.degree = n;
  rep.total = k.cohomology(n, modulus);
  const int s = k.s();
  auto row_of = [&](int deg, int p2) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < k.dim(deg); ++j)
      if (k.p2(k.symbols(deg)[j]) == p2) out.push_back(j);
    return out;
  };
  for (int p2 = 0; p2 <= s; ++p2) {
    const auto before = row_of(n - 1, p2), here = row_of(n, p2), after = row_of(n + 1, p2);
    const ExactMatrix in = (k.d1(n - 1) + k.delta(n - 1)).select_rows(here).select_cols(before);
    const ExactMatrix out = (k.d1(n) + k.delta(n)).select_rows(after).select_cols(here);
    RowCheck row;
    row.p2 = p2;
    row.computed = homology_at(in, out, modulus);
    for (const auto& [t, e] : class_indices(k.config().s(), n, k.ideal()))
      if (static_cast<int>(subset_size(t)) == s - p2) ++row.count;
    rep.rows.push_back(row);
  }
  return rep;
}

/// Intersection over i in T of the kernels of restriction
/// H^q(G_S, Z) -> H^q(G_{S - i}, Z), computed on cochains.
inline CohomologyGroup restriction_kernel(const PrimeConfig& cfg, Subset t, int q) {
  const std::size_t s = cfg.s();
  const Subset full = full_subset(s);
  const auto cs = trivial_cochains(cfg, full);
  const auto zq = cs.indices(q);
  const ExactMatrix dq = cs.differential(q);
  // unknowns: z in C_S^q, then w_i in C_{S-i}^{q-1} for each i in T
  std::vector<std::size_t> w_dims;
  std::vector<ResolutionCochains> subs;
  for (std::size_t i = 0; i < s; ++i)
    if (subset_contains(t, i)) {
      subs.push_back(trivial_cochains(cfg, full & ~(Subset{1} << i)));
      w_dims.push_back(subs.back().dim(q - 1));
    }
  std::size_t unknowns = zq.size();
  for (auto w : w_dims) unknowns += w;
  std::size_t rows = dq.rows();
  for (const auto& sub : subs) rows += sub.dim(q);
  MatrixBuilder m(rows, unknowns);
  for (std::size_t i = 0; i < dq.rows(); ++i)
    for (const auto& [j, v] : dq.row(i)) m.add(i, j, v);
  std::size_t row0 = dq.rows(), col0 = zq.size();
  for (const auto& sub : subs) {
    const auto sq = sub.indices(q);
    for (std::size_t a = 0; a < sq.size(); ++a) {
      const auto pos = std::lower_bound(zq.begin(), zq.end(), sq[a]) - zq.begin();
      m.add(row0 + a, static_cast<std::size_t>(pos), 1);
    }
    if (q >= 1) {
      const ExactMatrix dsub = sub.differential(q - 1);
      for (std::size_t i = 0; i < dsub.rows(); ++i)
        for (const auto& [j, v] : dsub.row(i)) m.add(row0 + i, col0 + j, -v);
    }
    row0 += sq.size();
    col0 += sub.dim(q - 1);
  }
  const ExactMatrix ker = kernel_basis_mod(m.build());
  std::vector<std::size_t> z_rows(zq.size());
  for (std::size_t i = 0; i < zq.size(); ++i) z_rows[i] = i;
  const ExactMatrix w = ker.select_rows(z_rows);
  const ExactMatrix bounds = q >= 1 ? cs.differential(q - 1) : ExactMatrix(zq.size(), 0);
  return quotient_group(w, bounds);
}

/// (+)_{e even, supp e containing T} A_e^q.
inline CohomologyGroup restriction_kernel_prediction(const PrimeConfig& cfg, Subset t, int q) {
  const std::size_t s = cfg.s();
  CohomologyGroup out;
  for (const auto& e : even_indices(s, full_subset(s), q + static_cast<int>(s)))
    if (is_subset(t, e.support())) out = out.direct_sum(a_e_group(cfg, e, q));
  return out;
}

struct RestrictionComplexReport {
  std::vector<CohomologyGroup> groups;  // by degree 0 .. |T|
  std::size_t expected_rank = 0;

  bool pass() const {
    if (groups.empty() || groups[0] != CohomologyGroup{expected_rank, {}}) return false;
    return std::all_of(groups.begin() + 1, groups.end(), [](const CohomologyGroup& g) { return g.is_zero(); });
  }
};

/// The complex C_{S,T} with C^n = (+)_{|T'| = s - n, T' containing S - T} A_{T'},
/// A_{T'} = (+)_{T'' in T'} B_{T''}, and d x = sum_{i in T' cap T} w(i, T' cap T) x|_{T' - i}.
/// `ranks[mask]` is the free rank of B_mask.
inline RestrictionComplexReport lemma_complex_check(std::size_t s, Subset t, const std::vector<std::size_t>& ranks) {
  const Subset full = full_subset(s);
  if (ranks.size() != std::size_t{full} + 1) throw Error(ErrorKind::ShapeMismatch, "one rank per subset required");
  if (!is_subset(t, full)) throw Error(ErrorKind::IndexOutOfRange, "T outside S");
  const Subset base = full & ~t;
  // coordinates of A_{T'}: (T'' in T', k < ranks[T''])
  auto layout = [&](Subset tp) {
    std::vector<std::pair<Subset, std::size_t>> out;
    for (Subset tpp = 0; tpp <= full; ++tpp)
      if (is_subset(tpp, tp))
        for (std::size_t k = 0; k < ranks[tpp]; ++k) out.emplace_back(tpp, k);
    return out;
  };
  auto terms = [&](int n) {
    std::vector<Subset> out;
    for (Subset tp = 0; tp <= full; ++tp)
      if (static_cast<int>(subset_size(tp)) == static_cast<int>(s) - n && is_subset(base, tp)) out.push_back(tp);
    return out;
  };
  auto coords = [&](int n) {
    std::vector<std::tuple<Subset, Subset, std::size_t>> out;
    for (Subset tp : terms(n))
      for (const auto& [tpp, k] : layout(tp)) out.emplace_back(tp, tpp, k);
    return out;
  };
  auto differential = [&](int n) {
    const auto src = coords(n), dst = coords(n + 1);
    MatrixBuilder b(dst.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c) {
      const auto& [tp, tpp, k] = src[c];
      const Subset active = tp & t;
      for (std::size_t i = 0; i < s; ++i) {
        if (!subset_contains(active, i)) continue;
        const Subset smaller = tp & ~(Subset{1} << i);
        if (!is_subset(tpp, smaller)) continue;
        const auto it = std::find(dst.begin(), dst.end(), std::make_tuple(smaller, tpp, k));
        b.add(static_cast<std::size_t>(it - dst.begin()), c, signs::position_in_subset(i, active));
      }
    }
    return b.build();
  };
  RestrictionComplexReport rep;
  const int top = static_cast<int>(subset_size(t));
  for (int n = 0; n <= top; ++n) {
    const ExactMatrix in = n >= 1 ? differential(n - 1) : ExactMatrix(coords(0).size(), 0);
    rep.groups.push_back(homology_at(in, differential(n)));
  }
  for (Subset tp = 0; tp <= full; ++tp)
    if (is_subset(t, tp)) rep.expected_rank += ranks[tp];
  return rep;
}

/// Cup product [e'] u z for a cocycle z of Hom(P, U_S)/M: block E of the result is
/// the sum over pairs (g, h) of Phi_{e', E - e'} of coeff * h z_{E - e'}.
inline HomCochain cup_on_distribution_class(const UniversalDistribution& u, const ResolutionCochains& hom, long modulus,
                                            const MultiIndex& left, const HomCochain& z) {
  validate_modulus(u.config(), modulus);
  if (z.values.size() != hom.dim(z.degree)) throw Error(ErrorKind::ShapeMismatch, "cochain length");
  if (!detail::is_zero_mod(hom.differential(z.degree) * z.values, modulus))
    throw Error(ErrorKind::NotACocycle, "input is not a cocycle mod M");
  const auto& group = u.group();
  const auto rows = ideal_basis(u, OrderIdeal::full(u.s()));
  const std::size_t m = hom.module_dim();
  const int n = z.degree + static_cast<int>(left.degree());
  Vector out(hom.dim(n), 0);
  for (const auto& total : hom.indices(n)) {
    MultiIndex right = total;
    bool fits = true;
    for (std::size_t i = 0; i < total.size(); ++i) {
      fits = fits && total.e[i] >= left.e[i];
      if (fits) right.e[i] -= left.e[i];
    }
    if (!fits) continue;
    GroupRingElement x{{}, modulus};
    for (const auto& [gh, c] : diagonal_component(group, left, right)) x.add_term(gh.second, c);
    const ExactMatrix act = u.action_matrix(x, rows);
    const std::size_t src = *hom.offset(right), dst = *hom.offset(total);
    Vector block(z.values.begin() + static_cast<long>(src), z.values.begin() + static_cast<long>(src + m));
    const Vector img = act * block;
    for (std::size_t k = 0; k < m; ++k) out[dst + k] = reduce(out[dst + k] + img[k], modulus);
  }
  return {n, out, modulus};
}

struct CupClassReport {
  std::vector<std::pair<Subset, MultiIndex>> labels;
  std::optional<Vector> coordinates;  // of [e'] u c_{T,e} in the classes c_{T',e''}
  long leading = 0;                   // coordinate at c_{T,e+e'}
  bool exact = false;                 // no other coordinate is nonzero
  bool lower_only = false;            // other nonzero coordinates sit at T' strictly inside T
  long with_left_first = 0;           // (-1)^{omega(e', e)} prod (l_i - 1)/2 mod M
  long with_right_first = 0;          // (-1)^{omega(e, e')} prod (l_i - 1)/2 mod M

  bool left_first_holds() const { return coordinates && lower_only && leading == with_left_first; }
  bool right_first_holds() const { return coordinates && lower_only && leading == with_right_first; }
};

/// Expands [e'] u c_{T,e} in the lifted classes of its degree and compares the
/// coefficient of c_{T,e+e'} with both sign readings.
inline CupClassReport verify_cup_on_class(const KComplex& k, const UniversalDistribution& u, long modulus, Subset t,
                                          const MultiIndex& e, const MultiIndex& left) {
  const auto hom = hom_P_U(u);
  const auto z = evaluate(k, u, hom, lift_cocycle(k, modulus, t, e));
  const auto product = cup_on_distribution_class(u, hom, modulus, left, z);
  const auto basis = lifted_classes(k, u, hom, modulus, product.degree);
  CupClassReport rep;
  rep.labels = basis.labels;
  rep.coordinates = class_coordinates(hom, modulus, basis, product);
  if (rep.coordinates) {
    rep.exact = rep.lower_only = true;
    const MultiIndex target = e.plus(left);
    for (std::size_t j = 0; j < basis.labels.size(); ++j) {
      const auto& [tj, ej] = basis.labels[j];
      const BigInt& c = (*rep.coordinates)[j];
      if (tj == t && ej == target) {
        rep.leading = c.get_si();
      } else if (sgn(c) != 0) {
        rep.exact = false;
        rep.lower_only = rep.lower_only && is_subset(tj, t) && tj != t;
      }
    }
  }
  BigInt factor = 1;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e.e[i] % 2 == 1 && left.e[i] % 2 == 1) factor *= (k.config().primes[i] - 1) / 2;
  rep.with_left_first = reduce(factor * signs::shuffle(left, e), modulus).get_si();
  rep.with_right_first = reduce(factor * signs::shuffle(e, left), modulus).get_si();
  return rep;
}

}  // namespace udcoh
