#pragma once

// The universal ordinary distribution U(f): canonical basis, normal forms of
// arbitrary symbols, the Galois action at squarefree level, order-ideal
// submodules, invariants mod M and the explicit family D_T[sum 1/l_i].

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "udcoh/errors.hpp"
#include "udcoh/exactlin.hpp"
#include "udcoh/galois.hpp"

namespace udcoh {

struct PrimePower {
  long p;
  int k;
  long pk;
};

inline std::vector<PrimePower> factorize(long f) {
  if (f < 1) throw Error(ErrorKind::LevelMismatch, "level must be positive");
  std::vector<PrimePower> out;
  for (long p = 2; p * p <= f; ++p) {
    if (f % p) continue;
    PrimePower pp{p, 0, 1};
    while (f % p == 0) f /= p, ++pp.k, pp.pk *= p;
    out.push_back(pp);
  }
  if (f > 1) out.push_back({f, 1, f});
  return out;
}

/// a = numerator / level in (1/f)Z/Z.
struct Fraction {
  long numerator = 0;
  long level = 1;

  auto operator<=>(const Fraction&) const = default;

  std::string to_string() const {
    return numerator == 0 ? "0" : std::to_string(numerator) + "/" + std::to_string(level);
  }
};

/// Coefficient of 1/p in the partial fraction expansion of n/f, for p^k || f.
inline long leading_digit(long n, long f, const PrimePower& pp) {
  const long cof = f / pp.pk;
  const long xp = static_cast<long>((__int128)detail::mod_pos(n, pp.pk) * detail::inv_mod(cof % pp.pk, pp.pk) % pp.pk);
  return xp / (pp.pk / pp.p);
}

/// Finite combination of symbols [n/f] keyed by numerator; modulus 0 means Z.
struct DistElement {
  long level = 1;
  std::map<long, BigInt> coefficients;
  BigInt modulus = 0;

  void add_term(long n, const BigInt& c) {
    if (sgn(c) == 0) return;
    auto& slot = coefficients[n];
    slot = reduce(slot + c, modulus);
    if (sgn(slot) == 0) coefficients.erase(n);
  }

  void add_scaled(const DistElement& o, const BigInt& c) {
    if (o.level != level) throw Error(ErrorKind::LevelMismatch, "distribution elements at different levels");
    for (const auto& [n, v] : o.coefficients) add_term(n, v * c);
  }

  bool is_zero() const { return coefficients.empty(); }

  DistElement reduced(const BigInt& m) const {
    DistElement out{level, {}, m};
    for (const auto& [n, v] : coefficients) out.add_term(n, v);
    return out;
  }

  bool operator==(const DistElement& o) const {
    return level == o.level && modulus == o.modulus && coefficients == o.coefficients;
  }

  std::string to_string() const {
    if (coefficients.empty()) return "0";
    std::string out;
    for (const auto& [n, c] : coefficients) {
      const std::string sym = "[" + Fraction{n, level}.to_string() + "]";
      if (!out.empty()) out += sgn(c) < 0 ? " - " : " + ";
      else if (sgn(c) < 0) out += "-";
      const BigInt a = abs(c);
      out += (a == 1 ? "" : a.get_str() + "*") + sym;
    }
    return out;
  }
};

/// Rewrites arbitrary symbols at level f into the canonical basis
/// {[a] : a_{p1} != p - 1 for every p | f}.
class Normalizer {
 public:
  /// Picks which offending prime (by index into factors()) to rewrite at.
  using Strategy = std::function<std::size_t(long numerator, const std::vector<std::size_t>& offending)>;

  explicit Normalizer(long f) : f_(f), factors_(factorize(f)) {}

  long level() const { return f_; }
  const std::vector<PrimePower>& factors() const { return factors_; }

  std::vector<std::size_t> offending(long n) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < factors_.size(); ++k)
      if (leading_digit(n, f_, factors_[k]) == factors_[k].p - 1) out.push_back(k);
    return out;
  }

  bool is_basic(long n) const { return offending(n).empty(); }

  std::vector<long> basis() const {
    std::vector<long> out;
    for (long n = 0; n < f_; ++n)
      if (is_basic(n)) out.push_back(n);
    return out;
  }

  /// Normal form of [n/f], rewriting at the smallest offending prime; memoized.
  const DistElement& normalize(long n) {
    n = detail::mod_pos(n, f_);
    if (auto it = cache_.find(n); it != cache_.end()) return it->second;
    DistElement result{f_, {}, 0};
    const auto bad = offending(n);
    if (bad.empty()) {
      result.add_term(n, 1);
    } else {
      for (const auto& [m, c] : rewrite(n, factors_[bad.front()]))
        result.add_scaled(DistElement(normalize(m)), c);
    }
    return cache_.emplace(n, std::move(result)).first->second;
  }

  /// Uncached normal form under an arbitrary rewrite order.
  DistElement normalize_with(long n, const Strategy& choose) const {
    n = detail::mod_pos(n, f_);
    DistElement result{f_, {}, 0};
    const auto bad = offending(n);
    if (bad.empty()) {
      result.add_term(n, 1);
      return result;
    }
    for (const auto& [m, c] : rewrite(n, factors_[choose(n, bad)])) result.add_scaled(normalize_with(m, choose), c);
    return result;
  }

  /// Linear extension to a formal combination of (possibly non-basic) symbols.
  DistElement normalize(const DistElement& formal) {
    if (formal.level != f_) throw Error(ErrorKind::LevelMismatch, "normalizer level");
    DistElement out{f_, {}, formal.modulus};
    for (const auto& [n, c] : formal.coefficients) out.add_scaled(normalize(n), c);
    return out;
  }

 private:
  // [x] = [p x] - sum_{i=1}^{p-1} [x + i/p]
  std::vector<std::pair<long, BigInt>> rewrite(long n, const PrimePower& pp) const {
    std::vector<std::pair<long, BigInt>> out;
    out.emplace_back(pp.p * n % f_, BigInt(1));
    for (long i = 1; i < pp.p; ++i) out.emplace_back((n + i * (f_ / pp.p)) % f_, BigInt(-1));
    return out;
  }

  long f_;
  std::vector<PrimePower> factors_;
  std::unordered_map<long, DistElement> cache_;
};

/// Canonical basis of U(f) in ascending numerator order.
inline std::vector<Fraction> basis(long f) {
  std::vector<Fraction> out;
  for (long n : Normalizer(f).basis()) out.push_back({n, f});
  return out;
}

inline DistElement normalize_symbol(const Fraction& a) {
  Normalizer norm(a.level);
  return norm.normalize(a.numerator);
}

/// Downward-closed family of subsets of S, stored by its maximal members.
class OrderIdeal {
 public:
  OrderIdeal() = default;

  static OrderIdeal full(std::size_t s) { return from_maximal({full_subset(s)}); }

  /// I(n): all subsets of size at most n.
  static OrderIdeal up_to_size(std::size_t s, std::size_t n) {
    std::vector<Subset> sets;
    for (Subset t = 0; t <= full_subset(s); ++t)
      if (subset_size(t) == std::min(n, s)) sets.push_back(t);
    return from_maximal(sets);
  }

  static OrderIdeal from_maximal(std::vector<Subset> sets) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    OrderIdeal ideal;
    for (Subset t : sets) {
      const bool dominated =
          std::any_of(sets.begin(), sets.end(), [&](Subset u) { return u != t && is_subset(t, u); });
      if (!dominated) ideal.maximal_.push_back(t);
    }
    return ideal;
  }

  /// NotAnIdeal unless the family is closed under taking subsets.
  static OrderIdeal from_members(const std::vector<Subset>& members) {
    for (Subset t : members)
      for (Subset u = t;; u = (u - 1) & t) {
        if (std::find(members.begin(), members.end(), u) == members.end())
          throw Error(ErrorKind::NotAnIdeal, "family is not closed under subsets");
        if (u == 0) break;
      }
    return from_maximal(members);
  }

  const std::vector<Subset>& maximal_sets() const { return maximal_; }

  bool contains(Subset t) const {
    return std::any_of(maximal_.begin(), maximal_.end(), [&](Subset u) { return is_subset(t, u); });
  }

  std::vector<Subset> members(std::size_t s) const {
    std::vector<Subset> out;
    for (Subset t = 0; t <= full_subset(s); ++t)
      if (contains(t)) out.push_back(t);
    return out;
  }

  OrderIdeal intersect(const OrderIdeal& o) const {
    std::vector<Subset> sets;
    for (Subset a : maximal_)
      for (Subset b : o.maximal_) sets.push_back(a & b);
    return from_maximal(sets);
  }

  void validate(std::size_t s) const {
    for (Subset t : maximal_)
      if (!is_subset(t, full_subset(s))) throw Error(ErrorKind::NotAnIdeal, "ideal mentions primes outside S");
  }

  bool operator==(const OrderIdeal&) const = default;

 private:
  std::vector<Subset> maximal_;
};

/// U_S at level r = prod l_i, with normal forms of every symbol precomputed so
/// the object is immutable after construction.
class UniversalDistribution {
 public:
  explicit UniversalDistribution(PrimeConfig cfg) : group_(cfg), r_(cfg.r()) {
    Normalizer norm(r_);
    basis_ = norm.basis();
    for (std::size_t k = 0; k < basis_.size(); ++k) index_.emplace(basis_[k], k);
    normal_forms_.reserve(r_);
    for (long n = 0; n < r_; ++n) normal_forms_.push_back(norm.normalize(n));
  }

  const PrimeConfig& config() const { return group_.config(); }
  const GaloisGroup& group() const { return group_; }
  std::size_t s() const { return group_.s(); }
  long level() const { return r_; }
  const std::vector<long>& basis() const { return basis_; }
  std::size_t rank() const { return basis_.size(); }

  std::optional<std::size_t> index_of(long n) const {
    auto it = index_.find(n);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  long digit(long n, std::size_t i) const { return crt_digit(config(), n, i); }

  std::vector<long> digits(long n) const {
    std::vector<long> out;
    for (std::size_t i = 0; i < s(); ++i) out.push_back(digit(n, i));
    return out;
  }

  long from_digits(const std::vector<long>& a) const { return crt_compose(config(), a); }
  long unit_fraction_sum(Subset t) const { return udcoh::unit_fraction_sum(config(), t); }
  Subset support(long n) const { return crt_support(config(), n); }

  long act(const GroupElement& g, long n) const {
    group_.check(g);
    return static_cast<long>((__int128)group_.multiplier(g) * detail::mod_pos(n, r_) % r_);
  }

  const DistElement& normalize(long n) const { return normal_forms_.at(detail::mod_pos(n, r_)); }

  DistElement normalize(const DistElement& formal) const {
    DistElement out{r_, {}, formal.modulus};
    for (const auto& [n, c] : formal.coefficients) out.add_scaled(normalize(n), c);
    return out;
  }

  /// x[a]: the group ring element applied symbol by symbol, then normalized.
  DistElement apply(const GroupRingElement& x, long n) const {
    DistElement formal{r_, {}, x.modulus};
    for (const auto& [g, c] : x.coefficients) formal.add_term(act(g, n), c);
    return normalize(formal);
  }

  /// Coordinates of a normalized element in the sub-basis `rows`.
  Vector coordinates(const DistElement& v, const std::vector<long>& rows) const {
    Vector out(rows.size(), 0);
    for (const auto& [n, c] : v.coefficients) {
      auto it = std::lower_bound(rows.begin(), rows.end(), n);
      if (it == rows.end() || *it != n) throw Error(ErrorKind::IndexOutOfRange, "symbol outside the sub-basis");
      out[static_cast<std::size_t>(it - rows.begin())] = c;
    }
    return out;
  }

  Vector coordinates(const DistElement& v) const { return coordinates(v, basis_); }

  DistElement from_coordinates(const Vector& x, BigInt modulus = 0) const {
    DistElement out{r_, {}, std::move(modulus)};
    for (std::size_t k = 0; k < x.size(); ++k) out.add_term(basis_[k], x[k]);
    return out;
  }

  /// Matrix of g on the sub-basis `rows` (which must be G-stable).
  ExactMatrix action_matrix(const GroupElement& g, const std::vector<long>& rows) const {
    MatrixBuilder b(rows.size(), rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto col = coordinates(normalize(act(g, rows[k])), rows);
      for (std::size_t i = 0; i < rows.size(); ++i) b.add(i, k, col[i]);
    }
    return b.build();
  }

  ExactMatrix action_matrix(const GroupElement& g) const { return action_matrix(g, basis_); }

  /// Matrix of a group ring element on the sub-basis `rows`.
  ExactMatrix action_matrix(const GroupRingElement& x, const std::vector<long>& rows) const {
    MatrixBuilder b(rows.size(), rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto col = coordinates(apply(x, rows[k]), rows);
      for (std::size_t i = 0; i < rows.size(); ++i) b.add(i, k, col[i]);
    }
    return b.build().reduced(x.modulus);
  }

 private:
  GaloisGroup group_;
  long r_;
  std::vector<long> basis_;
  std::unordered_map<long, std::size_t> index_;
  std::vector<DistElement> normal_forms_;
};

inline ExactMatrix galois_action_matrix(const UniversalDistribution& u, const GroupElement& g) {
  if (g.exponents.size() != u.s()) throw Error(ErrorKind::LevelMismatch, "group element does not match the level");
  return u.action_matrix(g);
}

/// Basis symbols a with supp a in the ideal: a basis of U_S(I).
inline std::vector<long> ideal_basis(const UniversalDistribution& u, const OrderIdeal& ideal) {
  ideal.validate(u.s());
  std::vector<long> out;
  for (long n : u.basis())
    if (ideal.contains(u.support(n))) out.push_back(n);
  return out;
}

struct FixedPoints {
  std::vector<DistElement> generators;
  CohomologyGroup structure;
};

/// Stacked rho(sigma_i) - I over i in S; its kernel mod M is (U/MU)^G.
inline ExactMatrix invariance_conditions(const UniversalDistribution& u) {
  const std::size_t n = u.rank();
  ExactMatrix a(0, n);
  for (std::size_t i = 0; i < u.s(); ++i) a = a.vstack(u.action_matrix(u.group().sigma(i)) - ExactMatrix::identity(n));
  return a;
}

inline FixedPoints fixed_points(const UniversalDistribution& u, long modulus) {
  validate_modulus(u.config(), modulus);
  FixedPoints out;
  if (modulus == 1) return out;
  const ExactMatrix a = invariance_conditions(u);
  for (const auto& col : kernel_basis_mod(a, modulus).columns()) out.generators.push_back(u.from_coordinates(col, modulus));
  out.structure = homology_at(ExactMatrix(u.rank(), 0), a, modulus);
  return out;
}

/// D_T [sum_{i in T} 1/l_i] mod M for every T subset of S, in ascending mask order.
inline std::vector<DistElement> theorem_b_family(const UniversalDistribution& u, long modulus) {
  validate_modulus(u.config(), modulus);
  std::vector<DistElement> out;
  for (Subset t = 0; t <= full_subset(u.s()); ++t)
    out.push_back(u.apply(derivative_element(u.group(), t, modulus), u.unit_fraction_sum(t)));
  return out;
}

struct InvariantBasisReport {
  std::vector<DistElement> family;
  bool fixed = false;
  bool independent = false;
  bool spans = false;
  CohomologyGroup invariants;

  bool pass() const { return fixed && independent && spans; }
};

inline InvariantBasisReport verify_theorem_b(const UniversalDistribution& u, long modulus) {
  InvariantBasisReport rep;
  rep.family = theorem_b_family(u, modulus);
  const BigInt m = modulus;
  const ExactMatrix conditions = invariance_conditions(u);
  std::vector<Vector> cols;
  for (const auto& v : rep.family) cols.push_back(u.coordinates(v));
  const ExactMatrix family = ExactMatrix::from_columns(cols, u.rank());

  rep.fixed = (conditions * family).is_zero_mod(m);

  const auto factors = invariant_factors(family);
  rep.independent = factors.size() == cols.size() &&
                    std::all_of(factors.begin(), factors.end(), [&](const BigInt& d) { return detail::gcd(d, m) == 1; });

  const auto fp = fixed_points(u, modulus);
  rep.invariants = fp.structure;
  const auto expected = CohomologyGroup::from_cyclic_orders(0, std::vector<BigInt>(cols.size(), m));
  SmithSolver solver(family, m);
  rep.spans = fp.structure == expected && std::all_of(fp.generators.begin(), fp.generators.end(), [&](const auto& g) {
                return solver.solve(u.coordinates(g)).has_value();
              });
  return rep;
}

enum class XgVariant { X, Y };

namespace detail {

// X_p[y] = sum_{i=0}^{p-1} [(y + i)/p] on formal sums in A(f) whose numerators are divisible by p.
inline std::map<long, BigInt> apply_xp(const std::map<long, BigInt>& v, long p, long f) {
  std::map<long, BigInt> out;
  for (const auto& [n, c] : v) {
    if (n % p) throw Error(ErrorKind::LevelMismatch, "X_p applied outside (p/f)Z");
    for (long i = 0; i < p; ++i) out[(n / p + i * (f / p)) % f] += c;
  }
  return out;
}

inline std::map<long, BigInt> apply_yp(const std::map<long, BigInt>& v, long p, long f) {
  auto out = v;
  for (const auto& [n, c] : apply_xp(v, p, f)) out[n] -= c;
  return out;
}

}  // namespace detail

/// Columns X_g[x] (or Y_g[x]) for g | f and basic x in (g/f)Z, ordered by
/// (g, x) ascending, written in the standard basis {[y] : y in (1/f)Z/Z} of
/// the free abelian group A(f) on all symbols.
inline ExactMatrix xg_basis_matrix(long f, XgVariant variant) {
  const auto fac = factorize(f);
  const Normalizer norm(f);
  std::vector<Vector> cols;
  for (long g = 1; g <= f; ++g) {
    if (f % g) continue;
    for (long n = 0; n < f; n += g) {
      if (!norm.is_basic(n)) continue;
      std::map<long, BigInt> v{{n, BigInt(1)}};
      long rest = g;
      for (const auto& pp : fac)
        while (rest % pp.p == 0) {
          v = variant == XgVariant::X ? detail::apply_xp(v, pp.p, f) : detail::apply_yp(v, pp.p, f);
          rest /= pp.p;
        }
      Vector col(f, 0);
      for (const auto& [m, c] : v) col[m] += c;
      cols.push_back(std::move(col));
    }
  }
  return ExactMatrix::from_columns(cols, f);
}

/// Matrix of U(g) -> U(f), [x] -> [x], in the canonical bases.
inline ExactMatrix level_inclusion_matrix(long g, long f) {
  if (g < 1 || f % g) throw Error(ErrorKind::LevelMismatch, "inclusion needs g | f");
  Normalizer norm(f);
  const auto rows = norm.basis();
  const auto cols = Normalizer(g).basis();
  MatrixBuilder b(rows.size(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (const auto& [n, c] : norm.normalize(cols[k] * (f / g)).coefficients) {
      const auto it = std::lower_bound(rows.begin(), rows.end(), n);
      b.add(static_cast<std::size_t>(it - rows.begin()), k, c);
    }
  return b.build();
}

}  // namespace udcoh
