#pragma once

// The double complex K = Hom_G(P, L) with total differential d + delta, the
// complex Hom_G(P, U_S(I)) it resolves, and lifting of cocycles from the
// quotient spanned by the symbols [0, T, e] with supp e containing T.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "udcoh/anderson.hpp"
#include "udcoh/resolution.hpp"

namespace udcoh {

/// [a, T, e]: the cochain sending 1_e to [a, T].
struct KSymbol {
  LSymbol l;
  MultiIndex e;

  auto operator<=>(const KSymbol&) const = default;
  bool operator==(const KSymbol&) const = default;
};

/// Hom_G(P_S, U_S(I)) with U_S(I) written in its canonical basis.
inline ResolutionCochains hom_P_U(const UniversalDistribution& u, const OrderIdeal& ideal) {
  const auto rows = ideal_basis(u, ideal);
  const auto& group = u.group();
  std::vector<CyclicAction> acts;
  for (std::size_t i = 0; i < u.s(); ++i)
    acts.push_back({ExactMatrix::identity(rows.size()) - u.action_matrix(group.sigma(i), rows),
                    u.action_matrix(norm_at(group, i), rows)});
  return ResolutionCochains(u.s(), full_subset(u.s()), rows.size(), std::move(acts));
}

inline ResolutionCochains hom_P_U(const UniversalDistribution& u) { return hom_P_U(u, OrderIdeal::full(u.s())); }

/// A cochain of K in one total degree, as residues on the symbols of that degree.
struct CocycleClass {
  int degree = 0;
  std::map<KSymbol, BigInt> terms;
  BigInt modulus = 0;

  void add(const KSymbol& sym, const BigInt& c) {
    auto& slot = terms[sym];
    slot = reduce(slot + c, modulus);
    if (sgn(slot) == 0) terms.erase(sym);
  }
};

/// A cochain of Hom_G(P_S, U_S(I)) in one degree.
struct HomCochain {
  int degree = 0;
  Vector values;
  BigInt modulus = 0;
};

/// K(I) in total degrees -s .. n_max + 1, with differentials out of degrees
/// -s .. n_max. Degree n holds [a, T, e] with deg e = n + |T|.
class KComplex {
 public:
  KComplex(const PrimeConfig& cfg, OrderIdeal ideal, int n_max)
      : l_(cfg, std::move(ideal)), group_(cfg), n_max_(n_max), r_(cfg.r()) {
    const int s = l_.s();
    for (int n = -s; n <= n_max + 1; ++n) {
      std::vector<KSymbol> list;
      for (int k = 0; k <= s; ++k) {
        if (n + k < 0) continue;
        const auto es = multi_indices(cfg.s(), static_cast<unsigned>(n + k), full_subset(cfg.s()));
        for (const auto& sym : l_.symbols(-k))
          for (const auto& e : es) list.push_back({sym, e});
      }
      std::map<KSymbol, std::size_t> idx;
      for (std::size_t j = 0; j < list.size(); ++j) idx.emplace(list[j], j);
      symbols_.push_back(std::move(list));
      index_.push_back(std::move(idx));
    }
    for (int n = -s; n <= n_max; ++n) {
      d_.push_back(build_l_part(n, Part::Full));
      d1_.push_back(build_l_part(n, Part::First));
      d2_.push_back(build_l_part(n, Part::Second));
      delta_.push_back(build_delta(n));
    }
  }

  const LComplex& l() const { return l_; }
  const GaloisGroup& group() const { return group_; }
  const PrimeConfig& config() const { return group_.config(); }
  const OrderIdeal& ideal() const { return l_.ideal(); }
  int s() const { return l_.s(); }
  int n_max() const { return n_max_; }

  const std::vector<KSymbol>& symbols(int n) const {
    static const std::vector<KSymbol> none;
    return stored(n) ? symbols_[static_cast<std::size_t>(n + s())] : none;
  }

  std::size_t dim(int n) const { return symbols(n).size(); }

  std::optional<std::size_t> index_of(int n, const KSymbol& sym) const {
    if (!stored(n)) return std::nullopt;
    const auto& idx = index_[static_cast<std::size_t>(n + s())];
    auto it = idx.find(sym);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  static int degree(const KSymbol& sym) {
    return static_cast<int>(sym.e.degree()) - static_cast<int>(subset_size(sym.l.t));
  }

  /// Second filtration index p2 of the underlying L symbol.
  int p2(const KSymbol& sym) const { return l_.bidegree(sym.l).p2; }

  /// [0, T, e] with supp e containing T.
  static bool is_quotient_symbol(const KSymbol& sym) { return sym.l.numerator == 0 && is_subset(sym.l.t, sym.e.support()); }

  ExactMatrix d(int n) const { return pick(d_, n); }
  ExactMatrix d1(int n) const { return pick(d1_, n); }
  ExactMatrix d2(int n) const { return pick(d2_, n); }
  ExactMatrix delta(int n) const { return pick(delta_, n); }
  ExactMatrix total(int n) const { return d(n) + delta(n); }

  CohomologyGroup cohomology(int n, const BigInt& modulus = 0) const {
    require(n);
    return homology_at(total(n - 1), total(n), modulus);
  }

  /// u: K^n -> Hom(P, U_S(I))^n, [a, {}, e] -> [a] in block e, zero on T nonempty.
  ExactMatrix augmentation(const UniversalDistribution& u, const ResolutionCochains& hom, int n) const {
    const auto rows = ideal_basis(u, ideal());
    MatrixBuilder b(hom.dim(n), dim(n));
    const auto& cols = symbols(n);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& sym = cols[c];
      if (sym.l.t != 0) continue;
      const std::size_t off = *hom.offset(sym.e);
      const auto coords = u.coordinates(u.normalize(sym.l.numerator), rows);
      for (std::size_t k = 0; k < coords.size(); ++k) b.add(off + k, c, coords[k]);
    }
    return b.build();
  }

  Vector to_vector(const CocycleClass& c) const {
    Vector v(dim(c.degree), 0);
    for (const auto& [sym, x] : c.terms) {
      const auto j = index_of(c.degree, sym);
      if (!j) throw Error(ErrorKind::IndexOutOfRange, "symbol outside the complex");
      v[*j] = x;
    }
    return v;
  }

  CocycleClass from_vector(int n, const Vector& v, const BigInt& modulus) const {
    CocycleClass c{n, {}, modulus};
    for (std::size_t j = 0; j < v.size(); ++j)
      if (sgn(v[j]) != 0) c.add(symbols(n)[j], v[j]);
    return c;
  }

  void require(int n) const {
    if (n < -s() || n > n_max_)
      throw Error(ErrorKind::IndexOutOfRange, "degree " + std::to_string(n) + " outside the built range");
  }

 private:
  enum class Part { Full, First, Second };

  bool stored(int n) const { return n >= -s() && n <= n_max_ + 1; }

  ExactMatrix pick(const std::vector<ExactMatrix>& v, int n) const {
    if (n >= -s() && n <= n_max_) return v[static_cast<std::size_t>(n + s())];
    if (n == -s() - 1) return ExactMatrix(dim(-s()), 0);
    throw Error(ErrorKind::IndexOutOfRange, "differential out of degree " + std::to_string(n) + " not built");
  }

  std::size_t row_of(int n, const KSymbol& sym) const {
    const auto j = index_of(n, sym);
    if (!j) throw Error(ErrorKind::IndexOutOfRange, "differential leaves the complex");
    return *j;
  }

  // the L differential applied to [a, T] with e kept
  ExactMatrix build_l_part(int n, Part part) const {
    MatrixBuilder b(dim(n + 1), dim(n));
    std::vector<ExactMatrix> by_size;
    for (int k = 0; k <= s(); ++k) {
      const ExactMatrix m = part == Part::Full ? l_.d(-k) : part == Part::First ? l_.d1(-k) : l_.d2(-k);
      by_size.push_back(m.transpose());
    }
    const auto& cols = symbols(n);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& sym = cols[c];
      const int k = static_cast<int>(subset_size(sym.l.t));
      if (k == 0) continue;
      const std::size_t j = *l_.index_of(-k, sym.l);
      for (const auto& [row, v] : by_size[static_cast<std::size_t>(k)].row(j))
        b.add(row_of(n + 1, {l_.symbols(-k + 1)[row], sym.e}), c, v);
    }
    return b.build();
  }

  // delta[a,T,e] = (-1)^{|T|} sum_i (-1)^{omega(e)_i} [lambda_i a, T, e + eps_i]
  ExactMatrix build_delta(int n) const {
    MatrixBuilder b(dim(n + 1), dim(n));
    const auto& cols = symbols(n);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& sym = cols[c];
      const int outer = signs::total_degree(sym.l.t);
      for (std::size_t i = 0; i < group_.s(); ++i) {
        const int sign = outer * signs::koszul(sym.e, i);
        const MultiIndex target = sym.e.plus_unit(i);
        auto put = [&](long power, int coeff) {
          const long a = static_cast<long>((__int128)group_.multiplier(group_.sigma(i, power)) * sym.l.numerator % r_);
          b.add(row_of(n + 1, {{a, sym.l.t}, target}), c, sign * coeff);
        };
        if (sym.e.e[i] % 2 == 0) {
          put(0, 1);
          put(1, -1);
        } else {
          for (long k = 0; k <= config().primes[i] - 2; ++k) put(k, 1);
        }
      }
    }
    return b.build();
  }

  LComplex l_;
  GaloisGroup group_;
  int n_max_;
  long r_;
  std::vector<std::vector<KSymbol>> symbols_;
  std::vector<std::map<KSymbol, std::size_t>> index_;
  std::vector<ExactMatrix> d_, d1_, d2_, delta_;
};

inline KComplex build_K(const PrimeConfig& cfg, long modulus, const OrderIdeal& ideal, int n_max) {
  validate_modulus(cfg, modulus);
  return KComplex(cfg, ideal, n_max);
}

namespace detail {

inline Vector reduce_all(Vector v, const BigInt& modulus) {
  for (auto& x : v) x = reduce(x, modulus);
  return v;
}

inline bool is_zero_mod(const Vector& v, const BigInt& modulus) {
  return std::all_of(v.begin(), v.end(), [&](const BigInt& x) { return sgn(reduce(x, modulus)) == 0; });
}

// x D_T applied to [a, T', e] with the group ring acting on a
inline void add_group_ring_image(CocycleClass& out, const GaloisGroup& group, const GroupRingElement& x,
                                 const KSymbol& sym, const BigInt& coeff) {
  const long r = group.config().r();
  for (const auto& [g, c] : x.coefficients) {
    const long a = static_cast<long>((__int128)group.multiplier(g) * sym.l.numerator % r);
    out.add({{a, sym.l.t}, sym.e}, c * coeff);
  }
}

}  // namespace detail

/// C = [0, T, e] + s with s supported off the quotient symbols and (d + delta) C = 0 mod M.
inline CocycleClass lift_cocycle(const KComplex& k, long modulus, Subset t, const MultiIndex& e) {
  validate_modulus(k.config(), modulus);
  if (e.size() != k.config().s() || !is_subset(t, e.support()))
    throw Error(ErrorKind::BadIndex, "supp e must contain T");
  if (!k.ideal().contains(t)) throw Error(ErrorKind::NotAnIdeal, "T outside the order ideal");
  const KSymbol lead{{0, t}, e};
  const int n = KComplex::degree(lead);
  k.require(n);
  const ExactMatrix dn = k.total(n);
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < k.dim(n); ++j)
    if (!KComplex::is_quotient_symbol(k.symbols(n)[j])) free.push_back(j);
  Vector rhs = dn.column(*k.index_of(n, lead));
  for (auto& x : rhs) x = -x;
  const auto sol = solve_mod(dn.select_cols(free), rhs, modulus);
  if (!sol) throw Error(ErrorKind::LiftFailed, "no lift of [0," + std::to_string(t) + "," + e.to_string() + "]");
  CocycleClass out{n, {}, modulus};
  out.add(lead, 1);
  for (std::size_t j = 0; j < free.size(); ++j)
    if (sgn((*sol)[j]) != 0) out.add(k.symbols(n)[free[j]], (*sol)[j]);
  return out;
}

/// sum_{T' in T} (-1)^{|T'|(2|T|-|T'|-1)/2} D_{T'} [sum_{i in T'} r_{T-T'}/l_i, T - T', e_{T-T'}],
/// checked to be killed by d1 + delta mod M.
inline CocycleClass explicit_prime_cocycle(const KComplex& k, long modulus, Subset t) {
  validate_modulus(k.config(), modulus);
  if (!k.ideal().contains(t)) throw Error(ErrorKind::NotAnIdeal, "T outside the order ideal");
  const auto& cfg = k.config();
  const std::size_t s = cfg.s();
  const long r = cfg.r();
  CocycleClass out{0, {}, modulus};
  for (Subset sub = t;; sub = (sub - 1) & t) {
    const Subset rest = t & ~sub;
    long a = 0;
    for (std::size_t i = 0; i < s; ++i)
      if (subset_contains(sub, i))
        a = static_cast<long>((a + (__int128)cfg.r_of(rest) * (r / cfg.primes[i])) % r);
    const int sign = signs::prime_cocycle(subset_size(t), subset_size(sub));
    detail::add_group_ring_image(out, k.group(), derivative_element(k.group(), sub, modulus),
                                 {{a, rest}, MultiIndex::indicator(s, rest)}, sign);
    if (sub == 0) break;
  }
  k.require(0);
  const Vector v = k.to_vector(out);
  if (!detail::is_zero_mod((k.d1(0) + k.delta(0)) * v, modulus))
    throw Error(ErrorKind::NotACocycle, "explicit prime cocycle is not closed under d1 + delta");
  return out;
}

/// The three search spaces tried, in order, for the tail of a prime lift.
enum class TailSpace { HigherFiltration, Subcomplex, Everything };

inline std::string to_string(TailSpace t) {
  switch (t) {
    case TailSpace::HigherFiltration: return "higher-filtration";
    case TailSpace::Subcomplex: return "subcomplex";
    case TailSpace::Everything: return "everything";
  }
  return "?";
}

struct PrimeLift {
  CocycleClass leading;
  CocycleClass cocycle;
  TailSpace tail_space = TailSpace::HigherFiltration;
  DistElement image;
  DistElement target;
  int leading_sign = 0;  // epsilon with u(C) - epsilon D_T[sum 1/l_i] supported on proper subsets; 0 if none
};

/// Lifts the explicit prime cocycle to a (d + delta)-cocycle of degree 0 and
/// evaluates it in U/MU.
inline PrimeLift lift_prime_cocycle(const KComplex& k, const UniversalDistribution& u, long modulus, Subset t) {
  PrimeLift out;
  out.leading = explicit_prime_cocycle(k, modulus, t);
  const int s = k.s();
  const auto& syms = k.symbols(0);
  const ExactMatrix d0 = k.total(0);
  Vector rhs = d0 * k.to_vector(out.leading);
  for (auto& x : rhs) x = -x;
  auto admissible = [&](TailSpace space, const KSymbol& sym) {
    if (space == TailSpace::Everything) return true;
    if (KComplex::is_quotient_symbol(sym)) return false;
    if (space == TailSpace::Subcomplex) return true;
    return is_subset(u.support(sym.l.numerator) | sym.l.t, t) && k.p2(sym) > s - static_cast<int>(subset_size(t));
  };
  std::optional<Vector> sol;
  std::vector<std::size_t> cols;
  for (auto space : {TailSpace::HigherFiltration, TailSpace::Subcomplex, TailSpace::Everything}) {
    cols.clear();
    for (std::size_t j = 0; j < syms.size(); ++j)
      if (admissible(space, syms[j])) cols.push_back(j);
    sol = solve_mod(d0.select_cols(cols), rhs, modulus);
    if (sol) {
      out.tail_space = space;
      break;
    }
  }
  if (!sol) throw Error(ErrorKind::LiftFailed, "prime cocycle does not lift to a total cocycle");
  out.cocycle = out.leading;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (sgn((*sol)[j]) != 0) out.cocycle.add(syms[cols[j]], (*sol)[j]);

  out.image = DistElement{u.level(), {}, modulus};
  for (const auto& [sym, c] : out.cocycle.terms)
    if (sym.l.t == 0) out.image.add_scaled(u.normalize(sym.l.numerator), c);
  out.image = out.image.reduced(modulus);
  out.target = u.apply(derivative_element(u.group(), t, modulus), u.unit_fraction_sum(t)).reduced(modulus);
  for (int eps : {1, -1}) {
    DistElement rem = out.image;
    rem.add_scaled(out.target, -eps);
    rem = rem.reduced(modulus);
    bool proper = true;
    for (const auto& [n, c] : rem.coefficients) proper = proper && (u.support(n) & t) == u.support(n) && u.support(n) != t;
    if (proper) {
      out.leading_sign = eps;
      break;
    }
  }
  return out;
}

/// u(C) as a cochain of Hom(P, U_S(I)) in degree deg C.
inline HomCochain evaluate(const KComplex& k, const UniversalDistribution& u, const ResolutionCochains& hom,
                           const CocycleClass& c) {
  const ExactMatrix aug = k.augmentation(u, hom, c.degree);
  return {c.degree, detail::reduce_all(aug * k.to_vector(c), c.modulus), c.modulus};
}

}  // namespace udcoh
