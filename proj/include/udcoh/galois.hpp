#pragma once

// The group G_S = prod_i (Z/l_i)^x written multiplicatively over fixed
// generators sigma_i, its integral group ring, the elements N_i, D_i, Fr_i,
// and multi-index bookkeeping over S.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "udcoh/errors.hpp"
#include "udcoh/exactlin.hpp"

namespace udcoh {

/// Subset of S as a bitmask; bit i is the i-th prime in ascending order.
using Subset = std::uint32_t;

inline std::size_t subset_size(Subset t) { return static_cast<std::size_t>(std::popcount(t)); }
inline bool subset_contains(Subset t, std::size_t i) { return (t >> i) & 1u; }
inline bool is_subset(Subset a, Subset b) { return (a & ~b) == 0; }
inline Subset full_subset(std::size_t s) { return s >= 32 ? ~Subset{0} : (Subset{1} << s) - 1; }

namespace detail {

inline long mod_pos(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline long pow_mod(long base, long exp, long m) {
  long result = 1 % m;
  base = mod_pos(base, m);
  while (exp > 0) {
    if (exp & 1) result = static_cast<long>((__int128)result * base % m);
    base = static_cast<long>((__int128)base * base % m);
    exp >>= 1;
  }
  return result;
}

inline long inv_mod(long a, long m) {
  long r0 = mod_pos(a, m), r1 = m, s0 = 1, s1 = 0;
  while (r1 != 0) {
    const long q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    s0 = std::exchange(s1, s0 - q * s1);
  }
  if (r0 != 1 && m != 1) throw Error(ErrorKind::GcdNotOne, std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return mod_pos(s0, m);
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline long least_primitive_root(long p) {
  if (p == 2) return 1;
  const auto qs = prime_factors(p - 1);
  for (long g = 2; g < p; ++g) {
    bool ok = std::all_of(qs.begin(), qs.end(), [&](long q) { return pow_mod(g, (p - 1) / q, p) != 1; });
    if (ok) return g;
  }
  throw Error(ErrorKind::BadPrime, "no primitive root mod " + std::to_string(p));
}

inline long discrete_log(long value, long generator, long p) {
  value = mod_pos(value, p);
  long cur = 1;
  for (long k = 0; k < p - 1; ++k) {
    if (cur == value) return k;
    cur = cur * generator % p;
  }
  throw Error(ErrorKind::IndexOutOfRange, "discrete log does not exist");
}

}  // namespace detail

/// The prime set S (ascending, which fixes the total order omega), the modulus
/// M and the chosen generator sigma_i of each (Z/l_i)^x.
struct PrimeConfig {
  std::vector<long> primes;
  long modulus = 1;
  std::vector<long> generators;

  std::size_t s() const { return primes.size(); }

  long r() const {
    long r = 1;
    for (long p : primes) r *= p;
    return r;
  }

  long r_of(Subset t) const {
    long r = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (subset_contains(t, i)) r *= primes[i];
    return r;
  }

  std::size_t index_of_prime(long p) const {
    auto it = std::find(primes.begin(), primes.end(), p);
    if (it == primes.end()) throw Error(ErrorKind::IndexOutOfRange, std::to_string(p) + " is not in S");
    return static_cast<std::size_t>(it - primes.begin());
  }

  /// m_T = gcd{l_i - 1 : i in T}; 0 for the empty set.
  long gcd_minus_one(Subset t) const {
    long g = 0;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (subset_contains(t, i)) g = std::gcd(g, primes[i] - 1);
    return g;
  }

  std::string describe() const {
    std::string out = "S={";
    for (std::size_t i = 0; i < primes.size(); ++i) out += (i ? "," : "") + std::to_string(primes[i]);
    return out + "}, M=" + std::to_string(modulus);
  }
};

/// BadModulus unless M = 0 (integral) or M divides every l_i - 1.
inline void validate_modulus(const PrimeConfig& cfg, long modulus) {
  if (modulus < 0) throw Error(ErrorKind::BadModulus, "negative modulus");
  if (modulus <= 1) return;
  for (long p : cfg.primes)
    if ((p - 1) % modulus != 0)
      throw Error(ErrorKind::BadModulus, std::to_string(modulus) + " does not divide " + std::to_string(p) + " - 1");
}

/// Validates the primes (odd, prime, distinct), sorts them ascending and picks
/// the least primitive root for each.
inline PrimeConfig make_config(std::vector<long> primes, long modulus) {
  if (modulus < 1) throw Error(ErrorKind::BadModulus, "modulus must be positive");
  for (long p : primes) {
    if (p == 2) throw Error(ErrorKind::BadPrime, "2 is not an odd prime");
    if (!detail::is_prime(p)) throw Error(ErrorKind::BadPrime, std::to_string(p) + " is not prime");
  }
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
    throw Error(ErrorKind::BadPrime, "repeated prime");
  if (primes.size() > 16) throw Error(ErrorKind::BadPrime, "too many primes");
  PrimeConfig cfg;
  cfg.primes = std::move(primes);
  cfg.modulus = modulus;
  for (long p : cfg.primes) cfg.generators.push_back(detail::least_primitive_root(p));
  validate_modulus(cfg, modulus);
  return cfg;
}

/// a_i with n/r = sum_i a_i / l_i (mod 1).
inline long crt_digit(const PrimeConfig& cfg, long n, std::size_t i) {
  const long r = cfg.r(), li = cfg.primes.at(i);
  return detail::mod_pos(n, li) * detail::inv_mod((r / li) % li, li) % li;
}

/// Numerator of sum_i a_i / l_i at level r.
inline long crt_compose(const PrimeConfig& cfg, const std::vector<long>& a) {
  const long r = cfg.r();
  long n = 0;
  for (std::size_t i = 0; i < cfg.s(); ++i) n = (n + detail::mod_pos(a.at(i), cfg.primes[i]) * (r / cfg.primes[i])) % r;
  return n;
}

/// supp(n/r) = {i : l_i divides the order of n/r}.
inline Subset crt_support(const PrimeConfig& cfg, long n) {
  Subset t = 0;
  for (std::size_t i = 0; i < cfg.s(); ++i)
    if (detail::mod_pos(n, cfg.primes[i]) != 0) t |= Subset{1} << i;
  return t;
}

/// sum_{i in T} 1/l_i at level r.
inline long unit_fraction_sum(const PrimeConfig& cfg, Subset t) {
  const long r = cfg.r();
  long n = 0;
  for (std::size_t i = 0; i < cfg.s(); ++i)
    if (subset_contains(t, i)) n += r / cfg.primes[i];
  return n % r;
}

/// prod_i sigma_i^{k_i}, exponents reduced mod l_i - 1.
struct GroupElement {
  std::vector<long> exponents;

  auto operator<=>(const GroupElement&) const = default;
  bool operator==(const GroupElement&) const = default;
};

/// Arithmetic in G_S for a fixed configuration.
class GaloisGroup {
 public:
  explicit GaloisGroup(PrimeConfig cfg) : cfg_(std::move(cfg)) {}

  const PrimeConfig& config() const { return cfg_; }
  std::size_t s() const { return cfg_.s(); }

  long order() const {
    long n = 1;
    for (long p : cfg_.primes) n *= p - 1;
    return n;
  }

  GroupElement identity() const { return {std::vector<long>(s(), 0)}; }

  GroupElement sigma(std::size_t i, long power = 1) const {
    check_index(i);
    auto g = identity();
    g.exponents[i] = detail::mod_pos(power, cfg_.primes[i] - 1);
    return g;
  }

  GroupElement mul(const GroupElement& g, const GroupElement& h) const {
    check(g);
    check(h);
    GroupElement out = identity();
    for (std::size_t i = 0; i < s(); ++i)
      out.exponents[i] = detail::mod_pos(g.exponents[i] + h.exponents[i], cfg_.primes[i] - 1);
    return out;
  }

  GroupElement inverse(const GroupElement& g) const {
    check(g);
    GroupElement out = identity();
    for (std::size_t i = 0; i < s(); ++i) out.exponents[i] = detail::mod_pos(-g.exponents[i], cfg_.primes[i] - 1);
    return out;
  }

  /// Fr_i, lifted with trivial i-component: on the l_j-part (j != i) it acts
  /// as multiplication by l_i.
  GroupElement frobenius(std::size_t i) const {
    check_index(i);
    auto g = identity();
    for (std::size_t j = 0; j < s(); ++j) {
      if (j == i) continue;
      g.exponents[j] = detail::discrete_log(cfg_.primes[i] % cfg_.primes[j], cfg_.generators[j], cfg_.primes[j]);
    }
    return g;
  }

  /// The residue x mod l_i by which g multiplies the l_i-component.
  long component_multiplier(const GroupElement& g, std::size_t i) const {
    return detail::pow_mod(cfg_.generators[i], g.exponents[i], cfg_.primes[i]);
  }

  /// The residue x mod r with g(zeta) = zeta^x for zeta of order r.
  long multiplier(const GroupElement& g) const {
    check(g);
    const long r = cfg_.r();
    long x = 0;
    for (std::size_t i = 0; i < s(); ++i) {
      const long li = cfg_.primes[i];
      const long cofactor = r / li;
      const long coeff = component_multiplier(g, i) * detail::inv_mod(cofactor % li, li) % li;
      x = (x + coeff * cofactor) % r;
    }
    return x;
  }

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    GroupElement g = identity();
    while (true) {
      out.push_back(g);
      std::size_t i = 0;
      while (i < s() && ++g.exponents[i] == cfg_.primes[i] - 1) g.exponents[i++] = 0;
      if (i == s()) break;
    }
    return out;
  }

  void check(const GroupElement& g) const {
    if (g.exponents.size() != s()) throw Error(ErrorKind::LevelMismatch, "group element has wrong arity");
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= s()) throw Error(ErrorKind::IndexOutOfRange, "prime index " + std::to_string(i));
  }

  PrimeConfig cfg_;
};

/// Finite Z- or Z/M-linear combination of group elements; modulus 0 means Z.
struct GroupRingElement {
  std::map<GroupElement, BigInt> coefficients;
  BigInt modulus = 0;

  static GroupRingElement unit(const GaloisGroup& g, BigInt modulus = 0) {
    GroupRingElement e;
    e.modulus = std::move(modulus);
    e.coefficients[g.identity()] = 1;
    return e;
  }

  static GroupRingElement of(const GroupElement& g, BigInt coeff = 1, BigInt modulus = 0) {
    GroupRingElement e;
    e.modulus = std::move(modulus);
    e.add_term(g, coeff);
    return e;
  }

  void add_term(const GroupElement& g, const BigInt& c) {
    auto& slot = coefficients[g];
    slot = reduce(slot + c, modulus);
    if (sgn(slot) == 0) coefficients.erase(g);
  }

  bool is_zero() const { return coefficients.empty(); }

  bool operator==(const GroupRingElement& o) const {
    return modulus == o.modulus && coefficients == o.coefficients;
  }

  GroupRingElement operator+(const GroupRingElement& o) const {
    if (modulus != o.modulus) throw Error(ErrorKind::ModulusMismatch, "group ring sum");
    GroupRingElement out = *this;
    for (const auto& [g, c] : o.coefficients) out.add_term(g, c);
    return out;
  }

  GroupRingElement operator-(const GroupRingElement& o) const {
    if (modulus != o.modulus) throw Error(ErrorKind::ModulusMismatch, "group ring difference");
    GroupRingElement out = *this;
    for (const auto& [g, c] : o.coefficients) out.add_term(g, -c);
    return out;
  }

  GroupRingElement reduced(const BigInt& m) const {
    GroupRingElement out;
    out.modulus = m;
    for (const auto& [g, c] : coefficients) out.add_term(g, c);
    return out;
  }
};

inline GroupRingElement ring_mul(const GaloisGroup& group, const GroupRingElement& a, const GroupRingElement& b) {
  if (a.modulus != b.modulus) throw Error(ErrorKind::ModulusMismatch, "group ring product");
  GroupRingElement out;
  out.modulus = a.modulus;
  for (const auto& [g, c] : a.coefficients)
    for (const auto& [h, d] : b.coefficients) out.add_term(group.mul(g, h), c * d);
  return out;
}

/// N_i = sum_{k=0}^{l_i-2} sigma_i^k
inline GroupRingElement norm_at(const GaloisGroup& group, std::size_t i, BigInt modulus = 0) {
  GroupRingElement n;
  n.modulus = std::move(modulus);
  for (long k = 0; k <= group.config().primes.at(i) - 2; ++k) n.add_term(group.sigma(i, k), 1);
  return n;
}

/// D_i = sum_{k=0}^{l_i-2} k sigma_i^k
inline GroupRingElement derivative_at(const GaloisGroup& group, std::size_t i, BigInt modulus = 0) {
  GroupRingElement d;
  d.modulus = std::move(modulus);
  for (long k = 0; k <= group.config().primes.at(i) - 2; ++k) d.add_term(group.sigma(i, k), k);
  return d;
}

/// N_T = prod_{i in T} N_i
inline GroupRingElement norm_element(const GaloisGroup& group, Subset t, BigInt modulus = 0) {
  auto out = GroupRingElement::unit(group, modulus);
  for (std::size_t i = 0; i < group.s(); ++i)
    if (subset_contains(t, i)) out = ring_mul(group, out, norm_at(group, i, modulus));
  return out;
}

/// D_T = prod_{i in T} D_i
inline GroupRingElement derivative_element(const GaloisGroup& group, Subset t, BigInt modulus = 0) {
  auto out = GroupRingElement::unit(group, modulus);
  for (std::size_t i = 0; i < group.s(); ++i)
    if (subset_contains(t, i)) out = ring_mul(group, out, derivative_at(group, i, modulus));
  return out;
}

/// e in R = Z_{>=0}[S].
struct MultiIndex {
  std::vector<unsigned> e;

  static MultiIndex zero(std::size_t s) { return {std::vector<unsigned>(s, 0)}; }

  /// e_T = sum_{i in T} epsilon_i
  static MultiIndex indicator(std::size_t s, Subset t) {
    MultiIndex m = zero(s);
    for (std::size_t i = 0; i < s; ++i) m.e[i] = subset_contains(t, i) ? 1u : 0u;
    return m;
  }

  std::size_t size() const { return e.size(); }

  unsigned degree() const { return std::accumulate(e.begin(), e.end(), 0u); }

  Subset support() const {
    Subset t = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) t |= Subset{1} << i;
    return t;
  }

  bool is_even() const {
    return std::all_of(e.begin(), e.end(), [](unsigned x) { return x % 2 == 0; });
  }

  MultiIndex plus(const MultiIndex& o) const {
    MultiIndex m = *this;
    for (std::size_t i = 0; i < e.size(); ++i) m.e[i] += o.e.at(i);
    return m;
  }

  MultiIndex plus_unit(std::size_t i) const {
    MultiIndex m = *this;
    ++m.e.at(i);
    return m;
  }

  std::string to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < e.size(); ++i) out += (i ? "," : "") + std::to_string(e[i]);
    return out + ")";
  }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;
};

/// All e with deg e = degree and supp e contained in `within`, in lexicographic order.
inline std::vector<MultiIndex> multi_indices(std::size_t s, unsigned degree, Subset within) {
  std::vector<MultiIndex> out;
  MultiIndex cur = MultiIndex::zero(s);
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < s; ++i)
    if (subset_contains(within, i)) slots.push_back(i);
  if (slots.empty()) {
    if (degree == 0) out.push_back(cur);
    return out;
  }
  // distribute `degree` over slots; recursion depth is |slots|
  auto rec = [&](auto&& self, std::size_t k, unsigned left) -> void {
    if (k + 1 == slots.size()) {
      cur.e[slots[k]] = left;
      out.push_back(cur);
      cur.e[slots[k]] = 0;
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      cur.e[slots[k]] = v;
      self(self, k + 1, left - v);
    }
    cur.e[slots[k]] = 0;
  };
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace udcoh
