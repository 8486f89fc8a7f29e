#pragma once

// Cochains Hom_G(P_W, V) on the tensor-product resolution P_W = (x) P_i of the
// cyclic groups G_i, the closed-form groups A_e, and the diagonal map used for
// cup products.

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "udcoh/errors.hpp"
#include "udcoh/exactlin.hpp"
#include "udcoh/galois.hpp"
#include "udcoh/signs.hpp"

namespace udcoh {

/// How sigma_i acts on a module V, through 1 - sigma_i and N_i.
struct CyclicAction {
  ExactMatrix one_minus_sigma;
  ExactMatrix norm;
};

/// Hom_G(P_W, V) for W a subset of S: degree n is the sum over deg e = n,
/// supp e in W, of copies of V, ordered by e (lexicographic) then by V's basis.
class ResolutionCochains {
 public:
  ResolutionCochains(std::size_t s, Subset within, std::size_t module_dim, std::vector<CyclicAction> actions)
      : s_(s), within_(within), m_(module_dim), actions_(std::move(actions)) {
    if (actions_.size() != s_) throw Error(ErrorKind::ShapeMismatch, "one action per prime required");
  }

  std::size_t s() const { return s_; }
  Subset within() const { return within_; }
  std::size_t module_dim() const { return m_; }

  std::vector<MultiIndex> indices(int n) const {
    if (n < 0) return {};
    return multi_indices(s_, static_cast<unsigned>(n), within_);
  }

  std::size_t dim(int n) const { return indices(n).size() * m_; }

  /// Offset of block e inside degree deg e.
  std::optional<std::size_t> offset(const MultiIndex& e) const {
    if (!is_subset(e.support(), within_)) return std::nullopt;
    const auto list = indices(static_cast<int>(e.degree()));
    auto it = std::lower_bound(list.begin(), list.end(), e);
    if (it == list.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - list.begin()) * m_;
  }

  /// delta: C^n -> C^{n+1}, block (e + eps_i, e) = (-1)^{omega(e)_i} lambda_i with
  /// lambda_i = 1 - sigma_i for e_i even and N_i for e_i odd.
  ExactMatrix differential(int n) const {
    const auto src = indices(n);
    const auto dst = indices(n + 1);
    MatrixBuilder b(dst.size() * m_, src.size() * m_);
    for (std::size_t c = 0; c < src.size(); ++c) {
      const auto& e = src[c];
      for (std::size_t i = 0; i < s_; ++i) {
        if (!subset_contains(within_, i)) continue;
        const auto target = e.plus_unit(i);
        const std::size_t r = static_cast<std::size_t>(std::lower_bound(dst.begin(), dst.end(), target) - dst.begin());
        const int sign = signs::koszul(e, i);
        const ExactMatrix& op = e.e[i] % 2 == 0 ? actions_[i].one_minus_sigma : actions_[i].norm;
        for (std::size_t row = 0; row < m_; ++row)
          for (const auto& [col, v] : op.row(row)) b.add(r * m_ + row, c * m_ + col, v * sign);
      }
    }
    return b.build();
  }

  CohomologyGroup cohomology(int n, const BigInt& modulus = 0) const {
    const ExactMatrix d_in = n >= 1 ? differential(n - 1) : ExactMatrix(dim(n), 0);
    return homology_at(d_in, differential(n), modulus);
  }

 private:
  std::size_t s_;
  Subset within_;
  std::size_t m_;
  std::vector<CyclicAction> actions_;
};

/// C_T = Hom(P_T, Z) with trivial action: 1 - sigma_i = 0, N_i = l_i - 1.
inline ResolutionCochains trivial_cochains(const PrimeConfig& cfg, Subset t) {
  std::vector<CyclicAction> acts;
  for (long p : cfg.primes) acts.push_back({ExactMatrix(1, 1), ExactMatrix::identity(1).scaled(p - 1)});
  return ResolutionCochains(cfg.s(), t, 1, std::move(acts));
}

/// Even multi-indices with support inside `within` and degree at most max_degree.
inline std::vector<MultiIndex> even_indices(std::size_t s, Subset within, int max_degree) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_degree; d += 2)
    for (const auto& e : multi_indices(s, static_cast<unsigned>(d), within))
      if (e.is_even()) out.push_back(e);
  return out;
}

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

/// A_e^n: Z in degree 0 for e = 0; otherwise (Z/m_e)^{C(t-1, j)} in degree
/// deg e - j for 0 <= j < t, where t = |supp e| and m_e = gcd(l_i - 1).
inline CohomologyGroup a_e_group(const PrimeConfig& cfg, const MultiIndex& e, int n) {
  if (e.degree() == 0) return n == 0 ? CohomologyGroup{1, {}} : CohomologyGroup{};
  const long t = static_cast<long>(subset_size(e.support()));
  const long j = static_cast<long>(e.degree()) - n;
  if (j < 0 || j > t - 1) return {};
  const BigInt m = cfg.gcd_minus_one(e.support());
  const unsigned long copies = binomial(t - 1, j).get_ui();
  return CohomologyGroup::from_cyclic_orders(0, std::vector<BigInt>(copies, m));
}

/// H^n(G_T, Z) for n = 0..n_max assembled from A_e over even e with supp e in T.
inline std::vector<CohomologyGroup> cohomology_Z_closed_form(const PrimeConfig& cfg, Subset t, int n_max) {
  std::vector<CohomologyGroup> out;
  const int s = static_cast<int>(cfg.s());
  for (int n = 0; n <= n_max; ++n) {
    CohomologyGroup g;
    for (const auto& e : even_indices(cfg.s(), t, n + s)) g = g.direct_sum(a_e_group(cfg, e, n));
    out.push_back(g);
  }
  return out;
}

/// H^n(G_T, Z) for n = 0..n_max by Smith normal form on C_T.
inline std::vector<CohomologyGroup> cohomology_Z_snf(const PrimeConfig& cfg, Subset t, int n_max) {
  const auto c = trivial_cochains(cfg, t);
  std::vector<CohomologyGroup> out;
  for (int n = 0; n <= n_max; ++n) out.push_back(c.cohomology(n));
  return out;
}

/// Element of Z[G] (x) Z[G] as coefficients on pairs (g, h).
using GroupTensor = std::map<std::pair<GroupElement, GroupElement>, BigInt>;

/// Phi_{e,f}(1_{e+f}): the product over primes of the cyclic diagonal
///   1 (x) 1 (e_i even), 1 (x) sigma (e_i odd, f_i even),
///   -sum_{0<=m<n<=l-2} sigma^m (x) sigma^n (both odd),
/// followed by the reordering sign (-1)^{omega(e,f)}. The minus sign in the odd-odd
/// case matches the boundary 1 - sigma in odd degrees.
inline GroupTensor diagonal_component(const GaloisGroup& group, const MultiIndex& e, const MultiIndex& f) {
  const std::size_t s = group.s();
  GroupTensor acc{{{group.identity(), group.identity()}, BigInt(signs::shuffle(e, f))}};
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<std::pair<long, long>> local;
    int sign = 1;
    if (e.e[i] % 2 == 0) {
      local.emplace_back(0, 0);
    } else if (f.e[i] % 2 == 0) {
      local.emplace_back(0, 1);
    } else {
      sign = -1;
      const long top = group.config().primes[i] - 2;
      for (long m = 0; m <= top; ++m)
        for (long n = m + 1; n <= top; ++n) local.emplace_back(m, n);
    }
    GroupTensor next;
    for (const auto& [gh, c] : acc)
      for (const auto& [m, n] : local) {
        auto g = gh.first, h = gh.second;
        g.exponents[i] = m;
        h.exponents[i] = n;
        next[{g, h}] += c * sign;
      }
    acc = std::move(next);
  }
  return acc;
}

struct CupValue {
  BigInt coefficient;
  MultiIndex index;

  bool operator==(const CupValue&) const = default;
};

/// [e] cup [f] = (-1)^{omega(e,f)} prod_{e_i f_i odd} (l_i - 1)/2 [e + f] in H*(G_S, Z/M).
inline CupValue cup_closed_form(const PrimeConfig& cfg, long modulus, const MultiIndex& e, const MultiIndex& f) {
  validate_modulus(cfg, modulus);
  BigInt c = signs::shuffle(e, f);
  for (std::size_t i = 0; i < cfg.s(); ++i)
    if (e.e[i] % 2 == 1 && f.e[i] % 2 == 1) c *= (cfg.primes[i] - 1) / 2;
  return {reduce(c, modulus), e.plus(f)};
}

/// The same product obtained by evaluating [e] (x) [f] on Phi(1_{e+f}).
inline CupValue cup_via_diagonal(const PrimeConfig& cfg, long modulus, const MultiIndex& e, const MultiIndex& f) {
  validate_modulus(cfg, modulus);
  const GaloisGroup group(cfg);
  BigInt c = 0;
  for (const auto& [gh, coeff] : diagonal_component(group, e, f)) c += coeff;
  return {reduce(c, modulus), e.plus(f)};
}

namespace detail {

// (g 1_e) (x) (h 1_f) in P (x) P
struct TensorKey {
  MultiIndex e, f;
  GroupElement g, h;
  auto operator<=>(const TensorKey&) const = default;
};

using PairTensor = std::map<TensorKey, BigInt>;

inline void add_to(PairTensor& t, TensorKey k, const BigInt& c) {
  auto& slot = t[std::move(k)];
  slot += c;
}

// boundary of g 1_e in P_S: sum_i (-1)^{omega(e)_i} g mu_i 1_{e - eps_i}, where
// mu_i = 1 - sigma_i for e_i odd and N_i for e_i even
inline std::vector<std::tuple<MultiIndex, GroupElement, BigInt>> boundary(const GaloisGroup& group, const MultiIndex& e,
                                                                         const GroupElement& g) {
  std::vector<std::tuple<MultiIndex, GroupElement, BigInt>> out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e.e[i] == 0) continue;
    MultiIndex lower = e;
    --lower.e[i];
    const int sign = signs::koszul(lower, i);
    if (e.e[i] % 2 == 1) {
      out.emplace_back(lower, g, BigInt(sign));
      out.emplace_back(lower, group.mul(g, group.sigma(i)), BigInt(-sign));
    } else {
      for (long k = 0; k <= group.config().primes[i] - 2; ++k)
        out.emplace_back(lower, group.mul(g, group.sigma(i, k)), BigInt(sign));
    }
  }
  return out;
}

inline PairTensor diagonal_of(const GaloisGroup& group, const MultiIndex& total, const GroupElement& x) {
  PairTensor out;
  const std::size_t s = total.size();
  std::vector<MultiIndex> lefts;
  for (unsigned d = 0; d <= total.degree(); ++d)
    for (const auto& e : multi_indices(s, d, total.support())) {
      bool fits = true;
      for (std::size_t i = 0; i < s; ++i) fits = fits && e.e[i] <= total.e[i];
      if (fits) lefts.push_back(e);
    }
  for (const auto& e : lefts) {
    MultiIndex f = total;
    for (std::size_t i = 0; i < s; ++i) f.e[i] -= e.e[i];
    for (const auto& [gh, c] : diagonal_component(group, e, f))
      add_to(out, {e, f, group.mul(x, gh.first), group.mul(x, gh.second)}, c);
  }
  return out;
}

}  // namespace detail

/// Checks d Phi = Phi d on every generator 1_E with 1 <= deg E <= max_degree.
inline bool diagonal_is_chain_map(const PrimeConfig& cfg, unsigned max_degree) {
  const GaloisGroup group(cfg);
  for (unsigned deg = 1; deg <= max_degree; ++deg)
    for (const auto& total : multi_indices(cfg.s(), deg, full_subset(cfg.s()))) {
      detail::PairTensor lhs, rhs;
      for (const auto& [key, c] : detail::diagonal_of(group, total, group.identity())) {
        for (const auto& [e2, g2, c2] : detail::boundary(group, key.e, key.g))
          detail::add_to(lhs, {e2, key.f, g2, key.h}, c * c2);
        const int sign = signs::parity_sign(key.e.degree());
        for (const auto& [f2, h2, c2] : detail::boundary(group, key.f, key.h))
          detail::add_to(lhs, {key.e, f2, key.g, h2}, c * c2 * sign);
      }
      for (const auto& [lower, x, c] : detail::boundary(group, total, group.identity()))
        for (const auto& [key, c2] : detail::diagonal_of(group, lower, x)) detail::add_to(rhs, key, c * c2);
      std::erase_if(lhs, [](const auto& kv) { return sgn(kv.second) == 0; });
      std::erase_if(rhs, [](const auto& kv) { return sgn(kv.second) == 0; });
      if (lhs != rhs) return false;
    }
  return true;
}

}  // namespace udcoh
