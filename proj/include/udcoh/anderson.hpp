#pragma once

// Anderson's resolution L of the universal distribution: symbols [a, T] with
// supp a and T disjoint, sitting in degree -|T|, the differential d and its
// splitting d = d1 + d2 along the bidegree (|supp a| - s, s - |supp a| - |T|).

#include <algorithm>
#include <map>
#include <vector>

#include "udcoh/distribution.hpp"
#include "udcoh/errors.hpp"
#include "udcoh/exactlin.hpp"
#include "udcoh/galois.hpp"
#include "udcoh/signs.hpp"

namespace udcoh {

struct LSymbol {
  long numerator;
  Subset t;

  auto operator<=>(const LSymbol&) const = default;
};

struct Bidegree {
  int p1;
  int p2;

  auto operator<=>(const Bidegree&) const = default;
};

class LComplex {
 public:
  LComplex(const PrimeConfig& cfg, OrderIdeal ideal) : group_(cfg), ideal_(std::move(ideal)), r_(cfg.r()) {
    ideal_.validate(cfg.s());
    const int s = static_cast<int>(cfg.s());
    symbols_.resize(cfg.s() + 1);
    index_.resize(cfg.s() + 1);
    for (Subset t = 0; t <= full_subset(cfg.s()); ++t)
      for (long n = 0; n < r_; ++n) {
        const Subset supp = crt_support(cfg, n);
        if ((supp & t) == 0 && ideal_.contains(supp | t)) symbols_[subset_size(t)].push_back({n, t});
      }
    for (auto& list : symbols_) {
      std::sort(list.begin(), list.end(), [](const LSymbol& a, const LSymbol& b) {
        return a.t != b.t ? a.t < b.t : a.numerator < b.numerator;
      });
    }
    for (std::size_t k = 0; k < symbols_.size(); ++k)
      for (std::size_t j = 0; j < symbols_[k].size(); ++j) index_[k].emplace(symbols_[k][j], j);
    for (int p = -s; p < 0; ++p) {
      d_.push_back(build(p, Part::Full));
      d1_.push_back(build(p, Part::First));
      d2_.push_back(build(p, Part::Second));
    }
  }

  const PrimeConfig& config() const { return group_.config(); }
  const OrderIdeal& ideal() const { return ideal_; }
  int s() const { return static_cast<int>(group_.s()); }

  /// Symbols in degree p (p in [-s, 0]); empty outside.
  const std::vector<LSymbol>& symbols(int p) const {
    static const std::vector<LSymbol> none;
    return in_range(p) ? symbols_[static_cast<std::size_t>(-p)] : none;
  }

  std::size_t dim(int p) const { return symbols(p).size(); }

  std::optional<std::size_t> index_of(int p, const LSymbol& sym) const {
    if (!in_range(p)) return std::nullopt;
    const auto& idx = index_[static_cast<std::size_t>(-p)];
    auto it = idx.find(sym);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  Bidegree bidegree(const LSymbol& sym) const {
    const int supp = static_cast<int>(subset_size(crt_support(config(), sym.numerator)));
    return {supp - s(), s() - supp - static_cast<int>(subset_size(sym.t))};
  }

  /// d: L^p -> L^{p+1}
  ExactMatrix d(int p) const { return pick(d_, p); }
  ExactMatrix d1(int p) const { return pick(d1_, p); }
  ExactMatrix d2(int p) const { return pick(d2_, p); }

  CohomologyGroup homology(int p) const { return homology_at(d(p - 1), d(p)); }

  /// Augmentation L^0 -> U_S(I): [a, {}] -> [a] in the canonical basis of `rows`.
  ExactMatrix augmentation(const UniversalDistribution& u, const std::vector<long>& rows) const {
    MatrixBuilder b(rows.size(), dim(0));
    for (std::size_t k = 0; k < dim(0); ++k) {
      const auto col = u.coordinates(u.normalize(symbols(0)[k].numerator), rows);
      for (std::size_t i = 0; i < rows.size(); ++i) b.add(i, k, col[i]);
    }
    return b.build();
  }

 private:
  enum class Part { Full, First, Second };

  bool in_range(int p) const { return p <= 0 && p >= -s(); }

  ExactMatrix pick(const std::vector<ExactMatrix>& v, int p) const {
    if (p >= -s() && p < 0) return v[static_cast<std::size_t>(p + s())];
    return ExactMatrix(dim(p + 1), dim(p));
  }

  void add(MatrixBuilder& b, int p, long n, Subset t, std::size_t col, long coeff) const {
    const auto row = index_of(p + 1, {detail::mod_pos(n, r_), t});
    if (!row) throw Error(ErrorKind::IndexOutOfRange, "boundary leaves the complex");
    b.add(*row, col, coeff);
  }

  // d[a,T]  = sum_{i in T} w(i,T) ([a, T-i] - sum_{l_i b = a} [b, T-i])
  // d1[a,T] = -sum w(i,T) N_i [Fr_i^{-1} a + 1/l_i, T-i]
  // d2[a,T] =  sum w(i,T) (1 - Fr_i^{-1}) [a, T-i]
  ExactMatrix build(int p, Part part) const {
    MatrixBuilder b(dim(p + 1), dim(p));
    const auto& cols = symbols(p);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto [n, t] = cols[c];
      for (std::size_t i = 0; i < group_.s(); ++i) {
        if (!subset_contains(t, i)) continue;
        const long w = signs::position_in_subset(i, t);
        const Subset rest = t & ~(Subset{1} << i);
        const long li = config().primes[i];
        if (part == Part::Full) {
          add(b, p, n, rest, c, w);
          for (long k = 0; k < li; ++k) add(b, p, n / li + k * (r_ / li), rest, c, -w);
          continue;
        }
        const long fr_inv = act(group_.inverse(group_.frobenius(i)), n);
        if (part == Part::First) {
          const long base = fr_inv + r_ / li;
          for (long k = 0; k <= li - 2; ++k) add(b, p, act(group_.sigma(i, k), base), rest, c, -w);
        } else {
          add(b, p, n, rest, c, w);
          add(b, p, fr_inv, rest, c, -w);
        }
      }
    }
    return b.build();
  }

  long act(const GroupElement& g, long n) const {
    return static_cast<long>((__int128)group_.multiplier(g) * detail::mod_pos(n, r_) % r_);
  }

  GaloisGroup group_;
  OrderIdeal ideal_;
  long r_;
  std::vector<std::vector<LSymbol>> symbols_;
  std::vector<std::map<LSymbol, std::size_t>> index_;
  std::vector<ExactMatrix> d_, d1_, d2_;
};

inline LComplex build_L(const PrimeConfig& cfg, const OrderIdeal& ideal) { return LComplex(cfg, ideal); }

inline LComplex build_L(const PrimeConfig& cfg) { return LComplex(cfg, OrderIdeal::full(cfg.s())); }

struct SplitDifferential {
  std::vector<ExactMatrix> d1, d2;
};

/// d1 and d2 for every degree, after checking d = d1 + d2 and the three
/// anticommutation identities.
inline SplitDifferential split_differential(const LComplex& l) {
  SplitDifferential out;
  for (int p = -l.s(); p < 0; ++p) {
    const auto d1 = l.d1(p), d2 = l.d2(p);
    if (!(d1 + d2 == l.d(p))) throw Error(ErrorKind::SplitMismatch, "d != d1 + d2 in degree " + std::to_string(p));
    if (p + 1 < 0) {
      const auto e1 = l.d1(p + 1), e2 = l.d2(p + 1);
      if (!(e1 * d1).is_zero() || !(e2 * d2).is_zero() || !(e1 * d2 + e2 * d1).is_zero())
        throw Error(ErrorKind::SplitMismatch, "split differentials do not anticommute in degree " + std::to_string(p));
    }
    out.d1.push_back(d1);
    out.d2.push_back(d2);
  }
  return out;
}

/// H^p(L) for p = -s..0, indexed by -p.
inline std::vector<CohomologyGroup> homology_of_L(const LComplex& l) {
  std::vector<CohomologyGroup> out;
  for (int p = 0; p >= -l.s(); --p) out.push_back(l.homology(p));
  return out;
}

struct FiltrationEntry {
  Bidegree degree;
  CohomologyGroup group;
};

struct FiltrationE1 {
  std::vector<FiltrationEntry> entries;
  std::vector<std::size_t> row_ranks;  // indexed by p2
  bool concentrated = true;
};

/// Rows L^{., p2} under d1: every nonzero entry must sit at p1 = -p2 and be free.
inline FiltrationE1 first_filtration_E1(const LComplex& l) {
  FiltrationE1 out;
  out.row_ranks.assign(static_cast<std::size_t>(l.s()) + 1, 0);
  for (int p2 = l.s(); p2 >= 0; --p2) {
    auto row = [&](int p) {
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < l.dim(p); ++k)
        if (l.bidegree(l.symbols(p)[k]).p2 == p2) idx.push_back(k);
      return idx;
    };
    for (int p = -l.s(); p <= 0; ++p) {
      const auto here = row(p), prev = row(p - 1), next = row(p + 1);
      const auto d_in = l.d1(p - 1).select_rows(here).select_cols(prev);
      const auto d_out = l.d1(p).select_rows(next).select_cols(here);
      const auto h = homology_at(d_in, d_out);
      if (h.is_zero()) continue;
      const int p1 = p - p2;
      out.entries.push_back({{p1, p2}, h});
      if (p1 != -p2 || !h.invariant_factors.empty()) out.concentrated = false;
      out.row_ranks[static_cast<std::size_t>(p2)] += h.free_rank;
    }
  }
  return out;
}

/// Expected E1 row ranks: basic a with supp a in I and |supp a| = s - p2.
inline std::vector<std::size_t> expected_E1_ranks(const UniversalDistribution& u, const OrderIdeal& ideal) {
  std::vector<std::size_t> out(u.s() + 1, 0);
  for (long n : ideal_basis(u, ideal)) ++out[u.s() - subset_size(u.support(n))];
  return out;
}

/// L(f) for arbitrary f: symbols [x, g] with g a squarefree divisor of f and
/// x in (g/f)Z/Z, in degree -omega(g).
class GeneralLComplex {
 public:
  explicit GeneralLComplex(long f) : f_(f), primes_() {
    for (const auto& pp : factorize(f)) primes_.push_back(pp.p);
    const std::size_t k = primes_.size();
    symbols_.resize(k + 1);
    for (Subset t = 0; t <= full_subset(k); ++t) {
      const long g = radical(t);
      for (long n = 0; n < f_; n += g) symbols_[subset_size(t)].push_back({n, t});
    }
    for (auto& list : symbols_)
      std::sort(list.begin(), list.end(), [](const LSymbol& a, const LSymbol& b) {
        return a.t != b.t ? a.t < b.t : a.numerator < b.numerator;
      });
  }

  int depth() const { return static_cast<int>(primes_.size()); }
  std::size_t dim(int p) const { return (p <= 0 && p >= -depth()) ? symbols_[static_cast<std::size_t>(-p)].size() : 0; }

  ExactMatrix d(int p) const {
    MatrixBuilder b(dim(p + 1), dim(p));
    if (p >= 0 || p < -depth()) return b.build();
    const auto& cols = symbols_[static_cast<std::size_t>(-p)];
    const auto& rows = symbols_[static_cast<std::size_t>(-p - 1)];
    auto row_of = [&](long n, Subset t) {
      auto it = std::lower_bound(rows.begin(), rows.end(), LSymbol{n, t}, [](const LSymbol& a, const LSymbol& b) {
        return a.t != b.t ? a.t < b.t : a.numerator < b.numerator;
      });
      if (it == rows.end() || it->numerator != n || it->t != t)
        throw Error(ErrorKind::IndexOutOfRange, "boundary leaves L(f)");
      return static_cast<std::size_t>(it - rows.begin());
    };
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto [n, t] = cols[c];
      for (std::size_t i = 0; i < primes_.size(); ++i) {
        if (!subset_contains(t, i)) continue;
        const long w = signs::position_in_subset(i, t);
        const Subset rest = t & ~(Subset{1} << i);
        const long p_i = primes_[i];
        b.add(row_of(n, rest), c, w);
        for (long j = 0; j < p_i; ++j) b.add(row_of((n / p_i + j * (f_ / p_i)) % f_, rest), c, -w);
      }
    }
    return b.build();
  }

  CohomologyGroup homology(int p) const { return homology_at(d(p - 1), d(p)); }

 private:
  long radical(Subset t) const {
    long g = 1;
    for (std::size_t i = 0; i < primes_.size(); ++i)
      if (subset_contains(t, i)) g *= primes_[i];
    return g;
  }

  long f_;
  std::vector<long> primes_;
  std::vector<std::vector<LSymbol>> symbols_;
};

}  // namespace udcoh
