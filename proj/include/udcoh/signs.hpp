#pragma once

// Every sign used by the complexes lives here so the conventions stay in one place.

#include <cstddef>

#include "udcoh/galois.hpp"

namespace udcoh::signs {

inline int parity_sign(long k) { return (k % 2 == 0) ? 1 : -1; }

/// (-1)^{#{j in T : j < i}}
inline int position_in_subset(std::size_t i, Subset t) {
  const Subset below = t & ((Subset{1} << i) - 1);
  return parity_sign(static_cast<long>(subset_size(below)));
}

/// Exponent sum_{j<i} e_j.
inline long exponent_before(const MultiIndex& e, std::size_t i) {
  long total = 0;
  for (std::size_t j = 0; j < i; ++j) total += e.e[j];
  return total;
}

/// (-1)^{sum_{j<i} e_j}: Koszul sign of d_i on the tensor product resolution.
inline int koszul(const MultiIndex& e, std::size_t i) { return parity_sign(exponent_before(e, i)); }

/// Exponent sum_{j<i} e'_j e_i of the shuffle sign for (e, e').
inline long shuffle_exponent(const MultiIndex& e, const MultiIndex& f) {
  long total = 0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) total += static_cast<long>(f.e[j]) * e.e[i];
  return total;
}

inline int shuffle(const MultiIndex& e, const MultiIndex& f) { return parity_sign(shuffle_exponent(e, f)); }

/// (-1)^{|T|}: the sign that makes the group-cohomology differential
/// anticommute with the distribution differential.
inline int total_degree(Subset t) { return parity_sign(static_cast<long>(subset_size(t))); }

/// (-1)^{k(2n-k-1)/2} for the explicit prime cocycle, with n = |T|, k = |T'|.
inline int prime_cocycle(std::size_t n, std::size_t k) {
  const long nn = static_cast<long>(n), kk = static_cast<long>(k);
  return parity_sign(kk * (2 * nn - kk - 1) / 2);
}

}  // namespace udcoh::signs
