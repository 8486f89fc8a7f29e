#pragma once

// Exact linear algebra over Z and Z/M: sparse integer matrices, Smith normal
// form with transforms, kernels, solving, and homology of three-term
// sequences. M is allowed to be composite; nothing here treats Z/M as a field.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "udcoh/errors.hpp"

namespace udcoh {

using BigInt = mpz_class;
using Vector = std::vector<BigInt>;

namespace detail {

inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Inverse of a modulo m; a must be a unit.
inline BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  if (m == 1) return 0;
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorKind::GcdNotOne, "element is not a unit modulo " + m.get_str());
  }
  return r;
}

}  // namespace detail

/// Reduce a value into [0, M) when M > 0; identity for M = 0.
inline BigInt reduce(const BigInt& a, const BigInt& modulus) {
  return modulus == 0 ? a : detail::mod_floor(a, modulus);
}

/// Sparse integer matrix with value semantics. Rows are stored as sorted
/// (column, value) lists without explicit zeros.
class ExactMatrix {
 public:
  using Entry = std::pair<std::size_t, BigInt>;
  using Row = std::vector<Entry>;

  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(i, BigInt(1));
    return m;
  }

  static ExactMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<BigInt>> dense;
    for (const auto& r : rows) {
      std::vector<BigInt> row;
      for (long v : r) row.emplace_back(v);
      dense.push_back(std::move(row));
    }
    std::size_t cols = dense.empty() ? 0 : dense.front().size();
    return from_dense(dense, cols);
  }

  static ExactMatrix from_dense(const std::vector<std::vector<BigInt>>& dense, std::size_t cols) {
    ExactMatrix m(dense.size(), cols);
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i].size() != cols) throw Error(ErrorKind::ShapeMismatch, "ragged dense rows");
      for (std::size_t j = 0; j < cols; ++j) {
        if (sgn(dense[i][j]) != 0) m.data_[i].emplace_back(j, dense[i][j]);
      }
    }
    return m;
  }

  /// Matrix whose columns are the given vectors (each of length `rows`).
  static ExactMatrix from_columns(const std::vector<Vector>& columns, std::size_t rows) {
    ExactMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw Error(ErrorKind::ShapeMismatch, "column length");
      for (std::size_t i = 0; i < rows; ++i) {
        if (sgn(columns[j][i]) != 0) m.data_[i].emplace_back(j, columns[j][i]);
      }
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
  }

  const Row& row(std::size_t i) const { return data_.at(i); }

  BigInt at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw Error(ErrorKind::IndexOutOfRange, "matrix index");
    const auto& r = data_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const Entry& e, std::size_t c) { return e.first < c; });
    return (it != r.end() && it->first == j) ? it->second : BigInt(0);
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Row& r) { return r.empty(); });
  }

  bool is_zero_mod(const BigInt& modulus) const { return reduced(modulus).is_zero(); }

  std::vector<std::vector<BigInt>> to_dense() const {
    std::vector<std::vector<BigInt>> d(rows_, std::vector<BigInt>(cols_, 0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) d[i][j] = v;
    return d;
  }

  Vector column(std::size_t j) const {
    Vector c(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
  }

  std::vector<Vector> columns() const {
    std::vector<Vector> out(cols_, Vector(rows_, 0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) out[j][i] = v;
    return out;
  }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) t.data_[j].emplace_back(i, v);
    return t;
  }

  /// Entries reduced into [0, M); zeros dropped. M = 0 returns a copy.
  ExactMatrix reduced(const BigInt& modulus) const {
    if (modulus == 0) return *this;
    ExactMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) {
        BigInt r = detail::mod_floor(v, modulus);
        if (sgn(r) != 0) m.data_[i].emplace_back(j, std::move(r));
      }
    return m;
  }

  ExactMatrix operator*(const ExactMatrix& other) const {
    if (cols_ != other.rows_) throw Error(ErrorKind::ShapeMismatch, "matrix product");
    ExactMatrix out(rows_, other.cols_);
    std::map<std::size_t, BigInt> acc;
    for (std::size_t i = 0; i < rows_; ++i) {
      acc.clear();
      for (const auto& [k, a] : data_[i])
        for (const auto& [j, b] : other.data_[k]) acc[j] += a * b;
      for (auto& [j, v] : acc)
        if (sgn(v) != 0) out.data_[i].emplace_back(j, std::move(v));
    }
    return out;
  }

  Vector operator*(const Vector& x) const {
    if (x.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "matrix-vector product");
    Vector y(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) y[i] += v * x[j];
    return y;
  }

  ExactMatrix operator+(const ExactMatrix& other) const { return combine(other, 1); }
  ExactMatrix operator-(const ExactMatrix& other) const { return combine(other, -1); }

  ExactMatrix scaled(const BigInt& c) const {
    ExactMatrix out(rows_, cols_);
    if (sgn(c) == 0) return out;
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) out.data_[i].emplace_back(j, v * c);
    return out;
  }

  /// [A | B]
  ExactMatrix hstack(const ExactMatrix& other) const {
    if (rows_ != other.rows_) throw Error(ErrorKind::ShapeMismatch, "hstack");
    ExactMatrix out(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      out.data_[i] = data_[i];
      for (const auto& [j, v] : other.data_[i]) out.data_[i].emplace_back(j + cols_, v);
    }
    return out;
  }

  /// [A ; B]
  ExactMatrix vstack(const ExactMatrix& other) const {
    if (cols_ != other.cols_) throw Error(ErrorKind::ShapeMismatch, "vstack");
    ExactMatrix out(rows_ + other.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = data_[i];
    for (std::size_t i = 0; i < other.rows_; ++i) out.data_[rows_ + i] = other.data_[i];
    return out;
  }

  ExactMatrix select_rows(const std::vector<std::size_t>& idx) const {
    ExactMatrix out(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k) out.data_[k] = data_.at(idx[k]);
    return out;
  }

  ExactMatrix select_cols(const std::vector<std::size_t>& idx) const {
    std::vector<std::ptrdiff_t> where(cols_, -1);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] >= cols_) throw Error(ErrorKind::IndexOutOfRange, "select_cols");
      where[idx[k]] = static_cast<std::ptrdiff_t>(k);
    }
    ExactMatrix out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i) {
      for (const auto& [j, v] : data_[i])
        if (where[j] >= 0) out.data_[i].emplace_back(static_cast<std::size_t>(where[j]), v);
      std::sort(out.data_[i].begin(), out.data_[i].end(),
                [](const Entry& a, const Entry& b) { return a.first < b.first; });
    }
    return out;
  }

  bool operator==(const ExactMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? "; " : "");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
  }

 private:
  friend class MatrixBuilder;

  ExactMatrix combine(const ExactMatrix& other, int sign) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorKind::ShapeMismatch, "sum");
    ExactMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto& a = data_[i];
      const auto& b = other.data_[i];
      std::size_t p = 0, q = 0;
      while (p < a.size() || q < b.size()) {
        if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
          out.data_[i].push_back(a[p++]);
        } else if (p == a.size() || b[q].first < a[p].first) {
          out.data_[i].emplace_back(b[q].first, sign > 0 ? BigInt(b[q].second) : BigInt(-b[q].second));
          ++q;
        } else {
          BigInt v = sign > 0 ? BigInt(a[p].second + b[q].second) : BigInt(a[p].second - b[q].second);
          if (sgn(v) != 0) out.data_[i].emplace_back(a[p].first, std::move(v));
          ++p;
          ++q;
        }
      }
    }
    return out;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

/// Mutable accumulator for assembling an ExactMatrix entry by entry.
class MatrixBuilder {
 public:
  MatrixBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), acc_(rows) {}

  void add(std::size_t i, std::size_t j, const BigInt& v) {
    if (i >= rows_ || j >= cols_) throw Error(ErrorKind::IndexOutOfRange, "builder index");
    if (sgn(v) != 0) acc_[i][j] += v;
  }

  ExactMatrix build() const {
    ExactMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (const auto& [j, v] : acc_[i])
        if (sgn(v) != 0) m.data_[i].emplace_back(j, v);
    return m;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<std::map<std::size_t, BigInt>> acc_;
};

/// Finitely generated abelian group: Z^free_rank + sum Z/d_k with d_1 | d_2 | ...
struct CohomologyGroup {
  std::size_t free_rank = 0;
  std::vector<BigInt> invariant_factors;

  /// Normalizes an arbitrary list of cyclic orders into invariant-factor form.
  /// Orders equal to 1 are dropped; an order of 0 counts as a free summand.
  static CohomologyGroup from_cyclic_orders(std::size_t free_rank, const std::vector<BigInt>& orders);

  bool is_zero() const { return free_rank == 0 && invariant_factors.empty(); }

  /// Cardinality of a finite group; nullopt when the free rank is positive.
  std::optional<BigInt> order() const {
    if (free_rank > 0) return std::nullopt;
    BigInt n = 1;
    for (const auto& d : invariant_factors) n *= d;
    return n;
  }

  CohomologyGroup direct_sum(const CohomologyGroup& other) const {
    std::vector<BigInt> orders = invariant_factors;
    orders.insert(orders.end(), other.invariant_factors.begin(), other.invariant_factors.end());
    return from_cyclic_orders(free_rank + other.free_rank, orders);
  }

  bool operator==(const CohomologyGroup& other) const {
    return free_rank == other.free_rank && invariant_factors == other.invariant_factors;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    if (free_rank > 0) s = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
    for (const auto& d : invariant_factors) s += (s.empty() ? "" : " + ") + std::string("Z/") + d.get_str();
    return s;
  }
};

struct SmithDecomposition {
  ExactMatrix U, D, V;
  std::vector<BigInt> invariant_factors;

  std::size_t rank() const { return invariant_factors.size(); }
};

namespace detail {

// Dense Smith elimination. Pivot rule: nonzero entry of least absolute value,
// ties broken by lowest (row, col). Transforms are optional.
class SmithEngine {
 public:
  struct Track {
    bool u = false, u_inv = false, v = false, v_inv = false;
  };

  SmithEngine(const ExactMatrix& a, Track track) : m_(a.rows()), n_(a.cols()), track_(track) {
    a_.assign(m_ * n_, BigInt(0));
    for (std::size_t i = 0; i < m_; ++i)
      for (const auto& [j, v] : a.row(i)) a_[i * n_ + j] = v;
    if (track_.u) u_ = dense_identity(m_);
    if (track_.u_inv) u_inv_ = dense_identity(m_);
    if (track_.v) v_ = dense_identity(n_);
    if (track_.v_inv) v_inv_ = dense_identity(n_);
    run();
  }

  const std::vector<BigInt>& factors() const { return factors_; }
  ExactMatrix u() const { return to_matrix(u_, m_, m_); }
  ExactMatrix u_inv() const { return to_matrix(u_inv_, m_, m_); }
  ExactMatrix v() const { return to_matrix(v_, n_, n_); }
  ExactMatrix v_inv() const { return to_matrix(v_inv_, n_, n_); }
  ExactMatrix d() const { return to_matrix(a_, m_, n_); }

 private:
  static std::vector<BigInt> dense_identity(std::size_t n) {
    std::vector<BigInt> id(n * n, BigInt(0));
    for (std::size_t i = 0; i < n; ++i) id[i * n + i] = 1;
    return id;
  }

  static ExactMatrix to_matrix(const std::vector<BigInt>& d, std::size_t r, std::size_t c) {
    MatrixBuilder b(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (sgn(d[i * c + j]) != 0) b.add(i, j, d[i * c + j]);
    return b.build();
  }

  BigInt& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

  // row_i -= q * row_t (on A and U); U^{-1}: col_t += q * col_i
  void row_submul(std::size_t i, std::size_t t, const BigInt& q) {
    for (std::size_t j = 0; j < n_; ++j)
      if (sgn(a_[t * n_ + j]) != 0) mpz_submul(at(i, j).get_mpz_t(), q.get_mpz_t(), a_[t * n_ + j].get_mpz_t());
    if (track_.u)
      for (std::size_t j = 0; j < m_; ++j)
        if (sgn(u_[t * m_ + j]) != 0)
          mpz_submul(u_[i * m_ + j].get_mpz_t(), q.get_mpz_t(), u_[t * m_ + j].get_mpz_t());
    if (track_.u_inv)
      for (std::size_t k = 0; k < m_; ++k)
        if (sgn(u_inv_[k * m_ + i]) != 0)
          mpz_addmul(u_inv_[k * m_ + t].get_mpz_t(), q.get_mpz_t(), u_inv_[k * m_ + i].get_mpz_t());
  }

  // col_j -= q * col_t (on A and V); V^{-1}: row_t += q * row_j
  void col_submul(std::size_t j, std::size_t t, const BigInt& q) {
    for (std::size_t i = 0; i < m_; ++i)
      if (sgn(a_[i * n_ + t]) != 0) mpz_submul(at(i, j).get_mpz_t(), q.get_mpz_t(), a_[i * n_ + t].get_mpz_t());
    if (track_.v)
      for (std::size_t i = 0; i < n_; ++i)
        if (sgn(v_[i * n_ + t]) != 0)
          mpz_submul(v_[i * n_ + j].get_mpz_t(), q.get_mpz_t(), v_[i * n_ + t].get_mpz_t());
    if (track_.v_inv)
      for (std::size_t k = 0; k < n_; ++k)
        if (sgn(v_inv_[j * n_ + k]) != 0)
          mpz_addmul(v_inv_[t * n_ + k].get_mpz_t(), q.get_mpz_t(), v_inv_[j * n_ + k].get_mpz_t());
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < n_; ++j) mpz_swap(at(i, j).get_mpz_t(), at(k, j).get_mpz_t());
    if (track_.u)
      for (std::size_t j = 0; j < m_; ++j) mpz_swap(u_[i * m_ + j].get_mpz_t(), u_[k * m_ + j].get_mpz_t());
    if (track_.u_inv)
      for (std::size_t r = 0; r < m_; ++r) mpz_swap(u_inv_[r * m_ + i].get_mpz_t(), u_inv_[r * m_ + k].get_mpz_t());
  }

  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < m_; ++i) mpz_swap(at(i, j).get_mpz_t(), at(i, k).get_mpz_t());
    if (track_.v)
      for (std::size_t i = 0; i < n_; ++i) mpz_swap(v_[i * n_ + j].get_mpz_t(), v_[i * n_ + k].get_mpz_t());
    if (track_.v_inv)
      for (std::size_t c = 0; c < n_; ++c) mpz_swap(v_inv_[j * n_ + c].get_mpz_t(), v_inv_[k * n_ + c].get_mpz_t());
  }

  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < n_; ++j) mpz_neg(at(i, j).get_mpz_t(), at(i, j).get_mpz_t());
    if (track_.u)
      for (std::size_t j = 0; j < m_; ++j) mpz_neg(u_[i * m_ + j].get_mpz_t(), u_[i * m_ + j].get_mpz_t());
    if (track_.u_inv)
      for (std::size_t r = 0; r < m_; ++r) mpz_neg(u_inv_[r * m_ + i].get_mpz_t(), u_inv_[r * m_ + i].get_mpz_t());
  }

  // row_t += row_i
  void row_add(std::size_t t, std::size_t i) { row_submul(t, i, BigInt(-1)); }

  bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) {
    const BigInt* best = nullptr;
    for (std::size_t i = t; i < m_; ++i)
      for (std::size_t j = t; j < n_; ++j) {
        const BigInt& v = a_[i * n_ + j];
        if (sgn(v) == 0) continue;
        if (best == nullptr || mpz_cmpabs(v.get_mpz_t(), best->get_mpz_t()) < 0) {
          best = &v;
          pi = i;
          pj = j;
          if (mpz_cmpabs_ui(v.get_mpz_t(), 1) == 0) return true;
        }
      }
    return best != nullptr;
  }

  void run() {
    std::size_t t = 0;
    BigInt q;
    while (t < m_ && t < n_) {
      std::size_t pi = 0, pj = 0;
      if (!find_pivot(t, pi, pj)) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m_; ++i) {
        if (sgn(at(i, t)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), at(i, t).get_mpz_t(), at(t, t).get_mpz_t());
        if (sgn(q) != 0) row_submul(i, t, q);
        if (sgn(at(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n_; ++j) {
        if (sgn(at(t, j)) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), at(t, j).get_mpz_t(), at(t, t).get_mpz_t());
        if (sgn(q) != 0) col_submul(j, t, q);
        if (sgn(at(t, j)) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: pull a non-multiple into the pivot row and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < m_ && divides; ++i)
        for (std::size_t j = t + 1; j < n_; ++j) {
          if (sgn(at(i, j)) != 0 && !mpz_divisible_p(at(i, j).get_mpz_t(), at(t, t).get_mpz_t())) {
            row_add(t, i);
            divides = false;
            break;
          }
        }
      if (!divides) continue;
      if (sgn(at(t, t)) < 0) negate_row(t);
      factors_.push_back(at(t, t));
      ++t;
    }
  }

  std::size_t m_, n_;
  Track track_;
  std::vector<BigInt> a_, u_, u_inv_, v_, v_inv_;
  std::vector<BigInt> factors_;
};

}  // namespace detail

inline CohomologyGroup CohomologyGroup::from_cyclic_orders(std::size_t free_rank,
                                                           const std::vector<BigInt>& orders) {
  CohomologyGroup g;
  g.free_rank = free_rank;
  std::vector<BigInt> torsion;
  for (const auto& o : orders) {
    if (o == 0) {
      ++g.free_rank;
    } else if (abs(o) != 1) {
      torsion.push_back(abs(o));
    }
  }
  if (torsion.empty()) return g;
  MatrixBuilder b(torsion.size(), torsion.size());
  for (std::size_t i = 0; i < torsion.size(); ++i) b.add(i, i, torsion[i]);
  detail::SmithEngine e(b.build(), {});
  for (const auto& d : e.factors())
    if (d != 1) g.invariant_factors.push_back(d);
  return g;
}

/// Full Smith decomposition U*A*V = D with U, V unimodular.
inline SmithDecomposition smith_normal_form(const ExactMatrix& a) {
  detail::SmithEngine e(a, {.u = true, .v = true});
  return {e.u(), e.d(), e.v(), e.factors()};
}

/// Invariant factors only (no transforms tracked).
inline std::vector<BigInt> invariant_factors(const ExactMatrix& a) {
  detail::SmithEngine e(a, {});
  return e.factors();
}

inline std::size_t rank(const ExactMatrix& a) { return invariant_factors(a).size(); }

/// Fraction-free (Bareiss) determinant of a square matrix.
inline BigInt determinant(const ExactMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::ShapeMismatch, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  auto m = a.to_dense();
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m[k][k]) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m[p][k]) == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Solver for A x = b (mod M) backed by one Smith decomposition of A, reused
/// across right-hand sides. M = 0 means over Z.
class SmithSolver {
 public:
  explicit SmithSolver(const ExactMatrix& a, BigInt modulus = 0)
      : rows_(a.rows()), cols_(a.cols()), modulus_(std::move(modulus)) {
    detail::SmithEngine e(a, {.u = true, .v = true});
    u_ = e.u();
    v_ = e.v();
    factors_ = e.factors();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<BigInt>& factors() const { return factors_; }

  std::optional<Vector> solve(const Vector& b) const {
    if (b.size() != rows_) throw Error(ErrorKind::ShapeMismatch, "right-hand side length");
    Vector c = u_ * b;
    Vector y(cols_, 0);
    const std::size_t r = factors_.size();
    if (modulus_ == 0) {
      for (std::size_t i = 0; i < r; ++i) {
        if (!mpz_divisible_p(c[i].get_mpz_t(), factors_[i].get_mpz_t())) return std::nullopt;
        mpz_divexact(y[i].get_mpz_t(), c[i].get_mpz_t(), factors_[i].get_mpz_t());
      }
      for (std::size_t i = r; i < rows_; ++i)
        if (sgn(c[i]) != 0) return std::nullopt;
      return v_ * y;
    }
    for (std::size_t i = 0; i < r; ++i) {
      BigInt ci = detail::mod_floor(c[i], modulus_);
      BigInt g = detail::gcd(factors_[i], modulus_);
      if (!mpz_divisible_p(ci.get_mpz_t(), g.get_mpz_t())) return std::nullopt;
      BigInt sub = modulus_ / g;
      y[i] = detail::mod_floor((ci / g) * detail::inverse_mod(BigInt(factors_[i] / g) % sub, sub), sub);
    }
    for (std::size_t i = r; i < rows_; ++i)
      if (sgn(detail::mod_floor(c[i], modulus_)) != 0) return std::nullopt;
    Vector x = v_ * y;
    for (auto& xi : x) xi = detail::mod_floor(xi, modulus_);
    return x;
  }

 private:
  std::size_t rows_, cols_;
  BigInt modulus_;
  ExactMatrix u_, v_;
  std::vector<BigInt> factors_;
};

/// x with A x = b (mod M), or nullopt when no solution exists.
inline std::optional<Vector> solve_mod(const ExactMatrix& a, const Vector& b, const BigInt& modulus = 0) {
  return SmithSolver(a, modulus).solve(b);
}

/// Columns generating {x : A x = 0 (mod M)}; over Z (M = 0) they form a basis.
inline ExactMatrix kernel_basis_mod(const ExactMatrix& a, const BigInt& modulus = 0) {
  detail::SmithEngine e(a, {.v = true});
  const ExactMatrix v = e.v();
  const auto& d = e.factors();
  const std::size_t n = a.cols();
  std::vector<Vector> gens;
  auto vcols = v.columns();
  for (std::size_t i = 0; i < n; ++i) {
    BigInt scale = 1;
    if (modulus != 0 && i < d.size()) {
      scale = modulus / detail::gcd(d[i], modulus);
      if (scale == modulus) continue;
    } else if (modulus == 0 && i < d.size()) {
      continue;
    }
    Vector col = vcols[i];
    bool nonzero = false;
    for (auto& c : col) {
      c = reduce(c * scale, modulus);
      nonzero = nonzero || sgn(c) != 0;
    }
    if (nonzero) gens.push_back(std::move(col));
  }
  return ExactMatrix::from_columns(gens, n);
}

/// ker(d_out) / im(d_in) for the sequence  Z^a --d_in--> Z^b --d_out--> Z^c,
/// over Z (M = 0) or with coefficients reduced mod M.
inline CohomologyGroup homology_at(const ExactMatrix& d_in, const ExactMatrix& d_out, const BigInt& modulus = 0) {
  if (d_in.rows() != d_out.cols())
    throw Error(ErrorKind::ShapeMismatch, "d_in has " + std::to_string(d_in.rows()) + " rows but d_out has " +
                                              std::to_string(d_out.cols()) + " columns");
  const std::size_t b = d_in.rows();
  if (modulus == 1) return {};
  const ExactMatrix comp = d_out * d_in;
  if (modulus == 0 ? !comp.is_zero() : !comp.is_zero_mod(modulus))
    throw Error(ErrorKind::CompositionNonzero, "d_out * d_in != 0");
  if (modulus == 0) {
    const auto in_factors = invariant_factors(d_in);
    const std::size_t out_rank = rank(d_out);
    return CohomologyGroup::from_cyclic_orders(b - out_rank - in_factors.size(), in_factors);
  }
  // ker(d_out mod M) has lattice basis V * diag(k) with k_i = M / gcd(d_i, M)
  // (k_i = 1 past the rank). Express im(d_in) + M Z^b in that basis.
  detail::SmithEngine e(d_out, {.v_inv = true});
  const auto& d = e.factors();
  const ExactMatrix v_inv = e.v_inv();
  std::vector<BigInt> k(b, BigInt(1));
  for (std::size_t i = 0; i < d.size(); ++i) k[i] = modulus / detail::gcd(d[i], modulus);
  const ExactMatrix gens = d_in.hstack(ExactMatrix::identity(b).scaled(modulus));
  const ExactMatrix coords = v_inv * gens;
  MatrixBuilder y(b, coords.cols());
  for (std::size_t i = 0; i < b; ++i)
    for (const auto& [j, val] : coords.row(i)) {
      if (!mpz_divisible_p(val.get_mpz_t(), k[i].get_mpz_t()))
        throw Error(ErrorKind::CompositionNonzero, "image not contained in kernel mod M");
      y.add(i, j, val / k[i]);
    }
  return CohomologyGroup::from_cyclic_orders(0, invariant_factors(y.build()));
}

/// Square unimodular matrix (determinant +1 when n >= 2) whose first column is v.
inline ExactMatrix complete_unimodular(const Vector& v) {
  if (v.empty()) throw Error(ErrorKind::ShapeMismatch, "empty vector");
  BigInt g = 0;
  for (const auto& x : v) g = detail::gcd(g, x);
  if (g != 1) throw Error(ErrorKind::GcdNotOne, "gcd of entries is " + g.get_str());
  const std::size_t n = v.size();
  // U v V = e_1 with V = [+-1], so U^{-1} has first column +-v.
  detail::SmithEngine e(ExactMatrix::from_columns({v}, n), {.u_inv = true, .v = true});
  auto w = e.u_inv().to_dense();
  const BigInt s = e.v().at(0, 0);
  for (std::size_t i = 0; i < n; ++i) w[i][0] *= s;
  ExactMatrix out = ExactMatrix::from_dense(w, n);
  if (n >= 2 && determinant(out) < 0) {
    for (std::size_t i = 0; i < n; ++i) w[i][1] = -w[i][1];
    out = ExactMatrix::from_dense(w, n);
  }
  return out;
}

/// span(W) / span(B) for integer column generators with span(B) inside span(W).
inline CohomologyGroup quotient_group(const ExactMatrix& w, const ExactMatrix& b) {
  if (w.rows() != b.rows()) throw Error(ErrorKind::ShapeMismatch, "generators live in different lattices");
  detail::SmithEngine e(w, {.u = true});
  const auto& d = e.factors();
  const ExactMatrix coords = e.u() * b;
  MatrixBuilder y(d.size(), b.cols());
  for (std::size_t i = 0; i < coords.rows(); ++i)
    for (const auto& [j, val] : coords.row(i)) {
      if (i >= d.size() || !mpz_divisible_p(val.get_mpz_t(), d[i].get_mpz_t()))
        throw Error(ErrorKind::ShapeMismatch, "subgroup not contained in the ambient span");
      y.add(i, j, val / d[i]);
    }
  const auto f = invariant_factors(y.build());
  return CohomologyGroup::from_cyclic_orders(d.size() - f.size(), f);
}

}  // namespace udcoh
