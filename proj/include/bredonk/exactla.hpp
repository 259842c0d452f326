#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bredonk/errors.hpp"

namespace bredonk {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;

// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (long v : row) data_.emplace_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& v) { return v == 0; });
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  Matrix operator+(const Matrix& o) const {
    check_same(o);
    Matrix r(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    check_same(o);
    Matrix r(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
  }

  std::vector<T> operator*(const std::vector<T>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector: dimension mismatch");
    std::vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  Matrix columns(std::size_t first, std::size_t last) const {
    Matrix r(rows_, last - first);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = first; j < last; ++j) r(i, j - first) = (*this)(i, j);
    return r;
  }

  Matrix row_range(std::size_t first, std::size_t last) const {
    Matrix r(last - first, cols_);
    for (std::size_t i = first; i < last; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i - first, j) = (*this)(i, j);
    return r;
  }

  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
    Matrix r(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) r(i, j) = cols[j][i];
    return r;
  }

  // Stack vertically; all parts share a column count.
  static Matrix vstack(const std::vector<Matrix>& parts, std::size_t cols) {
    std::size_t rows = 0;
    for (const auto& p : parts) {
      if (p.cols() != cols) throw std::invalid_argument("vstack: column mismatch");
      rows += p.rows();
    }
    Matrix r(rows, cols);
    std::size_t at = 0;
    for (const auto& p : parts) {
      for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < cols; ++j) r(at + i, j) = p(i, j);
      at += p.rows();
    }
    return r;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += q * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += q * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const T& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += q * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? "; " : "");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix sum: dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

// Throws if any entry is not an integer.
inline IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw std::domain_error("non-integer entry " + m(i, j).get_str());
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

// Strict "p/q" or integer syntax; floats are refused on purpose.
inline std::optional<Rational> parse_rational(const std::string& s) {
  static const std::regex re(R"(^\s*([+-]?\d+)(\s*/\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) return std::nullopt;
  Integer num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str());
  Integer den = m[3].matched ? Integer(m[3].str()) : Integer(1);
  if (den == 0) return std::nullopt;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string rational_str(Rational q) {
  q.canonicalize();
  return q.get_str();
}

// ---------- rational elimination ----------

struct RowEchelon {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;
};

inline RowEchelon rref(RatMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    Rational inv = 1 / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m(i, c) != 0) m.add_row(i, r, -m(i, c));
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

// Columns of the result span {v : m v = 0}.
inline RatMatrix nullspace(const RatMatrix& m) {
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RatVec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVec v(m.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return RatMatrix::from_columns(basis, m.cols());
}

inline Rational determinant(RatMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  Rational det = 1;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::size_t p = c;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < m.rows(); ++i)
      if (m(i, c) != 0) m.add_row(i, c, -m(i, c) / m(c, c));
  }
  return det;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
  std::size_t n = m.rows();
  if (n != m.cols()) return std::nullopt;
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  return e.reduced.columns(n, 2 * n);
}

// ---------- Smith normal form ----------

struct SmithForm {
  IntMatrix S, U, V;     // U * M * V == S
  IntMatrix Uinv, Vinv;  // kept in sync with U and V
  std::size_t rank = 0;

  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

struct SnfWork {
  IntMatrix a, u, v, uinv, vinv;

  void row_add(std::size_t dst, std::size_t src, const Integer& q) {
    a.add_row(dst, src, q);
    u.add_row(dst, src, q);
    uinv.add_col(src, dst, -q);
  }
  void col_add(std::size_t dst, std::size_t src, const Integer& q) {
    a.add_col(dst, src, q);
    v.add_col(dst, src, q);
    vinv.add_row(src, dst, -q);
  }
  void row_swap(std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    u.swap_rows(x, y);
    uinv.swap_cols(x, y);
  }
  void col_swap(std::size_t x, std::size_t y) {
    a.swap_cols(x, y);
    v.swap_cols(x, y);
    vinv.swap_rows(x, y);
  }
  void row_negate(std::size_t i) {
    a.negate_row(i);
    u.negate_row(i);
    uinv.negate_col(i);
  }
};

}  // namespace detail

// Minimal-|pivot| elimination, row-major scan, ties broken by first hit.
inline SmithForm snf(const IntMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  detail::SnfWork w{m, IntMatrix::identity(R), IntMatrix::identity(C), IntMatrix::identity(R),
                    IntMatrix::identity(C)};
  auto& a = w.a;
  std::size_t t = 0;
  for (; t < std::min(R, C); ++t) {
    // global minimal pivot in the trailing block
    std::size_t pi = R, pj = C;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j)
        if (a(i, j) != 0 && (pi == R || abs(a(i, j)) < abs(a(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == R) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        w.row_add(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        w.col_add(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) {
        // a remainder is smaller than the pivot: move the smallest one in
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < R; ++i)
          if (a(i, t) != 0 && abs(a(i, t)) < abs(a(bi, bj))) bi = i, bj = t;
        for (std::size_t j = t + 1; j < C; ++j)
          if (a(t, j) != 0 && abs(a(t, j)) < abs(a(bi, bj))) bi = t, bj = j;
        w.row_swap(t, bi);
        w.col_swap(t, bj);
        continue;
      }
      std::size_t bad = R;
      for (std::size_t i = t + 1; i < R && bad == R; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == R) break;
      w.row_add(t, bad, 1);
    }
    if (a(t, t) < 0) w.row_negate(t);
  }
  SmithForm out;
  out.rank = t;
  out.S = std::move(w.a);
  out.U = std::move(w.u);
  out.V = std::move(w.v);
  out.Uinv = std::move(w.uinv);
  out.Vinv = std::move(w.vinv);
  return out;
}

inline std::size_t integer_rank(const IntMatrix& m) { return snf(m).rank; }

// Saturated basis (as columns) of the integer kernel.
inline IntMatrix kernel_lattice(const IntMatrix& m) {
  if (m.rows() == 0) return IntMatrix::identity(m.cols());
  auto f = snf(m);
  return f.V.columns(f.rank, m.cols());
}

// Solve K x = y for integer x, K a saturated basis (columns). Throws if y is
// outside the lattice spanned by K.
inline IntMatrix solve_in_lattice(const IntMatrix& k, const IntMatrix& y) {
  if (k.rows() != y.rows()) throw std::invalid_argument("solve_in_lattice: row mismatch");
  if (k.cols() == 0) {
    if (!y.is_zero()) throw std::domain_error("solve_in_lattice: target outside lattice");
    return IntMatrix(0, y.cols());
  }
  auto f = snf(k);
  IntMatrix uy = f.U * y;
  IntMatrix top(k.cols(), y.cols());
  for (std::size_t i = 0; i < uy.rows(); ++i)
    for (std::size_t j = 0; j < uy.cols(); ++j) {
      if (i < f.rank) {
        if (uy(i, j) % f.S(i, i) != 0)
          throw std::domain_error("solve_in_lattice: target outside lattice");
        top(i, j) = uy(i, j) / f.S(i, i);
      } else if (uy(i, j) != 0) {
        throw std::domain_error("solve_in_lattice: target outside span");
      }
    }
  if (f.rank < k.cols()) throw std::domain_error("solve_in_lattice: basis not independent");
  return f.V * top;
}

// ---------- finitely generated abelian groups ----------

struct AbelianGroupInv {
  std::size_t rank = 0;
  std::vector<Integer> torsion;  // d1 | d2 | ..., each >= 2

  bool operator==(const AbelianGroupInv& o) const {
    return rank == o.rank && torsion == o.torsion;
  }
  bool operator!=(const AbelianGroupInv& o) const { return !(*this == o); }

  bool trivial() const { return rank == 0 && torsion.empty(); }

  // Any list of cyclic orders (0 = infinite cyclic) to canonical invariants.
  static AbelianGroupInv from_cyclic(std::size_t free_rank, const std::vector<Integer>& orders) {
    AbelianGroupInv g;
    g.rank = free_rank;
    std::vector<Integer> finite;
    for (const auto& d : orders) {
      if (d == 0) ++g.rank;
      else if (abs(d) != 1) finite.push_back(abs(Integer(d)));
    }
    if (finite.empty()) return g;
    IntMatrix dm(finite.size(), finite.size());
    for (std::size_t i = 0; i < finite.size(); ++i) dm(i, i) = finite[i];
    for (const auto& d : snf(dm).diagonal())
      if (d > 1) g.torsion.push_back(d);
    return g;
  }

  AbelianGroupInv operator+(const AbelianGroupInv& o) const {  // direct sum
    std::vector<Integer> t = torsion;
    t.insert(t.end(), o.torsion.begin(), o.torsion.end());
    return from_cyclic(rank + o.rank, t);
  }

  // "Z^r ⊕ Z/d1 ⊕ ...", "0" for the trivial group.
  std::string str() const {
    std::vector<std::string> parts;
    if (rank == 1) parts.push_back("Z");
    else if (rank > 1) parts.push_back("Z^" + std::to_string(rank));
    for (const auto& d : torsion) parts.push_back("Z/" + d.get_str());
    if (parts.empty()) return "0";
    std::string s = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) s += " ⊕ " + parts[i];
    return s;
  }
};

inline AbelianGroupInv free_abelian(std::size_t r) { return AbelianGroupInv{r, {}}; }

// ker(d_out) / im(d_in) on the middle group Z^m.
inline AbelianGroupInv cochain_cohomology(const IntMatrix& d_in, const IntMatrix& d_out) {
  const std::size_t m = d_in.rows();
  if (d_out.cols() != m)
    throw std::invalid_argument("cochain_cohomology: d_out.cols != d_in.rows");
  if (!(d_out * d_in).is_zero())
    throw InvariantViolation("cochain complex broken: d_out * d_in != 0");

  std::size_t r = 0;
  IntMatrix coords;  // im(d_in) in kernel coordinates
  if (d_out.rows() == 0) {
    coords = d_in;
  } else {
    auto f = snf(d_out);
    r = f.rank;
    IntMatrix all = f.Vinv * d_in;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < all.cols(); ++j)
        if (all(i, j) != 0) throw InvariantViolation("image escapes the kernel");
    coords = all.row_range(r, m);
  }
  const std::size_t k = m - r;
  auto g = snf(coords);
  std::vector<Integer> orders;
  for (const auto& d : g.diagonal())
    if (d != 0) orders.push_back(d);
  return AbelianGroupInv::from_cyclic(k - g.rank, orders);
}

}  // namespace bredonk
