#pragma once

// Exact integer and rational linear algebra over GMP numbers.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "troplag/error.hpp"

namespace troplag {

using Integer = mpz_class;
using Rational = mpq_class;

template <class T>
class Vector {
 public:
  using value_type = T;

  Vector() = default;
  Vector(std::initializer_list<T> xs) : coords_(xs) {}
  explicit Vector(std::vector<T> xs) : coords_(std::move(xs)) {}

  static Vector zero(std::size_t dim) { return Vector(std::vector<T>(dim, T(0))); }

  std::size_t dim() const noexcept { return coords_.size(); }
  T& operator[](std::size_t i) { return coords_[i]; }
  const T& operator[](std::size_t i) const { return coords_[i]; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }
  const std::vector<T>& coords() const noexcept { return coords_; }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const T& x) { return x == 0; });
  }

  Vector& operator+=(const Vector& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < dim(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Vector& operator*=(const T& s) {
    for (auto& x : coords_) x *= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(const T& s, Vector a) { return a *= s; }
  friend Vector operator*(Vector a, const T& s) { return a *= s; }
  friend Vector operator-(Vector a) {
    for (auto& x : a.coords_) x = -x;
    return a;
  }
  friend bool operator==(const Vector& a, const Vector& b) { return a.coords_ == b.coords_; }
  friend bool operator!=(const Vector& a, const Vector& b) { return !(a == b); }
  friend bool operator<(const Vector& a, const Vector& b) { return a.coords_ < b.coords_; }

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < dim(); ++i) os << (i ? "," : "") << coords_[i].get_str();
    os << ')';
    return os.str();
  }

 private:
  void check_same_dim(const Vector& o) const {
    if (o.dim() != dim()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "vector dimensions " + std::to_string(dim()) + " and " + std::to_string(o.dim()));
    }
  }

  std::vector<T> coords_;
};

using IntVector = Vector<Integer>;
using RationalVector = Vector<Rational>;

template <class T>
T dot(const Vector<T>& a, const Vector<T>& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "dot product");
  T s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline RationalVector to_rational(const IntVector& v) {
  std::vector<Rational> xs;
  xs.reserve(v.dim());
  for (const auto& x : v) xs.emplace_back(x);
  return RationalVector(std::move(xs));
}

inline Rational dot(const IntVector& a, const RationalVector& b) { return dot(to_rational(a), b); }

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Builds a matrix whose rows are the given vectors.
  static Matrix from_rows(const std::vector<Vector<T>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].dim() != m.cols_) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<T>& entries() const noexcept { return data_; }

  Vector<T> row(std::size_t r) const {
    return Vector<T>(std::vector<T>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_));
  }
  Vector<T> col(std::size_t c) const {
    std::vector<T> xs;
    xs.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) xs.push_back((*this)(r, c));
    return Vector<T>(std::move(xs));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
  }
  // row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const T& factor) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += factor * (*this)(src, c);
  }
  void add_col(std::size_t dst, std::size_t src, const T& factor) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += factor * (*this)(r, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::ShapeMismatch, "matrix product");
    Matrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += a(i, k) * b(k, j);
      }
    return p;
  }
  friend Vector<T> operator*(const Matrix& a, const Vector<T>& v) {
    if (a.cols_ != v.dim()) throw Error(ErrorCode::ShapeMismatch, "matrix-vector product");
    auto out = Vector<T>::zero(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

inline RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

// ---------------------------------------------------------------------------
// gcd and primitive vectors

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

struct ExtendedGcd {
  Integer g;  // nonnegative
  Integer s;
  Integer t;  // s*a + t*b == g
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  ExtendedGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer content(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

struct PrimitiveDecomposition {
  Integer g;    // gcd of the coordinates, 0 for the zero vector
  IntVector u;  // primitive part; first nonzero coordinate positive
};

/// Splits v == g * u with u primitive and sign-normalized.
inline PrimitiveDecomposition gcd_primitive(const IntVector& v) {
  PrimitiveDecomposition r{content(v), v};
  if (r.g == 0) return r;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (v[i] != 0) {
      if (v[i] < 0) r.g = -r.g;
      break;
    }
  }
  for (std::size_t i = 0; i < v.dim(); ++i) r.u[i] = v[i] / r.g;
  if (r.g < 0) r.g = -r.g;
  return r;
}

/// Primitive vector in the direction of v, keeping the orientation of v.
inline IntVector primitive_part(const IntVector& v) {
  Integer g = content(v);
  if (g == 0) return v;
  IntVector u = v;
  for (std::size_t i = 0; i < u.dim(); ++i) u[i] /= g;
  return u;
}

inline bool is_primitive(const IntVector& v) { return content(v) == 1; }

// ---------------------------------------------------------------------------
// Three-dimensional products

template <class T>
Vector<T> cross(const Vector<T>& u, const Vector<T>& v) {
  if (u.dim() != 3 || v.dim() != 3) {
    throw Error(ErrorCode::DimensionMismatch, "vector product needs two 3-vectors");
  }
  return Vector<T>{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                   u[0] * v[1] - u[1] * v[0]};
}

/// Mixed product (u x v) . w, the determinant with rows u, v, w.
template <class T>
T mixed(const Vector<T>& u, const Vector<T>& v, const Vector<T>& w) {
  if (w.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "mixed product needs 3-vectors");
  return dot(cross(u, v), w);
}

inline Integer det2(const IntVector& u, const IntVector& v) {
  if (u.dim() != 2 || v.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "det2");
  return u[0] * v[1] - u[1] * v[0];
}

/// True iff u and v are linearly dependent.
template <class T>
bool parallel(const Vector<T>& u, const Vector<T>& v) {
  if (u.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "parallel");
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = i + 1; j < u.dim(); ++j)
      if (u[i] * v[j] - u[j] * v[i] != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Determinants and rank

/// Exact determinant. Integer matrices use fraction-free Bareiss elimination.
template <class T>
T determinant(Matrix<T> a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  T sign = 1;
  T prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return T(0);
    if (p != k) {
      a.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        T v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        if constexpr (std::is_same_v<T, Integer>) {
          mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        } else {
          v /= prev;
        }
        a(i, j) = v;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  RationalMatrix a;
  if constexpr (std::is_same_v<T, Rational>) {
    a = m;
  } else {
    a = to_rational(m);
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      Rational f = -a(i, c) / a(r, c);
      a.add_row(i, r, f);
    }
    ++r;
  }
  return r;
}

template <class T>
std::size_t rank(const std::vector<Vector<T>>& vectors) {
  if (vectors.empty()) return 0;
  return rank(Matrix<T>::from_rows(vectors));
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SnfResult {
  IntMatrix U;  // unimodular, rows x rows
  IntMatrix D;  // diagonal, nonnegative, divisor chain
  IntMatrix V;  // unimodular, cols x cols
  std::size_t rank = 0;

  /// Nonzero diagonal entries in order.
  std::vector<Integer> divisors() const {
    std::vector<Integer> out;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
      if (D(i, i) != 0) out.push_back(D(i, i));
    return out;
  }
};

/// Smith normal form U * M * V == D by elementary row and column
/// operations. The pivot is the entry of smallest absolute value in the
/// remaining block, ties broken by lowest row, then lowest column.
inline SnfResult smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SnfResult res{IntMatrix::identity(rows), m, IntMatrix::identity(cols), 0};
  IntMatrix& a = res.D;
  IntMatrix& u = res.U;
  IntMatrix& v = res.V;

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    bool exhausted = false;
    while (true) {
      std::optional<std::pair<std::size_t, std::size_t>> pivot;
      Integer best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (a(i, j) == 0) continue;
          Integer mag = abs(a(i, j));
          if (!pivot || mag < best) {
            pivot = {i, j};
            best = mag;
          }
        }
      if (!pivot) {
        exhausted = true;
        break;
      }
      a.swap_rows(t, pivot->first);
      u.swap_rows(t, pivot->first);
      a.swap_cols(t, pivot->second);
      v.swap_cols(t, pivot->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        a.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        a.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisor chain: the pivot must divide the whole remaining block.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            a.add_row(t, i, 1);
            u.add_row(t, i, 1);
            divides = false;
            break;
          }
        }
      if (divides) break;
    }
    if (exhausted) break;
    if (a(t, t) < 0) {
      a.negate_row(t);
      u.negate_row(t);
    }
    ++res.rank;
  }
  return res;
}

/// Index of the lattice spanned by `gens` inside its saturation.
inline Integer lattice_index(const std::vector<IntVector>& gens) {
  if (gens.empty()) throw Error(ErrorCode::InvalidArgument, "lattice_index needs generators");
  auto snf = smith_normal_form(IntMatrix::from_rows(gens));
  if (snf.rank == 0) throw Error(ErrorCode::ZeroSpan, "all generators are zero");
  Integer index = 1;
  for (const auto& d : snf.divisors()) index *= d;
  return index;
}

/// Basis of the integer kernel {x in Z^cols : M x == 0}.
inline std::vector<IntVector> integer_kernel(const IntMatrix& m) {
  auto snf = smith_normal_form(m);
  std::vector<IntVector> basis;
  for (std::size_t c = snf.rank; c < m.cols(); ++c) basis.push_back(snf.V.col(c));
  return basis;
}

/// Completes a primitive 3-vector d to a lattice basis: returns (a, b) with
/// |det(a, b, d)| == 1.
inline std::pair<IntVector, IntVector> complete_to_basis(const IntVector& d) {
  if (d.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "complete_to_basis needs a 3-vector");
  if (!is_primitive(d)) throw Error(ErrorCode::InvalidArgument, d.str() + " is not primitive");
  IntMatrix row(1, 3);
  for (std::size_t i = 0; i < 3; ++i) row(0, i) = d[i];
  // d^T V = +-e1^T, so d is (up to sign) the first row of V^{-1}; the other
  // two rows of V^{-1} complete it. Rows of the inverse of a 3x3 unimodular
  // matrix are cross products of its columns.
  auto v = smith_normal_form(row).V;
  auto c0 = v.col(0), c1 = v.col(1), c2 = v.col(2);
  std::pair<IntVector, IntVector> ab{cross(c2, c0), cross(c0, c1)};
  if (abs(mixed(ab.first, ab.second, d)) != 1) {
    throw Error(ErrorCode::InternalInconsistency, "basis completion failed for " + d.str());
  }
  return ab;
}

// ---------------------------------------------------------------------------
// Exact rational solving

struct SolveResult {
  enum class Kind { Unique, None, Underdetermined };
  Kind kind = Kind::None;
  RationalVector x;                     // a solution when one exists
  std::vector<RationalVector> kernel;   // basis of the null space
  std::optional<Rational> det;          // set for square systems
  std::size_t rank = 0;
};

/// Solves M x == b by Gauss-Jordan elimination over the rationals.
inline SolveResult solve_exact(const RationalMatrix& m, const RationalVector& b) {
  if (m.rows() != b.dim()) throw Error(ErrorCode::ShapeMismatch, "right-hand side length");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SolveResult res;
  if (rows == cols) res.det = determinant(m);

  RationalMatrix a(rows, cols + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = m(i, j);
    a(i, cols) = b[i];
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a(p, c) == 0) ++p;
    if (p == rows) continue;
    a.swap_rows(p, r);
    Rational inv = 1 / a(r, c);
    for (std::size_t j = 0; j <= cols; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = -a(i, c);
      a.add_row(i, r, f);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  res.rank = r;
  for (std::size_t i = r; i < rows; ++i) {
    if (a(i, cols) != 0) {
      res.kind = SolveResult::Kind::None;
      return res;
    }
  }
  res.x = RationalVector::zero(cols);
  for (std::size_t i = 0; i < r; ++i) res.x[pivot_cols[i]] = a(i, cols);

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    auto k = RationalVector::zero(cols);
    k[f] = 1;
    for (std::size_t i = 0; i < r; ++i) k[pivot_cols[i]] = -a(i, f);
    res.kernel.push_back(std::move(k));
  }
  res.kind = res.kernel.empty() ? SolveResult::Kind::Unique : SolveResult::Kind::Underdetermined;
  return res;
}

// ---------------------------------------------------------------------------
// Small helpers on rationals

/// Parses "p/q", "p" or "-p/q". Throws ParseError on malformed input or a
/// zero denominator.
inline Rational parse_rational(const std::string& text) {
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::ParseError, "bad rational \"" + text + "\": " + why);
  };
  if (text.empty()) throw bad("empty");
  auto slash = text.find('/');
  auto valid_int = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') throw bad("not p/q");
  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0) throw bad("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline std::string rational_str(Rational q) {
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace troplag
