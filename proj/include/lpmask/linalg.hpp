#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lpmask/errors.hpp"
#include "lpmask/rational.hpp"

namespace lpmask {

class RatVector {
public:
  RatVector() = default;
  explicit RatVector(std::size_t n) : entries_(n) {}
  explicit RatVector(std::vector<Rational> entries) : entries_(std::move(entries)) {}
  RatVector(std::initializer_list<Rational> init) : entries_(init) {}

  static RatVector unit(std::size_t n, std::size_t i) {
    RatVector v(n);
    v[i] = 1;
    return v;
  }

  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  Rational& operator[](std::size_t i) { return entries_[i]; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const RatVector&) const = default;

private:
  std::vector<Rational> entries_;
};

// Row-major dense matrix. Zero-row / zero-column matrices are legal values;
// they represent the empty constraint blocks of a GeneralLP.
class RatMatrix {
public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) {
        throw DimensionError("matrix literal has ragged rows");
      }
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const Rational& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  Rational& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }

  RatVector row(std::size_t i) const {
    RatVector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }

  bool operator==(const RatMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

inline std::string shape_of(const RatMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

// ---- vector arithmetic ----

inline RatVector operator+(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("vector add: lengths " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline RatVector operator-(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("vector subtract: lengths " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline RatVector operator-(const RatVector& a) {
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

inline RatVector operator*(const Rational& s, const RatVector& a) {
  RatVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

inline Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline bool is_zero(const RatVector& a) {
  for (const auto& v : a)
    if (v != 0) return false;
  return true;
}

inline bool is_nonneg(const RatVector& a) {
  for (const auto& v : a)
    if (v < 0) return false;
  return true;
}

inline std::string to_string(const RatVector& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) s += ", ";
    s += to_string(a[i]);
  }
  return s + ")";
}

// ---- matrix arithmetic ----

inline RatMatrix operator*(const RatMatrix& lhs, const RatMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw DimensionError("mat mul: lhs " + shape_of(lhs) + ", rhs " + shape_of(rhs));
  }
  RatMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Rational& l = lhs(i, k);
      if (l == 0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) {
        out(i, j) += l * rhs(k, j);
      }
    }
  }
  return out;
}

inline RatVector operator*(const RatMatrix& m, const RatVector& v) {
  if (m.cols() != v.size()) {
    throw DimensionError("mat-vec mul: matrix " + shape_of(m) + ", vector length " +
                         std::to_string(v.size()));
  }
  RatVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

inline RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("mat add: " + shape_of(a) + " and " + shape_of(b));
  }
  RatMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

inline RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("mat subtract: " + shape_of(a) + " and " + shape_of(b));
  }
  RatMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

inline RatMatrix operator*(const Rational& s, const RatMatrix& a) {
  RatMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
  return out;
}

inline RatMatrix transpose(const RatMatrix& m) {
  RatMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

/// u v^T as a matrix.
inline RatMatrix outer(const RatVector& u, const RatVector& v) {
  RatMatrix out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * v[j];
  return out;
}

// ---- exact elimination ----
// Pivot selection is always "first nonzero in the column"; arithmetic is
// exact, so there is no stability concern and the result is deterministic.

inline Rational determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("determinant: matrix is " + shape_of(m) + ", not square");
  }
  const std::size_t n = m.rows();
  RatMatrix a = m;
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col) == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      const Rational f = a(i, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

namespace detail {

// Gauss-Jordan on [m | extra]; returns pivot column per row position, or the
// full reduced data via out-params. Used by inverse / solve / rank / kernel.
struct Reduced {
  RatMatrix body;                    // RREF of the input block
  RatMatrix extra;                   // carried right-hand block
  std::vector<std::size_t> pivot_cols;
};

inline Reduced row_reduce(const RatMatrix& m, const RatMatrix& extra) {
  Reduced r{m, extra, {}};
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows; ++col) {
    std::size_t piv = lead;
    while (piv < rows && r.body(piv, col) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != lead) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(r.body(piv, j), r.body(lead, j));
      for (std::size_t j = 0; j < r.extra.cols(); ++j)
        std::swap(r.extra(piv, j), r.extra(lead, j));
    }
    const Rational d = r.body(lead, col);
    if (d != 1) {
      for (std::size_t j = 0; j < cols; ++j) r.body(lead, j) /= d;
      for (std::size_t j = 0; j < r.extra.cols(); ++j) r.extra(lead, j) /= d;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == lead) continue;
      const Rational f = r.body(i, col);
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) r.body(i, j) -= f * r.body(lead, j);
      for (std::size_t j = 0; j < r.extra.cols(); ++j)
        r.extra(i, j) -= f * r.extra(lead, j);
    }
    r.pivot_cols.push_back(col);
    ++lead;
  }
  return r;
}

} // namespace detail

inline std::size_t rank_of(const RatMatrix& m) {
  return detail::row_reduce(m, RatMatrix(m.rows(), 0)).pivot_cols.size();
}

inline RatMatrix inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("inverse: matrix is " + shape_of(m) + ", not square");
  }
  auto r = detail::row_reduce(m, RatMatrix::identity(m.rows()));
  if (r.pivot_cols.size() != m.rows()) {
    throw SingularMatrixError("inverse: singular " + shape_of(m) + " matrix");
  }
  return r.extra;
}

/// Solution of m * x = rhs when m is square and nonsingular, nullopt otherwise.
inline std::optional<RatVector> try_solve(const RatMatrix& m, const RatVector& rhs) {
  if (m.rows() != m.cols() || m.rows() != rhs.size()) return std::nullopt;
  RatMatrix b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  auto r = detail::row_reduce(m, b);
  if (r.pivot_cols.size() != m.rows()) return std::nullopt;
  RatVector x(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) x[i] = r.extra(i, 0);
  return x;
}

inline RatVector solve_linear(const RatMatrix& m, const RatVector& rhs) {
  if (m.rows() != m.cols()) {
    throw DimensionError("solve_linear: matrix is " + shape_of(m) + ", not square");
  }
  if (rhs.size() != m.rows()) {
    throw DimensionError("solve_linear: matrix " + shape_of(m) +
                         ", rhs length " + std::to_string(rhs.size()));
  }
  auto x = try_solve(m, rhs);
  if (!x) {
    throw SingularMatrixError("solve_linear: singular " + shape_of(m) + " matrix");
  }
  return *x;
}

/// Basis of the null space {x : m x = 0}, one vector per free column of the
/// RREF, ordered by free-column index.
inline std::vector<RatVector> kernel_basis(const RatMatrix& m) {
  auto r = detail::row_reduce(m, RatMatrix(m.rows(), 0));
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
  std::vector<RatVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RatVector v(m.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < r.pivot_cols.size(); ++i) {
      v[r.pivot_cols[i]] = -r.body(i, free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

} // namespace lpmask
