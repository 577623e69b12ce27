#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

#include "sheafsym/error.hpp"
#include "sheafsym/ring.hpp"

namespace sheafsym {

// Dense row-major matrix over a commutative ring. This is the stalk-level
// object: section-valued matrices hold one of these per point.
template <CommutativeRing R>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, RingTraits<R>::zero()) {}
  Matrix(std::initializer_list<std::initializer_list<R>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = RingTraits<R>::one();
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  R& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  Matrix scaled(const R& c) const {
    Matrix m = *this;
    for (auto& x : m.data_) x = x * c;
    return m;
  }

  bool is_zero() const {
    for (const auto& x : data_) {
      if (!(x == RingTraits<R>::zero())) return false;
    }
    return true;
  }

  // Removes row r and column c.
  Matrix minor(std::size_t r, std::size_t c) const {
    Matrix m(rows_ - 1, cols_ - 1);
    for (std::size_t i = 0, mi = 0; i < rows_; ++i) {
      if (i == r) continue;
      for (std::size_t j = 0, mj = 0; j < cols_; ++j) {
        if (j == c) continue;
        m(mi, mj++) = (*this)(i, j);
      }
      ++mi;
    }
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix m = a;
    for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] = m.data_[k] + b.data_[k];
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix m = a;
    for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] = m.data_[k] - b.data_[k];
    return m;
  }
  friend Matrix operator-(const Matrix& a) { return a.scaled(-RingTraits<R>::one()); }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "inner dimensions differ");
    Matrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const R& aik = a(i, k);
        if (aik == RingTraits<R>::zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) = m(i, j) + aik * b(k, j);
      }
    }
    return m;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<R> data_;
};

using QMatrix = Matrix<Rational>;
using QVector = std::vector<Rational>;

template <CommutativeRing R>
Matrix<R> kronecker(const Matrix<R>& a, const Matrix<R>& b) {
  Matrix<R> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (std::size_t p = 0; p < b.rows(); ++p) {
        for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
      }
    }
  }
  return k;
}

// Laplace expansion along rows, memoized on the set of remaining columns.
// Division-free, so it works over any commutative ring (used for det(tI - M)
// over Q[t]). Cost is O(n 2^n) ring operations; n is capped at 20.
template <CommutativeRing R>
R laplace_determinant(const Matrix<R>& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n > 20) throw Error(ErrorKind::DimensionTooLarge, "Laplace expansion limited to n <= 20");
  // minors[mask] = det of rows [n - popcount(mask), n) restricted to columns in mask.
  std::vector<R> minors(std::size_t{1} << n, RingTraits<R>::zero());
  minors[0] = RingTraits<R>::one();
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    const std::size_t row = n - static_cast<std::size_t>(__builtin_popcount(mask));
    R acc = RingTraits<R>::zero();
    int position = 0;
    for (std::size_t col = 0; col < n; ++col) {
      if ((mask & (1U << col)) == 0) continue;
      const R& entry = a(row, col);
      if (!(entry == RingTraits<R>::zero())) {
        R term = entry * minors[mask & ~(1U << col)];
        acc = (position % 2 == 0) ? acc + term : acc - term;
      }
      ++position;
    }
    minors[mask] = std::move(acc);
  }
  return minors[(std::size_t{1} << n) - 1];
}

template <CommutativeRing R>
std::ostream& operator<<(std::ostream& os, const Matrix<R>& m) {
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : ", [");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j == 0 ? "" : ", ") << m(i, j);
    os << "]";
  }
  return os << "]";
}

}  // namespace sheafsym
