#include "sheafsym/linalg.hpp"

#include <utility>

namespace sheafsym::linalg {

namespace {

void require_square(const QMatrix& a, const char* what) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, what);
}

}  // namespace

Rational determinant(const QMatrix& a) {
  require_square(a, "determinant of a non-square matrix");
  QMatrix m = a;
  const std::size_t n = m.rows();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col).is_zero()) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      det = -det;
    }
    const Rational& p = m(col, col);
    det *= p;
    const Rational inv = p.inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero()) continue;
      const Rational factor = m(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) m(i, j) -= factor * m(col, j);
    }
  }
  return det;
}

QMatrix rref(const QMatrix& a, std::vector<std::size_t>* pivots) {
  QMatrix m = a;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    }
    const Rational inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Rational factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
    }
    if (pivots != nullptr) pivots->push_back(col);
    ++row;
  }
  return m;
}

std::size_t rank(const QMatrix& a) {
  std::vector<std::size_t> pivots;
  rref(a, &pivots);
  return pivots.size();
}

std::vector<QVector> nullspace(const QMatrix& a) {
  std::vector<std::size_t> pivots;
  const QMatrix r = rref(a, &pivots);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    QVector v(a.cols(), Rational(0));
    v[free] = Rational(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r(k, free);
    for (const auto& x : v) {
      if (!x.is_zero()) {
        const Rational inv = x.inverse();
        for (auto& y : v) y *= inv;
        break;
      }
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QMatrix> inverse(const QMatrix& a) {
  require_square(a, "inverse of a non-square matrix");
  const std::size_t n = a.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = Rational(1);
  }
  std::vector<std::size_t> pivots;
  const QMatrix r = rref(aug, &pivots);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  }
  return inv;
}

QMatrix adjugate(const QMatrix& a) {
  require_square(a, "adjugate of a non-square matrix");
  const std::size_t n = a.rows();
  QMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = Rational(1);
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational c = determinant(a.minor(j, i));
      adj(i, j) = ((i + j) % 2 == 0) ? c : -c;
    }
  }
  return adj;
}

QVector multiply(const QMatrix& a, const QVector& v) {
  if (a.cols() != v.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector shape mismatch");
  QVector out(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  }
  return out;
}

Rational dot(const QVector& u, const QVector& v) {
  if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  Rational acc(0);
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

bool is_zero(const QVector& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

}  // namespace sheafsym::linalg
