#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sheafsym/dense_matrix.hpp"

namespace sheafsym::linalg {

// Exact Gaussian elimination over Q.
Rational determinant(const QMatrix& a);
std::size_t rank(const QMatrix& a);

// Reduced row echelon form; pivot column indices are appended to `pivots`.
QMatrix rref(const QMatrix& a, std::vector<std::size_t>* pivots = nullptr);

// Canonical null-space basis: one vector per free column, read off the RREF,
// each scaled so its first nonzero entry is 1.
std::vector<QVector> nullspace(const QMatrix& a);

std::optional<QMatrix> inverse(const QMatrix& a);

// Classical adjoint via signed cofactor minors: adj(A)_{ij} = (-1)^{i+j} det(A minus row j, col i).
QMatrix adjugate(const QMatrix& a);

QVector multiply(const QMatrix& a, const QVector& v);
Rational dot(const QVector& u, const QVector& v);
bool is_zero(const QVector& v);

}  // namespace sheafsym::linalg
