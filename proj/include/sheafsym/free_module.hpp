#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sheafsym/dense_matrix.hpp"
#include "sheafsym/section.hpp"

namespace sheafsym {

// Element of A(U)^n in a fixed gauge. Stored stalkwise: one rational vector
// per point of U.
class SectionVector {
 public:
  SectionVector() = default;
  SectionVector(OpenSet domain, std::size_t length, std::vector<QVector> stalks);

  static SectionVector constant(const OpenSet& domain, const QVector& v);
  static SectionVector from_entries(const OpenSet& domain, const std::vector<StructureSection>& entries);
  static SectionVector zero(const OpenSet& domain, std::size_t length);

  const OpenSet& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return length_; }
  // Stalk at the k-th member of the domain.
  const QVector& stalk(std::size_t k) const { return stalks_[k]; }
  const std::vector<QVector>& stalks() const noexcept { return stalks_; }
  const QVector& at_point(std::size_t point) const { return stalks_[domain_.position_of(point)]; }
  StructureSection entry(std::size_t i) const;

  bool is_zero() const;
  // Nonzero at every point of the domain.
  bool is_nowhere_zero() const;
  SectionVector restrict(const OpenSet& v) const;
  SectionVector scaled(const StructureSection& c) const;

  friend SectionVector operator+(const SectionVector& a, const SectionVector& b);
  friend SectionVector operator-(const SectionVector& a, const SectionVector& b);
  friend bool operator==(const SectionVector& a, const SectionVector& b) {
    return a.domain_ == b.domain_ && a.length_ == b.length_ && a.stalks_ == b.stalks_;
  }

 private:
  OpenSet domain_;
  std::size_t length_ = 0;
  std::vector<QVector> stalks_;
};

// Matrix with entries in A(U): a morphism A(U)^n -> A(U)^m, a bilinear form,
// or change-of-basis data. Stored stalkwise as one rational matrix per point,
// so every algebraic operation is computed over the stalks and reassembled.
class SectionMatrix {
 public:
  SectionMatrix() = default;
  SectionMatrix(OpenSet domain, std::size_t rows, std::size_t cols, std::vector<QMatrix> stalks);

  static SectionMatrix constant(const OpenSet& domain, const QMatrix& m);
  static SectionMatrix identity(const OpenSet& domain, std::size_t n);
  static SectionMatrix zero(const OpenSet& domain, std::size_t rows, std::size_t cols);
  static SectionMatrix from_entries(const OpenSet& domain, const std::vector<std::vector<StructureSection>>& entries);
  // Columns are the given vectors.
  static SectionMatrix from_columns(const OpenSet& domain, const std::vector<SectionVector>& columns, std::size_t rows);

  const OpenSet& domain() const noexcept { return domain_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  const QMatrix& stalk(std::size_t k) const { return stalks_[k]; }
  const std::vector<QMatrix>& stalks() const noexcept { return stalks_; }
  const QMatrix& at_point(std::size_t point) const { return stalks_[domain_.position_of(point)]; }

  StructureSection entry(std::size_t i, std::size_t j) const;
  SectionVector column(std::size_t j) const;
  std::optional<QMatrix> constant_value() const;

  bool is_zero() const;
  SectionMatrix restrict(const OpenSet& v) const;
  SectionMatrix scaled(const StructureSection& c) const;
  SectionVector apply(const SectionVector& v) const;

  friend SectionMatrix operator+(const SectionMatrix& a, const SectionMatrix& b);
  friend SectionMatrix operator-(const SectionMatrix& a, const SectionMatrix& b);
  friend SectionMatrix operator*(const SectionMatrix& a, const SectionMatrix& b);
  friend SectionMatrix operator-(const SectionMatrix& a);
  friend bool operator==(const SectionMatrix& a, const SectionMatrix& b) {
    return a.domain_ == b.domain_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.stalks_ == b.stalks_;
  }

 private:
  OpenSet domain_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<QMatrix> stalks_;
};

// Composition of morphisms. Throws Error{DimensionMismatch}, Error{DomainMismatch}.
SectionMatrix mat_mul(const SectionMatrix& a, const SectionMatrix& b);

SectionMatrix transpose_morphism(const SectionMatrix& a);

// Coordinate pairing <u, v> = sum_i u_i v_i in A(U).
StructureSection pairing(const SectionVector& u, const SectionVector& v);

// Bilinear form value u^T B v.
StructureSection bilinear(const SectionMatrix& form, const SectionVector& u, const SectionVector& v);

struct DeterminantAdjugate {
  StructureSection det;
  SectionMatrix adj;
};

// det and classical adjoint, computed over each stalk. A adj = adj A = det I.
DeterminantAdjugate determinant_adjugate(const SectionMatrix& a);
StructureSection determinant(const SectionMatrix& a);

// Succeeds iff det(A) is nowhere zero; otherwise throws
// Error{NonUnitDeterminant} whose witness lists the points where det vanishes.
SectionMatrix try_inverse_matrix(const SectionMatrix& a);

// Tensor product of morphisms in the product basis e_i (x) f_p -> index i*q + p.
SectionMatrix kronecker_product(const SectionMatrix& a, const SectionMatrix& b);

// epsilon_1..epsilon_n of A(U)^n.
std::vector<SectionVector> kronecker_gauge(const OpenSet& domain, std::size_t n);

struct IndependenceResult {
  bool independent = true;
  // On failure: a point where the evaluated vectors are dependent and a
  // nontrivial relation sum_i c_i v_i(x) = 0 there.
  std::optional<std::string> witness_point;
  QVector relation;
};

// For the function sheaf, A(U)-linear independence holds iff the vectors are
// Q-independent at every point of U.
IndependenceResult linear_independence(const std::vector<SectionVector>& vectors);

// Per-point rank of a matrix of sections, in member order.
std::vector<std::size_t> pointwise_rank(const SectionMatrix& a);

}  // namespace sheafsym
