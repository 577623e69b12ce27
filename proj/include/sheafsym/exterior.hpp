#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sheafsym/free_module.hpp"

namespace sheafsym {

// Strictly increasing multi-index over {0..n-1}, stored as a bitmask.
using MultiIndex = std::uint32_t;

// Binomial coefficient C(n, k); 0 when k > n.
std::size_t binomial(std::size_t n, std::size_t k);
// The k-subsets of {0..n-1} in lexicographic order of their sorted tuples.
std::vector<MultiIndex> combinations(std::size_t n, std::size_t k);
// Position of a k-subset in combinations(n, k).
std::size_t combination_rank(std::size_t n, MultiIndex subset);
std::vector<std::size_t> indices_of(MultiIndex subset);
MultiIndex subset_of(const std::vector<std::size_t>& indices);

// Covariant tensor of order k on A(U)^n: coefficients t(e_{j1}, ..., e_{jk})
// for every k-tuple, stored stalkwise (n^k entries per point, first slot
// most significant).
class CovariantTensor {
 public:
  CovariantTensor() = default;
  CovariantTensor(OpenSet domain, std::size_t rank, std::size_t order, std::vector<QVector> stalks);

  static CovariantTensor zero(const OpenSet& domain, std::size_t rank, std::size_t order);
  // The product of dual basis one-forms e^{j1} (x) ... (x) e^{jk}.
  static CovariantTensor basis(const OpenSet& domain, std::size_t rank, const std::vector<std::size_t>& slots);

  const OpenSet& domain() const noexcept { return domain_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t order() const noexcept { return order_; }
  const std::vector<QVector>& stalks() const noexcept { return stalks_; }

  std::size_t flat_index(const std::vector<std::size_t>& slots) const;
  StructureSection coefficient(const std::vector<std::size_t>& slots) const;

  // Multilinear evaluation on `order` vectors of A(U)^rank.
  StructureSection evaluate(const std::vector<SectionVector>& args) const;
  // Changes sign under every transposition of two slots.
  bool is_antisymmetric() const;

  CovariantTensor scaled(const StructureSection& c) const;
  friend CovariantTensor operator+(const CovariantTensor& a, const CovariantTensor& b);
  friend CovariantTensor operator-(const CovariantTensor& a, const CovariantTensor& b);
  friend bool operator==(const CovariantTensor& a, const CovariantTensor& b) {
    return a.domain_ == b.domain_ && a.rank_ == b.rank_ && a.order_ == b.order_ && a.stalks_ == b.stalks_;
  }

 private:
  OpenSet domain_;
  std::size_t rank_ = 0;
  std::size_t order_ = 0;
  std::vector<QVector> stalks_;
};

// (1/k!) sum over S_k of sign(sigma) t(s_sigma(1), ..., s_sigma(k)).
// Throws Error{DegreeTooLarge} for k > 8.
CovariantTensor alternation(const CovariantTensor& t);

// (t1 (x) t2)(s_1..s_{k+l}) = t1(s_1..s_k) t2(s_{k+1}..s_{k+l}).
CovariantTensor tensor_product(const CovariantTensor& t1, const CovariantTensor& t2);

// Exterior k-form on A(U)^n: sum over increasing I of c_I e^I, where the
// basis form e^{i1} ^ ... ^ e^{ik} evaluates to det[e^{i_a}(s_b)].
// Coefficients are stored stalkwise in combinations(n, k) order. A form
// whose degree exceeds its rank is the (flagged) zero form.
class KForm {
 public:
  KForm() = default;
  KForm(OpenSet domain, std::size_t rank, std::size_t degree, std::vector<QVector> stalks);

  static KForm zero(const OpenSet& domain, std::size_t rank, std::size_t degree);
  static KForm scalar(const StructureSection& s, std::size_t rank);
  // e^{i1} ^ ... ^ e^{ik} for 0-based strictly increasing indices.
  static KForm basis(const OpenSet& domain, std::size_t rank, const std::vector<std::size_t>& indices);
  // Degree-1 form with the given coordinate coefficients.
  static KForm one_form(const SectionVector& coefficients);
  // The top form e^1 ^ ... ^ e^n.
  static KForm top(const OpenSet& domain, std::size_t rank);

  const OpenSet& domain() const noexcept { return domain_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t degree() const noexcept { return degree_; }
  bool overflowed() const noexcept { return degree_ > rank_; }
  const std::vector<QVector>& stalks() const noexcept { return stalks_; }

  StructureSection coefficient(MultiIndex subset) const;
  StructureSection coefficient(const std::vector<std::size_t>& indices) const { return coefficient(subset_of(indices)); }
  bool is_zero() const;

  // Full tensor of the form's values on basis tuples.
  CovariantTensor to_tensor() const;
  // Reads an alternating tensor back; throws Error{NotSkew} if it is not alternating.
  static KForm from_tensor(const CovariantTensor& t);

  KForm scaled(const StructureSection& c) const;
  KForm scaled(const Rational& c) const;
  KForm restrict(const OpenSet& v) const;
  friend KForm operator+(const KForm& a, const KForm& b);
  friend KForm operator-(const KForm& a, const KForm& b);
  friend bool operator==(const KForm& a, const KForm& b) {
    return a.domain_ == b.domain_ && a.rank_ == b.rank_ && a.degree_ == b.degree_ && a.stalks_ == b.stalks_;
  }

 private:
  OpenSet domain_;
  std::size_t rank_ = 0;
  std::size_t degree_ = 0;
  std::vector<QVector> stalks_;
};

// Exterior product with the (k+l)!/(k! l!) normalization: on basis forms
// e^I ^ e^J = sign(I, J) e^{I u J}. Degree-0 factors act by multiplication.
// If k + l exceeds the rank the result is the zero form with overflowed() set.
KForm wedge(const KForm& xi, const KForm& eta);

// Throws Error{ArityMismatch} when args.size() != degree.
StructureSection evaluate_form(const KForm& form, const std::vector<SectionVector>& args);

// sqrt|det rho(s_i, s_j)| s_1* ^ ... ^ s_n*. Throws Error{NotSymmetric},
// Error{NotABasis}, Error{DegenerateMetric} or Error{NotExact}.
KForm volume_element(const SectionMatrix& metric, const std::vector<SectionVector>& basis);

// m-fold wedge of a 2-form (m = 0 gives the constant 1). Throws
// Error{DegreeOverflow} when 2m exceeds the rank.
KForm form_power(const KForm& omega, std::size_t m);

// Element of the Grassmann algebra: one component per degree 0..n.
class GradedForm {
 public:
  GradedForm(OpenSet domain, std::size_t rank);
  explicit GradedForm(const KForm& homogeneous);

  const OpenSet& domain() const noexcept { return domain_; }
  std::size_t rank() const noexcept { return rank_; }
  const KForm& component(std::size_t degree) const { return components_.at(degree); }
  void add(const KForm& form);
  // Total number of coefficients per point: sum_k C(n, k) = 2^n.
  std::size_t dimension() const;

  friend GradedForm operator+(const GradedForm& a, const GradedForm& b);
  friend GradedForm wedge(const GradedForm& a, const GradedForm& b);
  friend bool operator==(const GradedForm& a, const GradedForm& b) {
    return a.domain_ == b.domain_ && a.rank_ == b.rank_ && a.components_ == b.components_;
  }

 private:
  OpenSet domain_;
  std::size_t rank_;
  std::vector<KForm> components_;
};

}  // namespace sheafsym
