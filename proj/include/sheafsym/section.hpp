#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sheafsym/rational.hpp"
#include "sheafsym/site.hpp"

namespace sheafsym {

// A section of the structure sheaf A of rational-valued functions: one
// rational per point of the open set U. Ring operations are pointwise.
class StructureSection {
 public:
  StructureSection() = default;
  // values[k] belongs to the k-th member of U (ascending point index).
  StructureSection(OpenSet domain, std::vector<Rational> values);

  static StructureSection constant(const OpenSet& domain, const Rational& value);
  static StructureSection zero(const OpenSet& domain) { return constant(domain, Rational(0)); }
  static StructureSection one(const OpenSet& domain) { return constant(domain, Rational(1)); }
  // Builds a section from a function of the global point index.
  static StructureSection tabulate(const OpenSet& domain, const std::function<Rational(std::size_t)>& f);

  const OpenSet& domain() const noexcept { return domain_; }
  const std::vector<Rational>& values() const noexcept { return values_; }
  // Value at a global point index (must lie in the domain).
  const Rational& at(std::size_t point) const { return values_[domain_.position_of(point)]; }
  const Rational& at(const std::string& label) const;

  bool is_zero() const;
  // Units of A(U) are exactly the nowhere-zero sections.
  bool is_unit() const;
  bool is_strictly_positive() const;
  // Constant over U (vacuously true on the empty set).
  std::optional<Rational> constant_value() const;
  // Points of the domain where the section vanishes.
  PointMask zero_set() const;

  std::optional<StructureSection> try_inverse() const;
  // Throws Error{DivisionByZero} naming the points where the section vanishes.
  StructureSection inverse() const;
  StructureSection abs() const;
  std::optional<StructureSection> try_sqrt() const;

  // Throws Error{NotASubset}.
  StructureSection restrict(const OpenSet& v) const;

  StructureSection operator-() const;
  StructureSection& operator+=(const StructureSection& rhs);
  StructureSection& operator-=(const StructureSection& rhs);
  StructureSection& operator*=(const StructureSection& rhs);
  friend StructureSection operator+(StructureSection a, const StructureSection& b) { return a += b; }
  friend StructureSection operator-(StructureSection a, const StructureSection& b) { return a -= b; }
  friend StructureSection operator*(StructureSection a, const StructureSection& b) { return a *= b; }
  friend StructureSection operator*(StructureSection a, const Rational& c) {
    for (auto& v : a.values_) v *= c;
    return a;
  }

  friend bool operator==(const StructureSection& a, const StructureSection& b) {
    return a.domain_ == b.domain_ && a.values_ == b.values_;
  }

 private:
  void require_same_domain(const StructureSection& other) const;

  OpenSet domain_;
  std::vector<Rational> values_;
};

std::ostream& operator<<(std::ostream& os, const StructureSection& s);

// Throws Error{DomainMismatch} when the open sets differ.
void require_same_domain(const OpenSet& a, const OpenSet& b, const char* what);

}  // namespace sheafsym
