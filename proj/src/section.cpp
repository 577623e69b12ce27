#include "sheafsym/section.hpp"

#include <utility>

#include "sheafsym/error.hpp"

namespace sheafsym {

void require_same_domain(const OpenSet& a, const OpenSet& b, const char* what) {
  if (!(a == b)) throw Error(ErrorKind::DomainMismatch, what);
}

StructureSection::StructureSection(OpenSet domain, std::vector<Rational> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (values_.size() != domain_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "section needs exactly one value per point of its open set");
  }
}

StructureSection StructureSection::constant(const OpenSet& domain, const Rational& value) {
  return {domain, std::vector<Rational>(domain.size(), value)};
}

StructureSection StructureSection::tabulate(const OpenSet& domain, const std::function<Rational(std::size_t)>& f) {
  std::vector<Rational> values;
  values.reserve(domain.size());
  for (auto p : domain.members()) values.push_back(f(p));
  return {domain, std::move(values)};
}

const Rational& StructureSection::at(const std::string& label) const {
  const std::size_t p = domain_.space()->index_of(label);
  if (!domain_.contains(p)) throw Error(ErrorKind::UnknownPoint, "point outside the section's open set", {label});
  return at(p);
}

bool StructureSection::is_zero() const {
  for (const auto& v : values_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

bool StructureSection::is_unit() const { return zero_set() == 0; }

bool StructureSection::is_strictly_positive() const {
  for (const auto& v : values_) {
    if (!v.is_strictly_positive()) return false;
  }
  return true;
}

std::optional<Rational> StructureSection::constant_value() const {
  if (values_.empty()) return Rational(0);
  for (const auto& v : values_) {
    if (!(v == values_.front())) return std::nullopt;
  }
  return values_.front();
}

PointMask StructureSection::zero_set() const {
  PointMask m = 0;
  const auto members = domain_.members();
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k].is_zero()) m |= PointMask{1} << members[k];
  }
  return m;
}

std::optional<StructureSection> StructureSection::try_inverse() const {
  if (!is_unit()) return std::nullopt;
  StructureSection r = *this;
  for (auto& v : r.values_) v = v.inverse();
  return r;
}

StructureSection StructureSection::inverse() const {
  auto r = try_inverse();
  if (!r) {
    throw Error(ErrorKind::DivisionByZero, "section vanishes somewhere", domain_.space()->labels_of(zero_set()));
  }
  return *r;
}

StructureSection StructureSection::abs() const {
  StructureSection r = *this;
  for (auto& v : r.values_) v = v.abs();
  return r;
}

std::optional<StructureSection> StructureSection::try_sqrt() const {
  StructureSection r = *this;
  for (auto& v : r.values_) {
    auto s = v.try_sqrt();
    if (!s) return std::nullopt;
    v = *s;
  }
  return r;
}

StructureSection StructureSection::restrict(const OpenSet& v) const {
  if (v.space() != domain_.space() || !v.is_subset_of(domain_)) {
    throw Error(ErrorKind::NotASubset, "restriction target is not contained in the domain",
                {domain_.space()->describe(v.mask())});
  }
  std::vector<Rational> out;
  out.reserve(v.size());
  for (auto p : v.members()) out.push_back(at(p));
  return {v, std::move(out)};
}

void StructureSection::require_same_domain(const StructureSection& other) const {
  sheafsym::require_same_domain(domain_, other.domain_, "sections over different open sets");
}

StructureSection StructureSection::operator-() const {
  StructureSection r = *this;
  for (auto& v : r.values_) v = -v;
  return r;
}

StructureSection& StructureSection::operator+=(const StructureSection& rhs) {
  require_same_domain(rhs);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += rhs.values_[k];
  return *this;
}

StructureSection& StructureSection::operator-=(const StructureSection& rhs) {
  require_same_domain(rhs);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= rhs.values_[k];
  return *this;
}

StructureSection& StructureSection::operator*=(const StructureSection& rhs) {
  require_same_domain(rhs);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= rhs.values_[k];
  return *this;
}

std::ostream& operator<<(std::ostream& os, const StructureSection& s) {
  os << "{";
  const auto members = s.domain().members();
  for (std::size_t k = 0; k < members.size(); ++k) {
    os << (k == 0 ? "" : ", ") << s.domain().space()->label(members[k]) << ": " << s.values()[k];
  }
  return os << "}";
}

}  // namespace sheafsym
