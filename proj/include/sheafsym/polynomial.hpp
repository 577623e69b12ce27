#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sheafsym/ring.hpp"

namespace sheafsym {

// Dense univariate polynomial in t over a commutative ring, constant term
// first. Trailing zero coefficients are always stripped, so the zero
// polynomial has no coefficients and degree() == -1.
template <CommutativeRing R>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<R> coefficients) : coeffs_(std::move(coefficients)) { strip(); }
  Polynomial(std::initializer_list<R> coefficients) : coeffs_(coefficients) { strip(); }

  static Polynomial constant(const R& c) { return Polynomial(std::vector<R>{c}); }
  // The variable t.
  static Polynomial variable() { return Polynomial({RingTraits<R>::zero(), RingTraits<R>::one()}); }
  static Polynomial monomial(const R& c, std::size_t power) {
    std::vector<R> v(power + 1, RingTraits<R>::zero());
    v[power] = c;
    return Polynomial(std::move(v));
  }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<R>& coefficients() const noexcept { return coeffs_; }

  R coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : RingTraits<R>::zero(); }
  R leading() const { return coeffs_.empty() ? RingTraits<R>::zero() : coeffs_.back(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == RingTraits<R>::one(); }

  // Horner evaluation.
  R evaluate(const R& x) const {
    R acc = RingTraits<R>::zero();
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  // p(q(t)).
  Polynomial compose(const Polynomial& inner) const {
    Polynomial acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * inner + constant(*it);
    return acc;
  }

  Polynomial scaled(const R& c) const {
    std::vector<R> v;
    v.reserve(coeffs_.size());
    for (const auto& a : coeffs_) v.push_back(a * c);
    return Polynomial(std::move(v));
  }

  // t^{deg} p(1/t) for deg >= degree(): reverses the coefficient list padded to deg+1.
  Polynomial reversed(std::size_t deg) const {
    std::vector<R> v(deg + 1, RingTraits<R>::zero());
    for (std::size_t i = 0; i < coeffs_.size() && i <= deg; ++i) v[deg - i] = coeffs_[i];
    return Polynomial(std::move(v));
  }

  Polynomial operator-() const { return scaled(-RingTraits<R>::one()); }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<R> v(std::max(p.coeffs_.size(), q.coeffs_.size()), RingTraits<R>::zero());
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) v[i] = v[i] + p.coeffs_[i];
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i) v[i] = v[i] + q.coeffs_[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-q); }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<R> v(p.coeffs_.size() + q.coeffs_.size() - 1, RingTraits<R>::zero());
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < q.coeffs_.size(); ++j) v[i + j] = v[i + j] + p.coeffs_[i] * q.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }
  Polynomial& operator+=(const Polynomial& q) { return *this = *this + q; }
  Polynomial& operator-=(const Polynomial& q) { return *this = *this - q; }
  Polynomial& operator*=(const Polynomial& q) { return *this = *this * q; }

  friend bool operator==(const Polynomial& p, const Polynomial& q) { return p.coeffs_ == q.coeffs_; }

 private:
  void strip() {
    while (!coeffs_.empty() && coeffs_.back() == RingTraits<R>::zero()) coeffs_.pop_back();
  }

  std::vector<R> coeffs_;
};

template <CommutativeRing R>
struct RingTraits<Polynomial<R>> {
  static Polynomial<R> zero() { return {}; }
  static Polynomial<R> one() { return Polynomial<R>::constant(RingTraits<R>::one()); }
};

using QPolynomial = Polynomial<Rational>;

template <CommutativeRing R>
std::ostream& operator<<(std::ostream& os, const Polynomial<R>& p) {
  if (p.is_zero()) return os << "0";
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const auto& c = p.coefficients()[static_cast<std::size_t>(i)];
    if (c == RingTraits<R>::zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || !(c == RingTraits<R>::one())) os << "(" << c << ")";
    if (i >= 1) os << "t";
    if (i >= 2) os << "^" << i;
  }
  return os;
}

}  // namespace sheafsym
