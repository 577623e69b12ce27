#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sheafsym {

// Exact rational number in canonical form (reduced, positive denominator).
// Backed by GMP's mpq_class; every public operation re-canonicalizes.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);
  explicit Rational(const mpz_class& integer) : value_(integer) {}
  explicit Rational(mpq_class value);

  // Accepts "p", "-p", "p/q". Throws Error{MalformedInput} on bad syntax
  // and Error{DivisionByZero} on a zero denominator.
  static Rational parse(std::string_view text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const noexcept { return value_; }

  bool is_zero() const noexcept { return sgn(value_) == 0; }
  bool is_one() const noexcept { return value_ == 1; }
  bool is_integer() const noexcept { return value_.get_den() == 1; }
  int sign() const noexcept { return sgn(value_); }
  bool is_strictly_positive() const noexcept { return sign() > 0; }

  Rational abs() const;
  // Throws Error{DivisionByZero} for 0.
  Rational inverse() const;
  std::optional<Rational> try_inverse() const;
  // Exact square root when numerator and denominator are perfect squares.
  // Throws Error{NegativeInput} for a < 0, Error{NotExact} otherwise.
  Rational sqrt() const;
  std::optional<Rational> try_sqrt() const;
  Rational pow(unsigned exponent) const;

  std::string to_string() const;
  // Consistent with ==; mixes every limb of numerator and denominator.
  std::size_t hash() const noexcept;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

}  // namespace sheafsym

template <>
struct std::hash<sheafsym::Rational> {
  std::size_t operator()(const sheafsym::Rational& r) const noexcept { return r.hash(); }
};
