#pragma once

#include <concepts>

#include "sheafsym/rational.hpp"

namespace sheafsym {

// Identity elements for a commutative unital ring. Specialized per scalar type.
template <class R>
struct RingTraits;

template <>
struct RingTraits<Rational> {
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
};

template <class R>
concept CommutativeRing = std::regular<R> && requires(const R& a, const R& b) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a * b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { RingTraits<R>::zero() } -> std::convertible_to<R>;
  { RingTraits<R>::one() } -> std::convertible_to<R>;
};

template <CommutativeRing R>
bool is_zero(const R& r) {
  return r == RingTraits<R>::zero();
}

}  // namespace sheafsym
