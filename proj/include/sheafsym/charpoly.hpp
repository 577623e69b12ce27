#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sheafsym/free_module.hpp"
#include "sheafsym/polynomial.hpp"
#include "sheafsym/presheaf.hpp"
#include "sheafsym/symplectic.hpp"

namespace sheafsym {

// Element of A(U)[t]: a polynomial whose coefficients are sections over U,
// stored stalkwise as one rational polynomial per point.
class CharPoly {
 public:
  CharPoly() = default;
  CharPoly(OpenSet domain, std::vector<QPolynomial> stalks);

  const OpenSet& domain() const noexcept { return domain_; }
  const std::vector<QPolynomial>& stalks() const noexcept { return stalks_; }
  const QPolynomial& at_point(std::size_t point) const { return stalks_[domain_.position_of(point)]; }
  // Highest degree over the stalks.
  int degree() const;
  bool is_monic() const;
  StructureSection coefficient(std::size_t i) const;
  // Coefficients 0..degree() as sections, constant term first.
  std::vector<StructureSection> coefficients() const;
  CharPoly restrict(const OpenSet& v) const;

  friend bool operator==(const CharPoly& a, const CharPoly& b) {
    return a.domain_ == b.domain_ && a.stalks_ == b.stalks_;
  }

 private:
  OpenSet domain_;
  std::vector<QPolynomial> stalks_;
};

constexpr std::size_t kMaxCharPolyDimension = 8;

// det(tI - M) over Q[t] by memoized Laplace expansion.
QPolynomial char_poly(const QMatrix& m);
// Pointwise det(tI - M). Throws Error{NotSquare}, Error{DimensionTooLarge} for n > 8.
CharPoly char_poly(const SectionMatrix& m);

// sum_i c_i M^i with M^0 = I, by Horner's rule.
SectionMatrix poly_apply(const CharPoly& p, const SectionMatrix& m);
SectionMatrix poly_apply(const QPolynomial& p, const SectionMatrix& m);

// Returns P_M(M), which must be the zero matrix; throws
// Error{CayleyHamiltonViolation} otherwise.
SectionMatrix cayley_hamilton_check(const SectionMatrix& m);

// M^{-1} = -c_0^{-1} (M^{n-1} + c_{n-1} M^{n-2} + ... + c_1 I) from the
// characteristic polynomial. Throws Error{NonUnitDeterminant}.
SectionMatrix inverse_via_charpoly(const SectionMatrix& m);

// Distinct rational roots, ascending, by the rational root theorem.
std::vector<Rational> rational_roots(const QPolynomial& p);

struct EigenPair {
  StructureSection lambda;
  SectionVector vector;
};

struct EigenReport {
  std::vector<EigenPair> pairs;
  // Points where some gluing branch is missing (including points with no
  // rational eigenvalue at all).
  std::vector<std::string> omitted_points;
};

// At every point: rational eigenvalues ascending, each with its canonical
// eigenvector basis (first nonzero entry 1). The k-th choice at every point
// is glued into the k-th eigenpair section whenever every point has one.
EigenReport eigen_sections(const SectionMatrix& m);

// True iff s is nowhere zero and M s = λ s.
bool is_eigenpair(const SectionMatrix& m, const EigenPair& pair);

// Glues eigenpairs of M over the members of a cover of U into one eigenpair
// over U. Throws Error{NotACover}, Error{NotAnEigenpair}, or
// Error{IncompatibleFamily} with the overlap as witness.
EigenPair eigen_presheaf_glue(const SectionMatrix& m, const std::vector<OpenSet>& cover,
                              const std::vector<EigenPair>& pairs);

struct ReciprocityReport {
  CharPoly poly;
  // t^{2n} P(1/t) == P(t) at every point.
  bool palindromic = false;
  // Rational eigenvalues per point, ascending.
  std::vector<std::vector<Rational>> eigenvalues;
  // Every rational eigenvalue λ is a unit and 1/λ is an eigenvalue of the
  // same algebraic multiplicity at the same point.
  bool closed_under_inverse = false;
};

ReciprocityReport reciprocal_spectrum_check(const SymplecticMap& map);
// Throws Error{NotSymplectic} unless M^T J M = J.
ReciprocityReport reciprocal_spectrum_check(const SectionMatrix& m);

// Sections over U are eigenpairs (λ, s) of M|_U; sampled per point from the
// canonical eigenvectors scaled by nonzero grid values.
class EigenvectorPresheaf final : public PointwisePresheaf {
 public:
  explicit EigenvectorPresheaf(SectionMatrix m);
  std::string name() const override { return "eigenvector"; }
  std::size_t block_width() const override { return m_.rows() + 1; }
  std::vector<std::vector<Rational>> candidates(std::size_t point, const SampleGrid& grid) const override;
  bool admits(std::size_t point, const std::vector<Rational>& block) const override;

  PresheafSection encode(const EigenPair& pair) const;
  EigenPair decode(const PresheafSection& section) const;

 private:
  SectionMatrix m_;
};

}  // namespace sheafsym
