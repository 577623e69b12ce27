#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sheafsym/charpoly.hpp"
#include "sheafsym/linalg.hpp"
#include "sheafsym/symplectic.hpp"
#include "test_support.hpp"

using namespace sheafsym;

namespace {

OpenSet point_open() { return OpenSet::whole(FiniteSpace::point()); }

QPolynomial poly(std::initializer_list<Rational> coeffs) { return QPolynomial(std::vector<Rational>(coeffs)); }

SectionMatrix random_section_matrix(const OpenSet& u, std::size_t n, std::mt19937_64& rng) {
  std::vector<QMatrix> stalks;
  for (std::size_t k = 0; k < u.size(); ++k) stalks.push_back(oracle::random_matrix(n, n, rng));
  return SectionMatrix(u, n, n, std::move(stalks));
}

Rational trace(const QMatrix& m) {
  Rational t(0);
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

}  // namespace

TEST_CASE("char_poly examples") {
  const auto u = point_open();
  CHECK(char_poly(SectionMatrix::zero(u, 2, 2)).stalks().front() == poly({0, 0, 1}));
  CHECK(char_poly(SectionMatrix::constant(u, QMatrix{{0, 1}, {-1, 0}})).stalks().front() == poly({1, 0, 1}));
  const auto s = FiniteSpace::discrete({"a", "b"});
  const auto w = OpenSet::whole(s);
  const SectionMatrix f(w, 1, 1, {QMatrix{{2}}, QMatrix{{5}}});
  const auto p = char_poly(f);
  CHECK(p.is_monic());
  CHECK(p.degree() == 1);
  CHECK(p.coefficient(0) == StructureSection(w, {-2, -5}));
  CHECK(p.coefficient(1) == StructureSection::one(w));
  CHECK(error_of([&] { char_poly(SectionMatrix::zero(w, 2, 3)); }) == ErrorKind::NotSquare);
  CHECK(error_of([&] { char_poly(SectionMatrix::identity(w, 9)); }) == ErrorKind::DimensionTooLarge);
}

TEST_CASE("char_poly matches the Leibniz oracle with trace and determinant identities") {
  std::mt19937_64 rng(51);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const QMatrix m = oracle::random_matrix(n, n, rng);
      const QPolynomial p = char_poly(m);
      if (n <= 5) CHECK(p == oracle::char_poly(m));
      CHECK(p.degree() == static_cast<int>(n));
      CHECK(p.is_monic());
      CHECK(p.coefficients()[n - 1] == -trace(m));
      const Rational sign = n % 2 == 0 ? Rational(1) : Rational(-1);
      CHECK(p.coefficients()[0] == sign * linalg::determinant(m));
    }
  }
}

TEST_CASE("poly_apply examples") {
  std::mt19937_64 rng(52);
  const auto u = point_open();
  const auto m = random_section_matrix(u, 3, rng);
  CHECK(poly_apply(QPolynomial::variable(), m) == m);
  CHECK(poly_apply(QPolynomial::constant(Rational(1)), m) == SectionMatrix::identity(u, 3));
  CHECK(poly_apply(poly({1, 0, 1}), SectionMatrix::constant(u, QMatrix{{0, 1}, {-1, 0}})) == SectionMatrix::zero(u, 2, 2));
  CHECK(poly_apply(poly({0, 0, 1}), m) == mat_mul(m, m));
  const auto other = OpenSet::whole(FiniteSpace::discrete({"a", "b"}));
  CHECK(error_of([&] { poly_apply(char_poly(SectionMatrix::identity(other, 3)), m); }) == ErrorKind::DomainMismatch);
  CHECK(error_of([&] { poly_apply(QPolynomial::variable(), SectionMatrix::zero(u, 2, 3)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("Cayley-Hamilton") {
  const auto u = point_open();
  const auto shear = SectionMatrix::constant(u, QMatrix{{1, 1}, {0, 1}});
  CHECK(char_poly(shear).stalks().front() == poly({1, -2, 1}));
  CHECK(cayley_hamilton_check(shear) == SectionMatrix::zero(u, 2, 2));
  const auto w = OpenSet::whole(FiniteSpace::discrete({"a", "b"}));
  CHECK(cayley_hamilton_check(SectionMatrix(w, 2, 2, {QMatrix{{2, 0}, {0, 3}}, QMatrix{{-1, 0}, {0, 7}}})).is_zero());
  std::mt19937_64 rng(53);
  for (int seed = 0; seed < 20; ++seed) CHECK(cayley_hamilton_check(random_section_matrix(u, 5, rng)).is_zero());
  const auto s3 = FiniteSpace::validate({"a", "b", "c"}, {{}, {"b"}, {"a", "b"}, {"b", "c"}, {"a", "b", "c"}});
  for (std::size_t n = 1; n <= 8; ++n) CHECK(cayley_hamilton_check(random_section_matrix(OpenSet::whole(s3), n, rng)).is_zero());
}

TEST_CASE("inverse from the characteristic polynomial matches the adjugate") {
  std::mt19937_64 rng(54);
  const auto w = OpenSet::whole(FiniteSpace::discrete({"a", "b"}));
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto m = random_section_matrix(w, n, rng);
    const auto d = determinant_adjugate(m);
    if (!d.det.is_unit()) continue;
    const auto inv = inverse_via_charpoly(m);
    CHECK(inv == d.adj.scaled(d.det.inverse()));
    CHECK(inv == try_inverse_matrix(m));
  }
  const SectionMatrix singular(w, 2, 2, {QMatrix{{1, 0}, {0, 1}}, QMatrix{{1, 1}, {1, 1}}});
  const auto e = raised_by([&] { inverse_via_charpoly(singular); });
  CHECK(e.kind() == ErrorKind::NonUnitDeterminant);
  CHECK(e.witness() == std::vector<std::string>{"b"});
}

TEST_CASE("rational roots") {
  CHECK(rational_roots(poly({1, 0, 1})).empty());
  CHECK(rational_roots(poly({-2, 0, 1})).empty());
  CHECK(rational_roots(poly({6, -5, 1})) == std::vector<Rational>{2, 3});
  CHECK(rational_roots(poly({1, Rational(-5, 2), 1})) == std::vector<Rational>{Rational(1, 2), 2});
  CHECK(rational_roots(poly({0, 0, 1})) == std::vector<Rational>{0});
  CHECK(rational_roots(poly({3})).empty());
  CHECK(error_of([] { rational_roots(QPolynomial()); }) == ErrorKind::MalformedInput);
  // Products of planted linear factors recover exactly the planted roots.
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rational> planted;
    QPolynomial p = QPolynomial::constant(oracle::random_rational(rng) + Rational(7));
    for (int k = 0; k < 1 + trial % 4; ++k) {
      planted.push_back(oracle::random_rational(rng, 12, 9));
      p = p * poly({-planted.back(), 1});
    }
    p = p * poly({1, 0, 1});
    std::sort(planted.begin(), planted.end());
    planted.erase(std::unique(planted.begin(), planted.end()), planted.end());
    CHECK(rational_roots(p) == planted);
  }
}

TEST_CASE("eigen_sections examples") {
  const auto u = point_open();
  const auto diag = eigen_sections(SectionMatrix::constant(u, QMatrix{{2, 0}, {0, 3}}));
  REQUIRE(diag.pairs.size() == 2);
  CHECK(diag.pairs[0].lambda == StructureSection::constant(u, Rational(2)));
  CHECK(diag.pairs[0].vector == SectionVector::constant(u, {1, 0}));
  CHECK(diag.pairs[1].lambda == StructureSection::constant(u, Rational(3)));
  CHECK(diag.pairs[1].vector == SectionVector::constant(u, {0, 1}));
  CHECK(diag.omitted_points.empty());

  const auto w = OpenSet::whole(FiniteSpace::discrete({"a", "b"}));
  const auto glued = eigen_sections(SectionMatrix(w, 1, 1, {QMatrix{{2}}, QMatrix{{5}}}));
  REQUIRE(glued.pairs.size() == 1);
  CHECK(glued.pairs[0].lambda == StructureSection(w, {2, 5}));
  CHECK(glued.pairs[0].vector == SectionVector::constant(w, {1}));

  const auto rotation = eigen_sections(SectionMatrix::constant(u, QMatrix{{0, 1}, {-1, 0}}));
  CHECK(rotation.pairs.empty());
  CHECK(rotation.omitted_points == std::vector<std::string>{"x"});
}

TEST_CASE("eigen_sections output is always an eigenpair") {
  std::mt19937_64 rng(56);
  const auto w = OpenSet::whole(FiniteSpace::discrete({"a", "b", "c"}));
  std::uniform_int_distribution<int> small(-2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::vector<QMatrix> stalks;
    for (int k = 0; k < 3; ++k) {
      // Triangular stalks have rational spectra.
      QMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) m(i, j) = Rational(small(rng));
      }
      stalks.push_back(m);
    }
    const SectionMatrix m(w, n, n, stalks);
    const auto report = eigen_sections(m);
    CHECK(!report.pairs.empty());
    for (const auto& pair : report.pairs) {
      CHECK(is_eigenpair(m, pair));
      CHECK(pair.vector.is_nowhere_zero());
      CHECK(m.apply(pair.vector) == pair.vector.scaled(pair.lambda));
    }
  }
}

TEST_CASE("eigen_presheaf_glue examples") {
  const auto s = FiniteSpace::discrete({"a", "b"});
  const auto w = OpenSet::whole(s);
  const SectionMatrix m(w, 1, 1, {QMatrix{{2}}, QMatrix{{5}}});
  const auto a = OpenSet::from_labels(s, {"a"});
  const auto b = OpenSet::from_labels(s, {"b"});
  const EigenPair at_a{StructureSection::constant(a, 2), SectionVector::constant(a, {1})};
  const EigenPair at_b{StructureSection::constant(b, 5), SectionVector::constant(b, {1})};
  const auto glued = eigen_presheaf_glue(m, {a, b}, {at_a, at_b});
  CHECK(glued.lambda == StructureSection(w, {2, 5}));
  CHECK(glued.vector == SectionVector::constant(w, {1}));
  CHECK(is_eigenpair(m, glued));
  // Single-member cover is the identity.
  CHECK(eigen_presheaf_glue(m, {w}, {glued}).vector == glued.vector);
  const EigenPair wrong{StructureSection::constant(a, 3), SectionVector::constant(a, {1})};
  CHECK(error_of([&] { eigen_presheaf_glue(m, {a, b}, {wrong, at_b}); }) == ErrorKind::NotAnEigenpair);
  CHECK(error_of([&] { eigen_presheaf_glue(m, {a}, {at_a}); }) == ErrorKind::NotACover);
  CHECK(error_of([&] { eigen_presheaf_glue(m, {a, b}, {at_a}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("eigen_presheaf_glue rejects families that differ on an overlap") {
  const auto s = FiniteSpace::validate({"a", "b", "c"}, {{}, {"b"}, {"a", "b"}, {"b", "c"}, {"a", "b", "c"}});
  const auto whole = OpenSet::whole(s);
  const auto m = SectionMatrix::identity(whole, 1).scaled(StructureSection::constant(whole, 2));
  const auto ab = OpenSet::from_labels(s, {"a", "b"});
  const auto bc = OpenSet::from_labels(s, {"b", "c"});
  const EigenPair left{StructureSection::constant(ab, 2), SectionVector::constant(ab, {1})};
  const EigenPair right{StructureSection::constant(bc, 2), SectionVector::constant(bc, {3})};
  const auto e = raised_by([&] { eigen_presheaf_glue(m, {ab, bc}, {left, right}); });
  CHECK(e.kind() == ErrorKind::IncompatibleFamily);
  CHECK(e.witness() == std::vector<std::string>{"b"});
  const EigenPair right_ok{StructureSection::constant(bc, 2), SectionVector(bc, 1, {{1}, {4}})};
  CHECK(eigen_presheaf_glue(m, {ab, bc}, {left, right_ok}).vector == SectionVector(whole, 1, {{1}, {1}, {4}}));
}

TEST_CASE("reciprocal spectrum examples") {
  const auto u = point_open();
  const SymplecticMap d(SectionMatrix::constant(u, QMatrix{{2, 0}, {0, Rational(1, 2)}}));
  const auto r = reciprocal_spectrum_check(d);
  CHECK(r.poly.stalks().front() == poly({1, Rational(-5, 2), 1}));
  CHECK(r.poly.stalks().front() == oracle::char_poly(d.matrix().stalk(0)));
  CHECK(r.palindromic);
  CHECK(r.closed_under_inverse);
  CHECK(r.eigenvalues.front() == std::vector<Rational>{Rational(1, 2), 2});
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto id = reciprocal_spectrum_check(SymplecticMap::identity(u, n));
    QPolynomial expected = QPolynomial::constant(1);
    for (std::size_t i = 0; i < 2 * n; ++i) expected = expected * poly({-1, 1});
    CHECK(id.poly.stalks().front() == expected);
    CHECK(id.palindromic);
    CHECK(id.eigenvalues.front() == std::vector<Rational>{1});
  }
  CHECK(error_of([&] { reciprocal_spectrum_check(SectionMatrix::constant(u, QMatrix{{2, 0}, {0, 2}})); }) ==
        ErrorKind::NotSymplectic);
}

TEST_CASE("symplectic spectra are reciprocal") {
  std::mt19937_64 rng(57);
  const auto w = OpenSet::whole(FiniteSpace::discrete({"a", "b"}));
  for (std::size_t half = 1; half <= 4; ++half) {
    for (int trial = 0; trial < 5; ++trial) {
      const SectionMatrix m(w, 2 * half, 2 * half, {random_symplectic(half, rng), random_symplectic(half, rng)});
      const auto r = reciprocal_spectrum_check(m);
      CHECK(r.palindromic);
      CHECK(r.closed_under_inverse);
      for (const auto& p : r.poly.stalks()) CHECK(p.reversed(static_cast<int>(2 * half)) == p);
    }
  }
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<Rational> planted{Rational(2 + trial), Rational(-1, 3 + trial)};
    const QMatrix m = planted_spectrum_symplectic(planted, rng);
    const auto r = reciprocal_spectrum_check(SectionMatrix::constant(OpenSet::whole(FiniteSpace::point()), m));
    std::vector<Rational> expected{planted[0], planted[1], planted[0].inverse(), planted[1].inverse()};
    std::sort(expected.begin(), expected.end());
    CHECK(r.eigenvalues.front() == expected);
    CHECK(r.closed_under_inverse);
  }
}

TEST_CASE("char_poly restricts compatibly") {
  std::mt19937_64 rng(58);
  const auto s = FiniteSpace::validate({"a", "b", "c"}, {{}, {"a"}, {"a", "b"}, {"a", "b", "c"}});
  const auto m = random_section_matrix(OpenSet::whole(s), 3, rng);
  for (auto mask : s->opens()) {
    const OpenSet v(s, mask);
    CHECK(char_poly(m.restrict(v)) == char_poly(m).restrict(v));
  }
}

TEST_CASE("eigenvector presheaf") {
  const auto s = FiniteSpace::discrete({"a", "b"});
  const auto w = OpenSet::whole(s);
  const SectionMatrix m(w, 2, 2, {QMatrix{{2, 0}, {0, 3}}, QMatrix{{5, 1}, {0, 5}}});
  const EigenvectorPresheaf p(m);
  const auto grid = SampleGrid::of({Rational(1), Rational(-2)});
  for (const auto& section : p.sections(w, grid)) {
    CHECK(p.is_section(section));
    CHECK(is_eigenpair(m, p.decode(section)));
    CHECK(p.encode(p.decode(section)) == section);
  }
  CHECK(p.sections(w, grid).size() == 4 * 2);
  CHECK_FALSE(p.admits(0, {2, 0, 1}));
  CHECK_FALSE(p.admits(0, {2, 0, 0}));
  CHECK(check_completeness(p, w, {OpenSet::from_labels(s, {"a"}), OpenSet::from_labels(s, {"b"})}, grid).complete());
  CHECK(error_of([&] { EigenvectorPresheaf(m.restrict(OpenSet::from_labels(s, {"a"}))); }) == ErrorKind::DomainMismatch);
}
