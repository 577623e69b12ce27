#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sheafsym/exterior.hpp"
#include "sheafsym/linalg.hpp"
#include "test_support.hpp"

using namespace sheafsym;

namespace {

OpenSet point_open() { return OpenSet::whole(FiniteSpace::point()); }

KForm random_form(const OpenSet& u, std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<QVector> stalks;
  for (std::size_t p = 0; p < u.size(); ++p) stalks.push_back(oracle::random_vector(binomial(n, k), rng));
  return KForm(u, n, k, std::move(stalks));
}

SectionVector basis_vector(const OpenSet& u, std::size_t n, std::size_t i) { return kronecker_gauge(u, n)[i]; }

SectionVector constant_vector(const OpenSet& u, QVector v) { return SectionVector::constant(u, v); }

Rational value(const StructureSection& s) { return s.values().front(); }

}  // namespace

TEST_CASE("combinatorics of multi-indices") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(2, 3) == 0);
  const auto c = combinations(4, 2);
  REQUIRE(c.size() == 6);
  CHECK(indices_of(c[0]) == std::vector<std::size_t>{0, 1});
  CHECK(indices_of(c[5]) == std::vector<std::size_t>{2, 3});
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(combination_rank(4, c[i]) == i);
  CHECK(subset_of({0, 2}) == MultiIndex{0b101});
}

TEST_CASE("alternation examples") {
  const auto u = point_open();
  CHECK(alternation(CovariantTensor::basis(u, 2, {0, 0})) == CovariantTensor::zero(u, 2, 2));
  const auto t12 = CovariantTensor::basis(u, 2, {0, 1});
  const auto t21 = CovariantTensor::basis(u, 2, {1, 0});
  const auto half = StructureSection::constant(u, Rational(1, 2));
  CHECK(alternation(t12) == (t12 - t21).scaled(half));
  const auto anti = t12 - t21;
  CHECK(alternation(anti) == anti);
  CHECK(error_of([&] { alternation(CovariantTensor::zero(u, 1, 9)); }) == ErrorKind::DegreeTooLarge);
}

TEST_CASE("alternation is an idempotent projection onto forms") {
  std::mt19937_64 rng(21);
  const auto u = point_open();
  for (std::size_t k = 1; k <= 3; ++k) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t n = 3;
      std::size_t size = 1;
      for (std::size_t i = 0; i < k; ++i) size *= n;
      const CovariantTensor t(u, n, k, {oracle::random_vector(size, rng)});
      const auto a = alternation(t);
      CHECK(a.is_antisymmetric());
      CHECK(alternation(a) == a);
      CHECK(KForm::from_tensor(a).to_tensor() == a);
      // Symmetric tensors lie in the kernel.
      if (k == 2) {
        const auto sym = t + CovariantTensor(u, n, 2, {[&] {
                           QVector swapped(size);
                           for (std::size_t i = 0; i < n; ++i) {
                             for (std::size_t j = 0; j < n; ++j) swapped[i * n + j] = t.stalks()[0][j * n + i];
                           }
                           return swapped;
                         }()});
        CHECK(alternation(sym) == CovariantTensor::zero(u, n, 2));
      }
    }
  }
  CHECK(error_of([&] { KForm::from_tensor(CovariantTensor::basis(u, 2, {0, 1})); }) == ErrorKind::NotSkew);
}

TEST_CASE("tensor product evaluation") {
  const auto u = point_open();
  const auto e1e2 = tensor_product(CovariantTensor::basis(u, 2, {0}), CovariantTensor::basis(u, 2, {1}));
  CHECK(value(e1e2.evaluate({basis_vector(u, 2, 0), basis_vector(u, 2, 1)})) == Rational(1));
  CHECK(value(e1e2.evaluate({basis_vector(u, 2, 1), basis_vector(u, 2, 0)})) == Rational(0));
  std::mt19937_64 rng(22);
  const CovariantTensor t(u, 3, 1, {oracle::random_vector(3, rng)});
  const CovariantTensor s(u, 3, 0, {QVector{Rational(5, 2)}});
  CHECK(tensor_product(t, s) == t.scaled(StructureSection::constant(u, Rational(5, 2))));
  for (int trial = 0; trial < 20; ++trial) {
    const CovariantTensor a(u, 3, 1, {oracle::random_vector(3, rng)});
    const CovariantTensor b(u, 3, 1, {oracle::random_vector(3, rng)});
    const auto x = constant_vector(u, oracle::random_vector(3, rng));
    const auto y = constant_vector(u, oracle::random_vector(3, rng));
    const Rational direct = linalg::dot(a.stalks()[0], x.stalk(0)) * linalg::dot(b.stalks()[0], y.stalk(0));
    CHECK(value(tensor_product(a, b).evaluate({x, y})) == direct);
  }
  const auto other = OpenSet::whole(FiniteSpace::discrete({"a"}));
  CHECK(error_of([&] { tensor_product(t, CovariantTensor::zero(other, 3, 1)); }) == ErrorKind::DomainMismatch);
}

TEST_CASE("wedge examples") {
  const auto u = point_open();
  const auto e1 = KForm::basis(u, 3, {0});
  const auto e2 = KForm::basis(u, 3, {1});
  const auto e3 = KForm::basis(u, 3, {2});
  const auto e12 = wedge(e1, e2);
  CHECK(value(evaluate_form(e12, {basis_vector(u, 3, 0), basis_vector(u, 3, 1)})) == Rational(1));
  CHECK(value(evaluate_form(e12, {basis_vector(u, 3, 1), basis_vector(u, 3, 0)})) == Rational(-1));
  std::mt19937_64 rng(23);
  const auto xi = random_form(u, 4, 1, rng);
  CHECK(wedge(xi, xi).is_zero());
  const auto xi3 = random_form(u, 6, 3, rng);
  CHECK(wedge(xi3, xi3).is_zero());
  CHECK(wedge(e12, e3) == wedge(e1, wedge(e2, e3)));
  CHECK(wedge(e12, e3) == KForm::top(u, 3));
  // Degree-0 factor is scalar multiplication.
  const auto two = KForm::scalar(StructureSection::constant(u, Rational(2)), 3);
  CHECK(wedge(two, e12) == e12.scaled(Rational(2)));
  CHECK(wedge(e12, two) == e12.scaled(Rational(2)));
}

TEST_CASE("wedge past the rank is the flagged zero form") {
  const auto u = point_open();
  const auto f = wedge(KForm::basis(u, 2, {0, 1}), KForm::basis(u, 2, {0}));
  CHECK(f.overflowed());
  CHECK(f.degree() == 3);
  CHECK(f.is_zero());
}

TEST_CASE("wedge matches the permutation-sum oracle") {
  std::mt19937_64 rng(24);
  const auto u = point_open();
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t l = 0; k + l <= n; ++l) {
        const auto xi = random_form(u, n, k, rng);
        const auto eta = random_form(u, n, l, rng);
        const auto w = wedge(xi, eta);
        for (auto subset : combinations(n, k + l)) {
          CHECK(value(w.coefficient(subset)) ==
                oracle::wedge_coefficient(oracle::plain(xi), oracle::plain(eta), indices_of(subset)));
        }
      }
    }
  }
}

TEST_CASE("graded commutativity and associativity up to rank 6") {
  std::mt19937_64 rng(25);
  const auto u = OpenSet::whole(FiniteSpace::discrete({"a", "b"}));
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t l = 0; k + l <= n; ++l) {
        const auto xi = random_form(u, n, k, rng);
        const auto eta = random_form(u, n, l, rng);
        const Rational sign = (k * l) % 2 == 0 ? Rational(1) : Rational(-1);
        CHECK(wedge(xi, eta) == wedge(eta, xi).scaled(sign));
        const std::size_t m = (n - k - l) % 3;
        const auto zeta = random_form(u, n, m, rng);
        CHECK(wedge(wedge(xi, eta), zeta) == wedge(xi, wedge(eta, zeta)));
        // Bilinearity in the first slot.
        const auto xi2 = random_form(u, n, k, rng);
        CHECK(wedge(xi + xi2, eta) == wedge(xi, eta) + wedge(xi2, eta));
      }
    }
  }
}

TEST_CASE("evaluate_form examples and the determinant identity") {
  const auto u = point_open();
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(value(evaluate_form(KForm::top(u, n), kronecker_gauge(u, n))) == Rational(1));
  }
  std::mt19937_64 rng(26);
  const auto omega = random_form(u, 4, 2, rng);
  const auto x = constant_vector(u, oracle::random_vector(4, rng));
  CHECK(value(evaluate_form(omega, {x, x})) == Rational(0));
  CHECK(error_of([&] { evaluate_form(omega, {x}); }) == ErrorKind::ArityMismatch);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<QVector> alphas;
      std::vector<SectionVector> args;
      KForm product = KForm::scalar(StructureSection::one(u), n);
      for (std::size_t i = 0; i < k; ++i) {
        alphas.push_back(oracle::random_vector(n, rng));
        product = wedge(product, KForm::one_form(constant_vector(u, alphas.back())));
        args.push_back(constant_vector(u, oracle::random_vector(n, rng)));
      }
      QMatrix pairings(k, k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) pairings(i, j) = linalg::dot(alphas[i], args[j].stalk(0));
      }
      CHECK(value(evaluate_form(product, args)) == oracle::leibniz_det(pairings));
    }
  }
  // Random 2-form on Q^4 against its tensor of basis values.
  const auto y = constant_vector(u, oracle::random_vector(4, rng));
  Rational expected(0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      expected += oracle::on_basis(oracle::plain(omega), {i, j}) * x.stalk(0)[i] * y.stalk(0)[j];
    }
  }
  CHECK(value(evaluate_form(omega, {x, y})) == expected);
}

TEST_CASE("volume element examples") {
  const auto u = point_open();
  CHECK(volume_element(SectionMatrix::identity(u, 3), kronecker_gauge(u, 3)) == KForm::top(u, 3));
  CHECK(volume_element(SectionMatrix::constant(u, QMatrix{{4, 0}, {0, 9}}), kronecker_gauge(u, 2)) ==
        KForm::top(u, 2).scaled(Rational(6)));
  CHECK(error_of([&] { volume_element(SectionMatrix::constant(u, QMatrix{{2, 0}, {0, 1}}), kronecker_gauge(u, 2)); }) ==
        ErrorKind::NotExact);
  CHECK(error_of([&] { volume_element(SectionMatrix::constant(u, QMatrix{{1, 1}, {0, 1}}), kronecker_gauge(u, 2)); }) ==
        ErrorKind::NotSymmetric);
  CHECK(error_of([&] { volume_element(SectionMatrix::constant(u, QMatrix{{1, 0}, {0, 0}}), kronecker_gauge(u, 2)); }) ==
        ErrorKind::DegenerateMetric);
  const auto e1 = basis_vector(u, 2, 0);
  CHECK(error_of([&] { volume_element(SectionMatrix::identity(u, 2), {e1, e1}); }) == ErrorKind::NotABasis);
}

TEST_CASE("form_power examples") {
  const auto u = point_open();
  const auto omega2 = KForm::basis(u, 2, {0, 1});
  CHECK(form_power(omega2, 1) == KForm::top(u, 2));
  CHECK(form_power(omega2, 0) == KForm::scalar(StructureSection::one(u), 2));
  const auto omega4 = KForm::basis(u, 4, {0, 2}) + KForm::basis(u, 4, {1, 3});
  CHECK(form_power(omega4, 2) == KForm::top(u, 4).scaled(Rational(-2)));
  const auto degenerate = KForm::basis(u, 4, {0, 1});
  CHECK(form_power(degenerate, 2).is_zero());
  CHECK(error_of([&] { form_power(omega2, 2); }) == ErrorKind::DegreeOverflow);
}

TEST_CASE("orientation normalization of the standard form") {
  const auto u = point_open();
  for (std::size_t m = 1; m <= 4; ++m) {
    KForm omega = KForm::zero(u, 2 * m, 2);
    for (std::size_t i = 0; i < m; ++i) omega = omega + KForm::basis(u, 2 * m, {i, i + m});
    const Rational sign = (m / 2) % 2 == 0 ? Rational(1) : Rational(-1);
    CHECK(form_power(omega, m).scaled(sign / oracle::factorial(m)) == KForm::top(u, 2 * m));
  }
}

TEST_CASE("Grassmann algebra") {
  std::mt19937_64 rng(27);
  const auto u = point_open();
  for (std::size_t n = 0; n <= 6; ++n) CHECK(GradedForm(u, n).dimension() == (std::size_t{1} << n));
  GradedForm a(u, 3);
  GradedForm b(u, 3);
  for (std::size_t k = 0; k <= 3; ++k) {
    a.add(random_form(u, 3, k, rng));
    b.add(random_form(u, 3, k, rng));
  }
  // Wedge distributes over the homogeneous components.
  const auto ab = wedge(a, b);
  for (std::size_t d = 0; d <= 3; ++d) {
    KForm expected = KForm::zero(u, 3, d);
    for (std::size_t k = 0; k <= d; ++k) expected = expected + wedge(a.component(k), b.component(d - k));
    CHECK(ab.component(d) == expected);
  }
  CHECK(wedge(GradedForm(KForm::scalar(StructureSection::one(u), 3)), a) == a);
}

TEST_CASE("multilinearity over section coefficients") {
  std::mt19937_64 rng(28);
  const auto s = FiniteSpace::discrete({"a", "b", "c"});
  const auto u = OpenSet::whole(s);
  const auto omega = random_form(u, 3, 2, rng);
  const SectionVector x(u, 3, {oracle::random_vector(3, rng), oracle::random_vector(3, rng), oracle::random_vector(3, rng)});
  const SectionVector y(u, 3, {oracle::random_vector(3, rng), oracle::random_vector(3, rng), oracle::random_vector(3, rng)});
  const StructureSection c(u, {Rational(2), Rational(-1, 3), Rational(0)});
  CHECK(evaluate_form(omega, {x.scaled(c), y}) == c * evaluate_form(omega, {x, y}));
  CHECK(evaluate_form(omega, {x, y}) == -evaluate_form(omega, {y, x}));
  CHECK(omega.to_tensor().evaluate({x, y}) == evaluate_form(omega, {x, y}));
}
