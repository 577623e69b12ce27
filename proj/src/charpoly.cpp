#include "sheafsym/charpoly.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "sheafsym/error.hpp"
#include "sheafsym/linalg.hpp"

namespace sheafsym {

namespace {

// ---- integer factorization for the rational root theorem ----

mpz_class pollard_rho(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t()) != 0) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2;
    mpz_class y = 2;
    mpz_class d = 1;
    auto step = [&](const mpz_class& v) {
      mpz_class r = v * v + c;
      mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
      return r;
    };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      mpz_class diff = x - y;
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

void factor_into(mpz_class n, std::map<mpz_class, unsigned>& primes) {
  for (unsigned long p = 2; p < 1000 && n > 1; ++p) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      ++primes[mpz_class(p)];
      n /= p;
    }
  }
  std::vector<mpz_class> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    mpz_class m = stack.back();
    stack.pop_back();
    if (m == 1) continue;
    if (mpz_probab_prime_p(m.get_mpz_t(), 30) != 0) {
      ++primes[m];
      continue;
    }
    const mpz_class d = pollard_rho(m);
    stack.push_back(d);
    stack.push_back(m / d);
  }
}

std::vector<mpz_class> positive_divisors(const mpz_class& n) {
  std::map<mpz_class, unsigned> primes;
  factor_into(abs(n), primes);
  std::vector<mpz_class> divisors{1};
  for (const auto& [p, e] : primes) {
    const std::size_t base = divisors.size();
    mpz_class power = 1;
    for (unsigned i = 0; i < e; ++i) {
      power *= p;
      for (std::size_t k = 0; k < base; ++k) divisors.push_back(divisors[k] * power);
    }
  }
  return divisors;
}

// Multiplicity of r as a root of p != 0, by repeated synthetic division.
std::size_t root_multiplicity(QPolynomial p, const Rational& r) {
  std::size_t count = 0;
  while (p.degree() > 0 && p.evaluate(r).is_zero()) {
    const auto& c = p.coefficients();
    std::vector<Rational> q(c.size() - 1);
    Rational carry(0);
    for (std::size_t i = c.size() - 1; i > 0; --i) {
      carry = c[i] + carry * r;
      q[i - 1] = carry;
    }
    p = QPolynomial(std::move(q));
    ++count;
  }
  return count;
}

QMatrix lambda_shift(const QMatrix& m, const Rational& lambda) {
  QMatrix r = m;
  for (std::size_t i = 0; i < m.rows(); ++i) r(i, i) -= lambda;
  return r;
}

// Canonical per-point eigen data: (λ, v) pairs, λ ascending.
std::vector<std::pair<Rational, QVector>> stalk_eigenpairs(const QMatrix& m) {
  std::vector<std::pair<Rational, QVector>> out;
  for (const auto& lambda : rational_roots(char_poly(m))) {
    for (auto& v : linalg::nullspace(lambda_shift(m, lambda))) out.emplace_back(lambda, std::move(v));
  }
  return out;
}

}  // namespace

// ---- CharPoly ----

CharPoly::CharPoly(OpenSet domain, std::vector<QPolynomial> stalks)
    : domain_(std::move(domain)), stalks_(std::move(stalks)) {
  if (stalks_.size() != domain_.size()) throw Error(ErrorKind::DimensionMismatch, "one stalk per point required");
}

int CharPoly::degree() const {
  int d = -1;
  for (const auto& p : stalks_) d = std::max(d, p.degree());
  return d;
}

bool CharPoly::is_monic() const {
  const int d = degree();
  return std::all_of(stalks_.begin(), stalks_.end(), [d](const QPolynomial& p) { return p.degree() == d && p.is_monic(); });
}

StructureSection CharPoly::coefficient(std::size_t i) const {
  std::vector<Rational> values;
  for (const auto& p : stalks_) values.push_back(p.coefficient(i));
  return {domain_, std::move(values)};
}

std::vector<StructureSection> CharPoly::coefficients() const {
  std::vector<StructureSection> out;
  for (int i = 0; i <= degree(); ++i) out.push_back(coefficient(static_cast<std::size_t>(i)));
  return out;
}

CharPoly CharPoly::restrict(const OpenSet& v) const {
  if (v.space() != domain_.space() || !v.is_subset_of(domain_)) {
    throw Error(ErrorKind::NotASubset, "restriction target is not contained in the domain");
  }
  std::vector<QPolynomial> out;
  for (auto p : v.members()) out.push_back(at_point(p));
  return {v, std::move(out)};
}

// ---- characteristic polynomial ----

QPolynomial char_poly(const QMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "characteristic polynomial of a non-square matrix");
  if (m.rows() > kMaxCharPolyDimension) throw Error(ErrorKind::DimensionTooLarge, "characteristic polynomial limited to n <= 8");
  const std::size_t n = m.rows();
  Matrix<QPolynomial> shifted(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      shifted(i, j) = i == j ? QPolynomial{-m(i, j), Rational(1)} : QPolynomial::constant(-m(i, j));
    }
  }
  return laplace_determinant(shifted);
}

CharPoly char_poly(const SectionMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "characteristic polynomial of a non-square matrix");
  if (m.rows() > kMaxCharPolyDimension) throw Error(ErrorKind::DimensionTooLarge, "characteristic polynomial limited to n <= 8");
  std::vector<QPolynomial> stalks;
  for (const auto& s : m.stalks()) stalks.push_back(char_poly(s));
  return {m.domain(), std::move(stalks)};
}

SectionMatrix poly_apply(const CharPoly& p, const SectionMatrix& m) {
  require_same_domain(p.domain(), m.domain(), "polynomial and matrix over different open sets");
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "polynomials act on square matrices");
  std::vector<QMatrix> out;
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < m.stalks().size(); ++k) {
    const auto& coeffs = p.stalks()[k].coefficients();
    QMatrix acc(n, n);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * m.stalk(k) + QMatrix::identity(n).scaled(*it);
    out.push_back(std::move(acc));
  }
  return {m.domain(), n, n, std::move(out)};
}

SectionMatrix poly_apply(const QPolynomial& p, const SectionMatrix& m) {
  return poly_apply(CharPoly(m.domain(), std::vector<QPolynomial>(m.domain().size(), p)), m);
}

SectionMatrix cayley_hamilton_check(const SectionMatrix& m) {
  SectionMatrix residue = poly_apply(char_poly(m), m);
  if (!residue.is_zero()) throw Error(ErrorKind::CayleyHamiltonViolation, "P_M(M) is not zero");
  return residue;
}

SectionMatrix inverse_via_charpoly(const SectionMatrix& m) {
  const CharPoly p = char_poly(m);
  const StructureSection c0 = p.coefficient(0);
  if (!c0.is_unit()) {
    throw Error(ErrorKind::NonUnitDeterminant, "determinant is not a unit section", m.domain().space()->labels_of(c0.zero_set()));
  }
  // Q(t) = (P(t) - c_0) / t, so M Q(M) = -c_0 I.
  std::vector<QPolynomial> quotients;
  for (const auto& s : p.stalks()) {
    const auto& c = s.coefficients();
    quotients.emplace_back(std::vector<Rational>(c.begin() + 1, c.end()));
  }
  const SectionMatrix q = poly_apply(CharPoly(m.domain(), std::move(quotients)), m);
  return q.scaled(-c0.inverse());
}

std::vector<Rational> rational_roots(const QPolynomial& p) {
  if (p.is_zero()) throw Error(ErrorKind::MalformedInput, "the zero polynomial has every number as a root");
  mpz_class lcm = 1;
  for (const auto& c : p.coefficients()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.denominator().get_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& c : p.coefficients()) ints.push_back(c.numerator() * (lcm / c.denominator()));
  std::set<Rational> roots;
  std::size_t low = 0;
  while (low < ints.size() && ints[low] == 0) ++low;
  if (low > 0) roots.insert(Rational(0));
  if (ints.size() - low >= 2) {
    const auto numerators = positive_divisors(ints[low]);
    const auto denominators = positive_divisors(ints.back());
    for (const auto& a : numerators) {
      for (const auto& b : denominators) {
        for (int sign : {1, -1}) {
          Rational candidate(mpq_class(a * sign, b));
          if (roots.count(candidate) == 0 && p.evaluate(candidate).is_zero()) roots.insert(candidate);
        }
      }
    }
  }
  return {roots.begin(), roots.end()};
}

EigenReport eigen_sections(const SectionMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "eigenproblem for a non-square matrix");
  const OpenSet& u = m.domain();
  const auto members = u.members();
  std::vector<std::vector<std::pair<Rational, QVector>>> per_point;
  std::size_t most = 0;
  std::size_t fewest = members.empty() ? 0 : SIZE_MAX;
  for (const auto& s : m.stalks()) {
    per_point.push_back(stalk_eigenpairs(s));
    most = std::max(most, per_point.back().size());
    fewest = std::min(fewest, per_point.back().size());
  }
  EigenReport report;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (per_point[k].size() < most || per_point[k].empty()) report.omitted_points.push_back(u.space()->label(members[k]));
  }
  for (std::size_t branch = 0; branch < fewest; ++branch) {
    std::vector<Rational> lambdas;
    std::vector<QVector> vectors;
    for (auto& choices : per_point) {
      lambdas.push_back(choices[branch].first);
      vectors.push_back(choices[branch].second);
    }
    report.pairs.push_back({StructureSection(u, std::move(lambdas)), SectionVector(u, m.rows(), std::move(vectors))});
  }
  return report;
}

bool is_eigenpair(const SectionMatrix& m, const EigenPair& pair) {
  if (!(pair.lambda.domain() == m.domain()) || !(pair.vector.domain() == m.domain())) return false;
  if (pair.vector.size() != m.cols() || !m.is_square()) return false;
  return pair.vector.is_nowhere_zero() && m.apply(pair.vector) == pair.vector.scaled(pair.lambda);
}

EigenPair eigen_presheaf_glue(const SectionMatrix& m, const std::vector<OpenSet>& cover,
                              const std::vector<EigenPair>& pairs) {
  const OpenSet& u = m.domain();
  if (cover.size() != pairs.size()) throw Error(ErrorKind::DimensionMismatch, "one eigenpair per cover member required");
  if (!is_open_cover(u, cover)) throw Error(ErrorKind::NotACover, "family is not an open cover", u.labels());
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (!is_eigenpair(m.restrict(cover[i]), pairs[i])) {
      throw Error(ErrorKind::NotAnEigenpair, "member is not an eigenpair of the restricted matrix", cover[i].labels());
    }
  }
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = i + 1; j < cover.size(); ++j) {
      const OpenSet overlap = cover[i].intersect(cover[j]);
      if (!(pairs[i].lambda.restrict(overlap) == pairs[j].lambda.restrict(overlap)) ||
          !(pairs[i].vector.restrict(overlap) == pairs[j].vector.restrict(overlap))) {
        throw Error(ErrorKind::IncompatibleFamily, "eigenpairs disagree on an overlap", overlap.labels());
      }
    }
  }
  std::vector<Rational> lambdas;
  std::vector<QVector> vectors;
  for (auto p : u.members()) {
    for (std::size_t i = 0; i < cover.size(); ++i) {
      if (cover[i].contains(p)) {
        lambdas.push_back(pairs[i].lambda.at(p));
        vectors.push_back(pairs[i].vector.at_point(p));
        break;
      }
    }
  }
  EigenPair glued{StructureSection(u, std::move(lambdas)), SectionVector(u, m.rows(), std::move(vectors))};
  if (!is_eigenpair(m, glued)) throw Error(ErrorKind::InvariantViolation, "glued pair is not an eigenpair");
  return glued;
}

ReciprocityReport reciprocal_spectrum_check(const SymplecticMap& map) {
  const SectionMatrix& m = map.matrix();
  ReciprocityReport report;
  report.poly = char_poly(m);
  const std::size_t deg = m.rows();
  report.palindromic = true;
  report.closed_under_inverse = true;
  for (const auto& p : report.poly.stalks()) {
    if (!(p.reversed(deg) == p)) report.palindromic = false;
    auto roots = rational_roots(p);
    for (const auto& r : roots) {
      if (r.is_zero() || root_multiplicity(p, r) != root_multiplicity(p, r.inverse())) report.closed_under_inverse = false;
    }
    report.eigenvalues.push_back(std::move(roots));
  }
  return report;
}

ReciprocityReport reciprocal_spectrum_check(const SectionMatrix& m) { return reciprocal_spectrum_check(SymplecticMap(m)); }

// ---- EigenvectorPresheaf ----

EigenvectorPresheaf::EigenvectorPresheaf(SectionMatrix m) : PointwisePresheaf(m.domain().space()), m_(std::move(m)) {
  if (!m_.is_square()) throw Error(ErrorKind::NotSquare, "eigenproblem for a non-square matrix");
  if (!(m_.domain() == OpenSet::whole(m_.domain().space()))) {
    throw Error(ErrorKind::DomainMismatch, "the eigenvector presheaf needs a matrix over the whole space");
  }
}

std::vector<std::vector<Rational>> EigenvectorPresheaf::candidates(std::size_t point, const SampleGrid& grid) const {
  std::vector<std::vector<Rational>> out;
  for (const auto& [lambda, v] : stalk_eigenpairs(m_.at_point(point))) {
    for (const auto& c : grid.values) {
      if (c.is_zero()) continue;
      std::vector<Rational> block{lambda};
      for (const auto& x : v) block.push_back(x * c);
      out.push_back(std::move(block));
    }
  }
  return out;
}

bool EigenvectorPresheaf::admits(std::size_t point, const std::vector<Rational>& block) const {
  if (block.size() != block_width()) return false;
  const QVector v(block.begin() + 1, block.end());
  if (linalg::is_zero(v)) return false;
  QVector scaled = v;
  for (auto& x : scaled) x *= block.front();
  return linalg::multiply(m_.at_point(point), v) == scaled;
}

PresheafSection EigenvectorPresheaf::encode(const EigenPair& pair) const {
  PresheafSection s{pair.lambda.domain(), {}};
  for (std::size_t k = 0; k < pair.lambda.values().size(); ++k) {
    s.payload.push_back(pair.lambda.values()[k]);
    const auto& v = pair.vector.stalk(k);
    s.payload.insert(s.payload.end(), v.begin(), v.end());
  }
  return s;
}

EigenPair EigenvectorPresheaf::decode(const PresheafSection& section) const {
  const std::size_t w = block_width();
  std::vector<Rational> lambdas;
  std::vector<QVector> vectors;
  for (std::size_t k = 0; k < section.domain.size(); ++k) {
    lambdas.push_back(section.payload.at(k * w));
    vectors.emplace_back(section.payload.begin() + static_cast<std::ptrdiff_t>(k * w + 1),
                         section.payload.begin() + static_cast<std::ptrdiff_t>((k + 1) * w));
  }
  return {StructureSection(section.domain, std::move(lambdas)), SectionVector(section.domain, m_.rows(), std::move(vectors))};
}

}  // namespace sheafsym
