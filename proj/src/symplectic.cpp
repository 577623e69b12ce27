#include "sheafsym/symplectic.hpp"

#include <algorithm>
#include <utility>

#include "sheafsym/error.hpp"
#include "sheafsym/linalg.hpp"

namespace sheafsym {

namespace {

void require_skew(const SectionMatrix& omega) {
  if (!omega.is_square()) throw Error(ErrorKind::NotSquare, "Gram matrix must be square");
  if (!(transpose_morphism(omega) == -omega)) throw Error(ErrorKind::NotSkew, "Gram matrix is not skew-symmetric");
}

struct PlaneSplitting {
  std::vector<SectionVector> s;
  std::vector<SectionVector> t;
};

// Pivot pair with ω(s, t̄) a unit section: first generator pair in
// lexicographic order, or a stalkwise choice glued into sections.
std::optional<std::pair<SectionVector, SectionVector>> find_pivot(const SectionMatrix& omega,
                                                                  const std::vector<SectionVector>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (bilinear(omega, gens[i], gens[j]).is_unit()) return std::make_pair(gens[i], gens[j]);
    }
  }
  const OpenSet& u = omega.domain();
  const std::size_t n = omega.rows();
  std::vector<QVector> s_stalks;
  std::vector<QVector> t_stalks;
  std::vector<std::string> exhausted;
  const auto members = u.members();
  for (std::size_t k = 0; k < members.size(); ++k) {
    bool found = false;
    for (std::size_t i = 0; i < gens.size() && !found; ++i) {
      const QVector wi = linalg::multiply(omega.stalk(k).transposed(), gens[i].stalk(k));
      for (std::size_t j = i + 1; j < gens.size() && !found; ++j) {
        if (!linalg::dot(wi, gens[j].stalk(k)).is_zero()) {
          s_stalks.push_back(gens[i].stalk(k));
          t_stalks.push_back(gens[j].stalk(k));
          found = true;
        }
      }
    }
    if (!found) exhausted.push_back(u.space()->label(members[k]));
  }
  if (exhausted.size() == members.size()) return std::nullopt;
  if (!exhausted.empty()) {
    throw Error(ErrorKind::NonConstantRank, "form is exhausted at some points but not others", exhausted);
  }
  return std::make_pair(SectionVector(u, n, std::move(s_stalks)), SectionVector(u, n, std::move(t_stalks)));
}

PlaneSplitting split_planes(const SectionMatrix& omega) {
  const OpenSet& u = omega.domain();
  std::vector<SectionVector> gens = kronecker_gauge(u, omega.rows());
  PlaneSplitting out;
  // On the empty open set every section is a unit; the bound keeps the loop finite.
  while (2 * (out.s.size() + 1) <= omega.rows()) {
    auto pivot = find_pivot(omega, gens);
    if (!pivot) break;
    const SectionVector& s = pivot->first;
    const SectionVector t = pivot->second.scaled(bilinear(omega, s, pivot->second).inverse());
    for (auto& z : gens) z = z + t.scaled(bilinear(omega, z, s)) - s.scaled(bilinear(omega, z, t));
    out.s.push_back(s);
    out.t.push_back(t);
  }
  return out;
}

DarbouxBasis assemble(const SectionMatrix& omega, PlaneSplitting planes, std::vector<SectionVector> kernel) {
  DarbouxBasis basis;
  basis.m = planes.s.size();
  basis.s = std::move(planes.s);
  basis.t = std::move(planes.t);
  basis.kernel = std::move(kernel);
  std::vector<SectionVector> columns = basis.s;
  columns.insert(columns.end(), basis.t.begin(), basis.t.end());
  columns.insert(columns.end(), basis.kernel.begin(), basis.kernel.end());
  basis.change_of_basis = SectionMatrix::from_columns(omega.domain(), columns, omega.rows());
  basis.gram = transpose_morphism(basis.change_of_basis) * omega * basis.change_of_basis;
  const auto expected = SectionMatrix::constant(omega.domain(), skew_normal_matrix(omega.rows(), basis.m));
  if (!(basis.gram == expected)) throw Error(ErrorKind::InvariantViolation, "Gram certificate does not verify");
  return basis;
}

Rational random_small_rational(std::mt19937_64& rng) {
  static const long nums[] = {-2, -1, 1, 2, 1, -1, 3};
  static const long dens[] = {1, 1, 1, 2, 3, 1, 1};
  std::uniform_int_distribution<std::size_t> pick(0, 6);
  return {nums[pick(rng)], dens[pick(rng)]};
}

}  // namespace

QMatrix standard_symplectic_matrix(std::size_t m) { return skew_normal_matrix(2 * m, m); }

SectionMatrix standard_symplectic_form(const OpenSet& domain, std::size_t m) {
  return SectionMatrix::constant(domain, standard_symplectic_matrix(m));
}

QMatrix skew_normal_matrix(std::size_t n, std::size_t m) {
  if (2 * m > n) throw Error(ErrorKind::DimensionMismatch, "2m exceeds n");
  QMatrix j(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    j(i, m + i) = Rational(1);
    j(m + i, i) = Rational(-1);
  }
  return j;
}

FormCheck check_form(const SectionMatrix& omega) {
  if (!omega.is_square()) throw Error(ErrorKind::NotSquare, "Gram matrix must be square");
  FormCheck c;
  c.skew = transpose_morphism(omega) == -omega;
  c.ranks = pointwise_rank(omega);
  c.constant_rank = std::adjacent_find(c.ranks.begin(), c.ranks.end(), std::not_equal_to<>()) == c.ranks.end();
  c.det = determinant(omega);
  c.nondegenerate = c.det.is_unit();
  return c;
}

DarbouxBasis darboux_basis(const SectionMatrix& omega) {
  require_skew(omega);
  const StructureSection det = determinant(omega);
  if (!det.is_unit()) {
    throw Error(ErrorKind::Degenerate, "form is degenerate", omega.domain().space()->labels_of(det.zero_set()));
  }
  return assemble(omega, split_planes(omega), {});
}

DarbouxBasis skew_normal_form(const SectionMatrix& omega) {
  require_skew(omega);
  const auto ranks = pointwise_rank(omega);
  const OpenSet& u = omega.domain();
  if (!ranks.empty()) {
    const std::size_t top = *std::max_element(ranks.begin(), ranks.end());
    std::vector<std::string> lower;
    const auto members = u.members();
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      if (ranks[k] < top) lower.push_back(u.space()->label(members[k]));
    }
    if (!lower.empty()) throw Error(ErrorKind::NonConstantRank, "pointwise rank varies over the open set", lower);
  }
  PlaneSplitting planes = split_planes(omega);
  const std::size_t n = omega.rows();
  const std::size_t kernel_dim = n - 2 * planes.s.size();
  std::vector<std::vector<QVector>> kernel_stalks(kernel_dim);
  for (const auto& stalk : omega.stalks()) {
    auto basis = linalg::nullspace(stalk);
    if (basis.size() != kernel_dim) throw Error(ErrorKind::InvariantViolation, "kernel dimension mismatch");
    for (std::size_t i = 0; i < kernel_dim; ++i) kernel_stalks[i].push_back(std::move(basis[i]));
  }
  std::vector<SectionVector> kernel;
  for (auto& ks : kernel_stalks) kernel.emplace_back(u, n, std::move(ks));
  return assemble(omega, std::move(planes), std::move(kernel));
}

KForm two_form_from_matrix(const SectionMatrix& omega) {
  const std::size_t n = omega.rows();
  KForm f = KForm::zero(omega.domain(), n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) f = f + KForm::basis(omega.domain(), n, {i, j}).scaled(omega.entry(i, j));
  }
  return f;
}

KForm standard_sum_decomposition(const DarbouxBasis& basis) {
  const SectionMatrix& p = basis.change_of_basis;
  const SectionMatrix dual = try_inverse_matrix(p);
  const std::size_t n = p.rows();
  const SectionMatrix dual_t = transpose_morphism(dual);
  KForm sum = KForm::zero(p.domain(), n, 2);
  for (std::size_t i = 0; i < basis.m; ++i) {
    const KForm s_star = KForm::one_form(dual_t.column(i));
    const KForm t_star = KForm::one_form(dual_t.column(basis.m + i));
    sum = sum + wedge(s_star, t_star);
  }
  return sum;
}

bool is_symplectic_map(const SectionMatrix& m, const SectionMatrix& omega1, const SectionMatrix& omega2) {
  require_same_domain(m.domain(), omega1.domain(), "map and form over different open sets");
  require_same_domain(m.domain(), omega2.domain(), "map and form over different open sets");
  if (!m.is_square() || !omega1.is_square() || !omega2.is_square() || m.rows() != omega1.rows() ||
      m.rows() != omega2.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "map and forms must share one square size");
  }
  const bool holds = transpose_morphism(m) * omega2 * m == omega1;
  if (holds && m.rows() % 2 == 0) {
    const auto j = standard_symplectic_form(m.domain(), m.rows() / 2);
    if (omega1 == j && omega2 == j && !(determinant(m) == StructureSection::one(m.domain()))) {
      throw Error(ErrorKind::InvariantViolation, "symplectic matrix with determinant != 1");
    }
  }
  return holds;
}

SymplecticMap::SymplecticMap(SectionMatrix m) : m_(std::move(m)) {
  if (!m_.is_square() || m_.rows() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "symplectic maps are 2n x 2n");
  const auto j = standard_symplectic_form(m_.domain(), m_.rows() / 2);
  if (!is_symplectic_map(m_, j, j)) throw Error(ErrorKind::NotSymplectic, "M^T J M != J");
}

SymplecticMap SymplecticMap::identity(const OpenSet& domain, std::size_t half_rank) {
  return SymplecticMap(SectionMatrix::identity(domain, 2 * half_rank));
}

SymplecticMap sp_compose(const SymplecticMap& f, const SymplecticMap& g) {
  if (f.half_rank() != g.half_rank()) throw Error(ErrorKind::DimensionMismatch, "maps of different rank");
  return SymplecticMap(f.matrix() * g.matrix());
}

SymplecticMap sp_invert(const SymplecticMap& f) {
  const auto [det, adj] = determinant_adjugate(f.matrix());
  if (!(det == StructureSection::one(det.domain()))) throw Error(ErrorKind::NotSymplectic, "determinant is not 1");
  const auto j = standard_symplectic_form(f.matrix().domain(), f.half_rank());
  if (!(adj == -(j * transpose_morphism(f.matrix()) * j))) {
    throw Error(ErrorKind::InvariantViolation, "adjugate disagrees with J^{-1} M^T J");
  }
  return SymplecticMap(adj);
}

SectionMatrix hyperbolic_sum_form(const OpenSet& domain, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "rank must be at least 1");
  // Coordinates: first n slots are the E part, last n the E* part.
  auto form = [n](const QVector& x, const QVector& y) {
    Rational alpha2_s1(0);
    Rational alpha1_s2(0);
    for (std::size_t i = 0; i < n; ++i) {
      alpha2_s1 += y[n + i] * x[i];
      alpha1_s2 += x[n + i] * y[i];
    }
    return alpha2_s1 - alpha1_s2;
  };
  QMatrix gram(2 * n, 2 * n);
  for (std::size_t a = 0; a < 2 * n; ++a) {
    for (std::size_t b = 0; b < 2 * n; ++b) {
      QVector ea(2 * n, Rational(0));
      QVector eb(2 * n, Rational(0));
      ea[a] = Rational(1);
      eb[b] = Rational(1);
      gram(a, b) = form(ea, eb);
    }
  }
  return SectionMatrix::constant(domain, gram);
}

KForm orientation_form(const KForm& omega, std::size_t m) {
  if (omega.rank() != 2 * m) throw Error(ErrorKind::DimensionMismatch, "orientation form needs rank 2m");
  const KForm power = form_power(omega, m);
  std::vector<std::size_t> all(2 * m);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const StructureSection top = power.coefficient(all);
  if (!top.is_unit()) {
    throw Error(ErrorKind::DegenerateForm, "omega^m vanishes", omega.domain().space()->labels_of(top.zero_set()));
  }
  Rational scale(1);
  for (std::size_t i = 2; i <= m; ++i) scale *= Rational(static_cast<long>(i));
  scale = scale.inverse();
  if ((m / 2) % 2 == 1) scale = -scale;
  return power.scaled(scale);
}

QMatrix symplectic_transvection(const QVector& v, const Rational& c) {
  const std::size_t n = v.size();
  if (n % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "transvection vector must have even length");
  const QMatrix j = standard_symplectic_matrix(n / 2);
  QMatrix vt(1, n);
  QMatrix vc(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    vt(0, i) = v[i];
    vc(i, 0) = v[i] * c;
  }
  return QMatrix::identity(n) + vc * (vt * j);
}

QMatrix random_invertible(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> entry(-3, 3);
  while (true) {
    QMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = Rational(entry(rng));
    }
    if (!linalg::determinant(a).is_zero()) return a;
  }
}

QMatrix random_symplectic(std::size_t half_rank, std::mt19937_64& rng, std::size_t factors) {
  const std::size_t n = 2 * half_rank;
  std::uniform_int_distribution<long> entry(-2, 2);
  std::uniform_int_distribution<int> kind(0, 3);
  QMatrix m = QMatrix::identity(n);
  for (std::size_t f = 0; f < factors; ++f) {
    if (kind(rng) == 0) {
      const QMatrix a = random_invertible(half_rank, rng);
      const QMatrix a_inv_t = linalg::inverse(a)->transposed();
      QMatrix block(n, n);
      for (std::size_t i = 0; i < half_rank; ++i) {
        for (std::size_t j = 0; j < half_rank; ++j) {
          block(i, j) = a(i, j);
          block(half_rank + i, half_rank + j) = a_inv_t(i, j);
        }
      }
      m = m * block;
    } else {
      QVector v(n);
      do {
        for (auto& x : v) x = Rational(entry(rng));
      } while (linalg::is_zero(v));
      m = m * symplectic_transvection(v, random_small_rational(rng));
    }
  }
  return m;
}

QMatrix planted_spectrum_symplectic(const std::vector<Rational>& eigenvalues, std::mt19937_64& rng) {
  const std::size_t h = eigenvalues.size();
  QMatrix d(2 * h, 2 * h);
  for (std::size_t i = 0; i < h; ++i) {
    d(i, i) = eigenvalues[i];
    d(h + i, h + i) = eigenvalues[i].inverse();
  }
  const QMatrix s = random_symplectic(h, rng, 4);
  const QMatrix j = standard_symplectic_matrix(h);
  // S^{-1} = J^{-1} S^T J = -J S^T J.
  const QMatrix s_inv = -(j * s.transposed() * j);
  return s * d * s_inv;
}

QMatrix random_nondegenerate_skew(std::size_t m, std::mt19937_64& rng) {
  const QMatrix p = random_invertible(2 * m, rng);
  return p.transposed() * standard_symplectic_matrix(m) * p;
}

QMatrix random_skew_of_rank(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  const QMatrix p = random_invertible(n, rng);
  return p.transposed() * skew_normal_matrix(n, m) * p;
}

// ---- SymplecticPresheaf ----

SymplecticPresheaf::SymplecticPresheaf(SpacePtr space, std::size_t half_rank, std::vector<QMatrix> pool)
    : PointwisePresheaf(std::move(space)), half_rank_(half_rank), pool_(std::move(pool)) {
  const QMatrix j = standard_symplectic_matrix(half_rank_);
  for (const auto& m : pool_) {
    if (m.rows() != 2 * half_rank_ || !(m.transposed() * j * m == j)) {
      throw Error(ErrorKind::NotSymplectic, "pool element is not symplectic");
    }
  }
}

std::vector<std::vector<Rational>> SymplecticPresheaf::candidates(std::size_t, const SampleGrid&) const {
  std::vector<std::vector<Rational>> out;
  const std::size_t n = 2 * half_rank_;
  for (const auto& m : pool_) {
    std::vector<Rational> block;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) block.push_back(m(i, j));
    }
    out.push_back(std::move(block));
  }
  return out;
}

bool SymplecticPresheaf::admits(std::size_t, const std::vector<Rational>& block) const {
  const std::size_t n = 2 * half_rank_;
  if (block.size() != n * n) return false;
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = block[i * n + j];
  }
  const QMatrix j = standard_symplectic_matrix(half_rank_);
  return m.transposed() * j * m == j;
}

PresheafSection SymplecticPresheaf::encode(const SymplecticMap& map) const {
  const std::size_t n = 2 * half_rank_;
  if (map.half_rank() != half_rank_) throw Error(ErrorKind::DimensionMismatch, "map of a different rank");
  PresheafSection s{map.matrix().domain(), {}};
  for (const auto& stalk : map.matrix().stalks()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) s.payload.push_back(stalk(i, j));
    }
  }
  return s;
}

SymplecticMap SymplecticPresheaf::decode(const PresheafSection& section) const {
  const std::size_t n = 2 * half_rank_;
  std::vector<QMatrix> stalks;
  for (std::size_t k = 0; k < section.domain.size(); ++k) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = section.payload.at(k * n * n + i * n + j);
    }
    stalks.push_back(std::move(m));
  }
  return SymplecticMap(SectionMatrix(section.domain, n, n, std::move(stalks)));
}

}  // namespace sheafsym
