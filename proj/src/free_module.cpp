#include "sheafsym/free_module.hpp"

#include <utility>

#include "sheafsym/error.hpp"
#include "sheafsym/linalg.hpp"

namespace sheafsym {

// ---- SectionVector ----

SectionVector::SectionVector(OpenSet domain, std::size_t length, std::vector<QVector> stalks)
    : domain_(std::move(domain)), length_(length), stalks_(std::move(stalks)) {
  if (stalks_.size() != domain_.size()) throw Error(ErrorKind::DimensionMismatch, "one stalk per point required");
  for (const auto& s : stalks_) {
    if (s.size() != length_) throw Error(ErrorKind::DimensionMismatch, "stalk length differs from vector length");
  }
}

SectionVector SectionVector::constant(const OpenSet& domain, const QVector& v) {
  return {domain, v.size(), std::vector<QVector>(domain.size(), v)};
}

SectionVector SectionVector::from_entries(const OpenSet& domain, const std::vector<StructureSection>& entries) {
  std::vector<QVector> stalks(domain.size(), QVector(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    require_same_domain(entries[i].domain(), domain, "vector entry over a different open set");
    for (std::size_t k = 0; k < domain.size(); ++k) stalks[k][i] = entries[i].values()[k];
  }
  return {domain, entries.size(), std::move(stalks)};
}

SectionVector SectionVector::zero(const OpenSet& domain, std::size_t length) {
  return constant(domain, QVector(length, Rational(0)));
}

StructureSection SectionVector::entry(std::size_t i) const {
  std::vector<Rational> values;
  values.reserve(stalks_.size());
  for (const auto& s : stalks_) values.push_back(s.at(i));
  return {domain_, std::move(values)};
}

bool SectionVector::is_zero() const {
  for (const auto& s : stalks_) {
    if (!linalg::is_zero(s)) return false;
  }
  return true;
}

bool SectionVector::is_nowhere_zero() const {
  for (const auto& s : stalks_) {
    if (linalg::is_zero(s)) return false;
  }
  return true;
}

SectionVector SectionVector::restrict(const OpenSet& v) const {
  if (v.space() != domain_.space() || !v.is_subset_of(domain_)) {
    throw Error(ErrorKind::NotASubset, "restriction target is not contained in the domain");
  }
  std::vector<QVector> out;
  for (auto p : v.members()) out.push_back(at_point(p));
  return {v, length_, std::move(out)};
}

SectionVector SectionVector::scaled(const StructureSection& c) const {
  require_same_domain(c.domain(), domain_, "scalar over a different open set");
  SectionVector r = *this;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) {
    for (auto& x : r.stalks_[k]) x *= c.values()[k];
  }
  return r;
}

SectionVector operator+(const SectionVector& a, const SectionVector& b) {
  require_same_domain(a.domain_, b.domain_, "vectors over different open sets");
  if (a.length_ != b.length_) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  SectionVector r = a;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) {
    for (std::size_t i = 0; i < r.length_; ++i) r.stalks_[k][i] += b.stalks_[k][i];
  }
  return r;
}

SectionVector operator-(const SectionVector& a, const SectionVector& b) {
  require_same_domain(a.domain_, b.domain_, "vectors over different open sets");
  if (a.length_ != b.length_) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  SectionVector r = a;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) {
    for (std::size_t i = 0; i < r.length_; ++i) r.stalks_[k][i] -= b.stalks_[k][i];
  }
  return r;
}

// ---- SectionMatrix ----

SectionMatrix::SectionMatrix(OpenSet domain, std::size_t rows, std::size_t cols, std::vector<QMatrix> stalks)
    : domain_(std::move(domain)), rows_(rows), cols_(cols), stalks_(std::move(stalks)) {
  if (stalks_.size() != domain_.size()) throw Error(ErrorKind::DimensionMismatch, "one stalk per point required");
  for (const auto& s : stalks_) {
    if (s.rows() != rows_ || s.cols() != cols_) throw Error(ErrorKind::DimensionMismatch, "stalk shape differs");
  }
}

SectionMatrix SectionMatrix::constant(const OpenSet& domain, const QMatrix& m) {
  return {domain, m.rows(), m.cols(), std::vector<QMatrix>(domain.size(), m)};
}

SectionMatrix SectionMatrix::identity(const OpenSet& domain, std::size_t n) {
  return constant(domain, QMatrix::identity(n));
}

SectionMatrix SectionMatrix::zero(const OpenSet& domain, std::size_t rows, std::size_t cols) {
  return constant(domain, QMatrix(rows, cols));
}

SectionMatrix SectionMatrix::from_entries(const OpenSet& domain,
                                          const std::vector<std::vector<StructureSection>>& entries) {
  const std::size_t rows = entries.size();
  const std::size_t cols = rows == 0 ? 0 : entries.front().size();
  std::vector<QMatrix> stalks(domain.size(), QMatrix(rows, cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (entries[i].size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) {
      require_same_domain(entries[i][j].domain(), domain, "matrix entry over a different open set");
      for (std::size_t k = 0; k < domain.size(); ++k) stalks[k](i, j) = entries[i][j].values()[k];
    }
  }
  return {domain, rows, cols, std::move(stalks)};
}

SectionMatrix SectionMatrix::from_columns(const OpenSet& domain, const std::vector<SectionVector>& columns,
                                          std::size_t rows) {
  std::vector<QMatrix> stalks(domain.size(), QMatrix(rows, columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    require_same_domain(columns[j].domain(), domain, "column over a different open set");
    if (columns[j].size() != rows) throw Error(ErrorKind::DimensionMismatch, "column length differs");
    for (std::size_t k = 0; k < domain.size(); ++k) {
      for (std::size_t i = 0; i < rows; ++i) stalks[k](i, j) = columns[j].stalk(k)[i];
    }
  }
  return {domain, rows, columns.size(), std::move(stalks)};
}

StructureSection SectionMatrix::entry(std::size_t i, std::size_t j) const {
  std::vector<Rational> values;
  values.reserve(stalks_.size());
  for (const auto& s : stalks_) values.push_back(s(i, j));
  return {domain_, std::move(values)};
}

SectionVector SectionMatrix::column(std::size_t j) const {
  std::vector<QVector> out;
  out.reserve(stalks_.size());
  for (const auto& s : stalks_) {
    QVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = s(i, j);
    out.push_back(std::move(v));
  }
  return {domain_, rows_, std::move(out)};
}

std::optional<QMatrix> SectionMatrix::constant_value() const {
  if (stalks_.empty()) return QMatrix(rows_, cols_);
  for (const auto& s : stalks_) {
    if (!(s == stalks_.front())) return std::nullopt;
  }
  return stalks_.front();
}

bool SectionMatrix::is_zero() const {
  for (const auto& s : stalks_) {
    if (!s.is_zero()) return false;
  }
  return true;
}

SectionMatrix SectionMatrix::restrict(const OpenSet& v) const {
  if (v.space() != domain_.space() || !v.is_subset_of(domain_)) {
    throw Error(ErrorKind::NotASubset, "restriction target is not contained in the domain");
  }
  std::vector<QMatrix> out;
  for (auto p : v.members()) out.push_back(at_point(p));
  return {v, rows_, cols_, std::move(out)};
}

SectionMatrix SectionMatrix::scaled(const StructureSection& c) const {
  require_same_domain(c.domain(), domain_, "scalar over a different open set");
  SectionMatrix r = *this;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) r.stalks_[k] = r.stalks_[k].scaled(c.values()[k]);
  return r;
}

SectionVector SectionMatrix::apply(const SectionVector& v) const {
  require_same_domain(v.domain(), domain_, "vector over a different open set");
  if (v.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector shape mismatch");
  std::vector<QVector> out;
  out.reserve(stalks_.size());
  for (std::size_t k = 0; k < stalks_.size(); ++k) out.push_back(linalg::multiply(stalks_[k], v.stalk(k)));
  return {domain_, rows_, std::move(out)};
}

SectionMatrix operator+(const SectionMatrix& a, const SectionMatrix& b) {
  require_same_domain(a.domain_, b.domain_, "matrices over different open sets");
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "shapes differ");
  SectionMatrix r = a;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) r.stalks_[k] = r.stalks_[k] + b.stalks_[k];
  return r;
}

SectionMatrix operator-(const SectionMatrix& a, const SectionMatrix& b) {
  require_same_domain(a.domain_, b.domain_, "matrices over different open sets");
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "shapes differ");
  SectionMatrix r = a;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) r.stalks_[k] = r.stalks_[k] - b.stalks_[k];
  return r;
}

SectionMatrix operator-(const SectionMatrix& a) {
  SectionMatrix r = a;
  for (auto& s : r.stalks_) s = -s;
  return r;
}

SectionMatrix operator*(const SectionMatrix& a, const SectionMatrix& b) { return mat_mul(a, b); }

SectionMatrix mat_mul(const SectionMatrix& a, const SectionMatrix& b) {
  require_same_domain(a.domain(), b.domain(), "matrices over different open sets");
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "inner dimensions differ");
  std::vector<QMatrix> out;
  out.reserve(a.stalks().size());
  for (std::size_t k = 0; k < a.stalks().size(); ++k) out.push_back(a.stalk(k) * b.stalk(k));
  return {a.domain(), a.rows(), b.cols(), std::move(out)};
}

SectionMatrix transpose_morphism(const SectionMatrix& a) {
  std::vector<QMatrix> out;
  out.reserve(a.stalks().size());
  for (const auto& s : a.stalks()) out.push_back(s.transposed());
  return {a.domain(), a.cols(), a.rows(), std::move(out)};
}

StructureSection pairing(const SectionVector& u, const SectionVector& v) {
  require_same_domain(u.domain(), v.domain(), "vectors over different open sets");
  std::vector<Rational> values;
  values.reserve(u.stalks().size());
  for (std::size_t k = 0; k < u.stalks().size(); ++k) values.push_back(linalg::dot(u.stalk(k), v.stalk(k)));
  return {u.domain(), std::move(values)};
}

StructureSection bilinear(const SectionMatrix& form, const SectionVector& u, const SectionVector& v) {
  return pairing(u, form.apply(v));
}

DeterminantAdjugate determinant_adjugate(const SectionMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "determinant of a non-square matrix");
  std::vector<Rational> dets;
  std::vector<QMatrix> adjs;
  for (const auto& s : a.stalks()) {
    dets.push_back(linalg::determinant(s));
    adjs.push_back(linalg::adjugate(s));
  }
  return {StructureSection(a.domain(), std::move(dets)), SectionMatrix(a.domain(), a.rows(), a.cols(), std::move(adjs))};
}

StructureSection determinant(const SectionMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "determinant of a non-square matrix");
  std::vector<Rational> dets;
  for (const auto& s : a.stalks()) dets.push_back(linalg::determinant(s));
  return {a.domain(), std::move(dets)};
}

SectionMatrix try_inverse_matrix(const SectionMatrix& a) {
  auto [det, adj] = determinant_adjugate(a);
  if (!det.is_unit()) {
    throw Error(ErrorKind::NonUnitDeterminant, "determinant is not a unit section",
                a.domain().space()->labels_of(det.zero_set()));
  }
  return adj.scaled(det.inverse());
}

SectionMatrix kronecker_product(const SectionMatrix& a, const SectionMatrix& b) {
  require_same_domain(a.domain(), b.domain(), "matrices over different open sets");
  std::vector<QMatrix> out;
  for (std::size_t k = 0; k < a.stalks().size(); ++k) out.push_back(kronecker(a.stalk(k), b.stalk(k)));
  return {a.domain(), a.rows() * b.rows(), a.cols() * b.cols(), std::move(out)};
}

std::vector<SectionVector> kronecker_gauge(const OpenSet& domain, std::size_t n) {
  std::vector<SectionVector> basis;
  for (std::size_t i = 0; i < n; ++i) {
    QVector e(n, Rational(0));
    e[i] = Rational(1);
    basis.push_back(SectionVector::constant(domain, e));
  }
  return basis;
}

IndependenceResult linear_independence(const std::vector<SectionVector>& vectors) {
  IndependenceResult result;
  if (vectors.empty()) return result;
  const OpenSet& u = vectors.front().domain();
  const std::size_t n = vectors.front().size();
  for (const auto& v : vectors) {
    require_same_domain(v.domain(), u, "vectors over different open sets");
    if (v.size() != n) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  }
  const auto members = u.members();
  for (std::size_t k = 0; k < members.size(); ++k) {
    QMatrix cols(n, vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) cols(i, j) = vectors[j].stalk(k)[i];
    }
    auto kernel = linalg::nullspace(cols);
    if (!kernel.empty()) {
      result.independent = false;
      result.witness_point = u.space()->label(members[k]);
      result.relation = std::move(kernel.front());
      return result;
    }
  }
  return result;
}

std::vector<std::size_t> pointwise_rank(const SectionMatrix& a) {
  std::vector<std::size_t> ranks;
  for (const auto& s : a.stalks()) ranks.push_back(linalg::rank(s));
  return ranks;
}

}  // namespace sheafsym
