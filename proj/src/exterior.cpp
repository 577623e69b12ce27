#include "sheafsym/exterior.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "sheafsym/error.hpp"
#include "sheafsym/linalg.hpp"

namespace sheafsym {

namespace {

constexpr std::size_t kMaxAlternationOrder = 8;

int permutation_sign(const std::vector<std::size_t>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

std::size_t int_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<std::size_t> unflatten(std::size_t flat, std::size_t rank, std::size_t order) {
  std::vector<std::size_t> slots(order);
  for (std::size_t a = order; a > 0; --a) {
    slots[a - 1] = flat % rank;
    flat /= rank;
  }
  return slots;
}

Rational factorial(std::size_t k) {
  Rational f(1);
  for (std::size_t i = 2; i <= k; ++i) f *= Rational(static_cast<long>(i));
  return f;
}

// Sign of e^I ^ e^J relative to e^{I u J}; 0 when I and J overlap.
int merge_sign(MultiIndex a, MultiIndex b) {
  if ((a & b) != 0) return 0;
  int inversions = 0;
  for (MultiIndex rest = b; rest != 0; rest &= rest - 1) {
    const unsigned j = static_cast<unsigned>(__builtin_ctz(rest));
    inversions += __builtin_popcount(a >> (j + 1));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

void require_compatible(const OpenSet& a, const OpenSet& b, std::size_t ra, std::size_t rb) {
  require_same_domain(a, b, "forms over different open sets");
  if (ra != rb) throw Error(ErrorKind::DimensionMismatch, "forms on modules of different rank");
}

}  // namespace

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<MultiIndex> combinations(std::size_t n, std::size_t k) {
  std::vector<MultiIndex> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(subset_of(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::size_t combination_rank(std::size_t n, MultiIndex subset) {
  const auto idx = indices_of(subset);
  const std::size_t k = idx.size();
  std::size_t rank = 0;
  std::size_t start = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t j = start; j < idx[a]; ++j) rank += binomial(n - 1 - j, k - 1 - a);
    start = idx[a] + 1;
  }
  return rank;
}

std::vector<std::size_t> indices_of(MultiIndex subset) {
  std::vector<std::size_t> out;
  for (; subset != 0; subset &= subset - 1) out.push_back(static_cast<std::size_t>(__builtin_ctz(subset)));
  return out;
}

MultiIndex subset_of(const std::vector<std::size_t>& indices) {
  MultiIndex m = 0;
  for (auto i : indices) {
    if (i >= 32) throw Error(ErrorKind::DimensionTooLarge, "multi-index entries limited to 32");
    if ((m >> i) & 1U) throw Error(ErrorKind::NotSkew, "repeated index in a multi-index");
    m |= MultiIndex{1} << i;
  }
  return m;
}

// ---- CovariantTensor ----

CovariantTensor::CovariantTensor(OpenSet domain, std::size_t rank, std::size_t order, std::vector<QVector> stalks)
    : domain_(std::move(domain)), rank_(rank), order_(order), stalks_(std::move(stalks)) {
  if (stalks_.size() != domain_.size()) throw Error(ErrorKind::DimensionMismatch, "one stalk per point required");
  const std::size_t len = int_pow(rank_, order_);
  for (const auto& s : stalks_) {
    if (s.size() != len) throw Error(ErrorKind::DimensionMismatch, "tensor needs rank^order coefficients");
  }
}

CovariantTensor CovariantTensor::zero(const OpenSet& domain, std::size_t rank, std::size_t order) {
  return {domain, rank, order, std::vector<QVector>(domain.size(), QVector(int_pow(rank, order), Rational(0)))};
}

CovariantTensor CovariantTensor::basis(const OpenSet& domain, std::size_t rank, const std::vector<std::size_t>& slots) {
  CovariantTensor t = zero(domain, rank, slots.size());
  const std::size_t flat = t.flat_index(slots);
  for (auto& s : t.stalks_) s[flat] = Rational(1);
  return t;
}

std::size_t CovariantTensor::flat_index(const std::vector<std::size_t>& slots) const {
  if (slots.size() != order_) throw Error(ErrorKind::ArityMismatch, "wrong number of tensor slots");
  std::size_t flat = 0;
  for (auto j : slots) {
    if (j >= rank_) throw Error(ErrorKind::DimensionMismatch, "slot index out of range");
    flat = flat * rank_ + j;
  }
  return flat;
}

StructureSection CovariantTensor::coefficient(const std::vector<std::size_t>& slots) const {
  const std::size_t flat = flat_index(slots);
  std::vector<Rational> values;
  for (const auto& s : stalks_) values.push_back(s[flat]);
  return {domain_, std::move(values)};
}

StructureSection CovariantTensor::evaluate(const std::vector<SectionVector>& args) const {
  if (args.size() != order_) throw Error(ErrorKind::ArityMismatch, "wrong number of arguments");
  for (const auto& a : args) {
    require_same_domain(a.domain(), domain_, "argument over a different open set");
    if (a.size() != rank_) throw Error(ErrorKind::DimensionMismatch, "argument has the wrong length");
  }
  std::vector<Rational> values;
  for (std::size_t k = 0; k < stalks_.size(); ++k) {
    Rational acc(0);
    for (std::size_t flat = 0; flat < stalks_[k].size(); ++flat) {
      if (stalks_[k][flat].is_zero()) continue;
      Rational term = stalks_[k][flat];
      const auto slots = unflatten(flat, rank_, order_);
      for (std::size_t a = 0; a < order_ && !term.is_zero(); ++a) term *= args[a].stalk(k)[slots[a]];
      acc += term;
    }
    values.push_back(std::move(acc));
  }
  return {domain_, std::move(values)};
}

bool CovariantTensor::is_antisymmetric() const {
  for (const auto& s : stalks_) {
    for (std::size_t flat = 0; flat < s.size(); ++flat) {
      auto slots = unflatten(flat, rank_, order_);
      for (std::size_t a = 0; a + 1 < order_; ++a) {
        std::swap(slots[a], slots[a + 1]);
        if (!(s[flat] == -s[flat_index(slots)])) return false;
        std::swap(slots[a], slots[a + 1]);
      }
    }
  }
  return true;
}

CovariantTensor CovariantTensor::scaled(const StructureSection& c) const {
  require_same_domain(c.domain(), domain_, "scalar over a different open set");
  CovariantTensor r = *this;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) {
    for (auto& x : r.stalks_[k]) x *= c.values()[k];
  }
  return r;
}

CovariantTensor operator+(const CovariantTensor& a, const CovariantTensor& b) {
  require_compatible(a.domain_, b.domain_, a.rank_, b.rank_);
  if (a.order_ != b.order_) throw Error(ErrorKind::DimensionMismatch, "tensors of different order");
  CovariantTensor r = a;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) {
    for (std::size_t i = 0; i < r.stalks_[k].size(); ++i) r.stalks_[k][i] += b.stalks_[k][i];
  }
  return r;
}

CovariantTensor operator-(const CovariantTensor& a, const CovariantTensor& b) {
  return a + b.scaled(StructureSection::constant(b.domain_, Rational(-1)));
}

CovariantTensor alternation(const CovariantTensor& t) {
  const std::size_t k = t.order();
  if (k > kMaxAlternationOrder) throw Error(ErrorKind::DegreeTooLarge, "alternation limited to order 8");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<int> signs;
  std::vector<std::size_t> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    perms.push_back(sigma);
    signs.push_back(permutation_sign(sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  const Rational scale = factorial(k).inverse();

  std::vector<QVector> out;
  for (const auto& s : t.stalks()) {
    QVector r(s.size(), Rational(0));
    for (std::size_t flat = 0; flat < s.size(); ++flat) {
      const auto slots = unflatten(flat, t.rank(), k);
      Rational acc(0);
      std::vector<std::size_t> permuted(k);
      for (std::size_t p = 0; p < perms.size(); ++p) {
        for (std::size_t a = 0; a < k; ++a) permuted[a] = slots[perms[p][a]];
        const Rational& v = s[t.flat_index(permuted)];
        if (signs[p] > 0) {
          acc += v;
        } else {
          acc -= v;
        }
      }
      r[flat] = acc * scale;
    }
    out.push_back(std::move(r));
  }
  return {t.domain(), t.rank(), k, std::move(out)};
}

CovariantTensor tensor_product(const CovariantTensor& t1, const CovariantTensor& t2) {
  require_compatible(t1.domain(), t2.domain(), t1.rank(), t2.rank());
  std::vector<QVector> out;
  for (std::size_t k = 0; k < t1.stalks().size(); ++k) {
    const auto& a = t1.stalks()[k];
    const auto& b = t2.stalks()[k];
    QVector r;
    r.reserve(a.size() * b.size());
    for (const auto& x : a) {
      for (const auto& y : b) r.push_back(x * y);
    }
    out.push_back(std::move(r));
  }
  return {t1.domain(), t1.rank(), t1.order() + t2.order(), std::move(out)};
}

// ---- KForm ----

KForm::KForm(OpenSet domain, std::size_t rank, std::size_t degree, std::vector<QVector> stalks)
    : domain_(std::move(domain)), rank_(rank), degree_(degree), stalks_(std::move(stalks)) {
  if (rank_ > 32) throw Error(ErrorKind::DimensionTooLarge, "forms limited to rank 32");
  if (stalks_.size() != domain_.size()) throw Error(ErrorKind::DimensionMismatch, "one stalk per point required");
  const std::size_t len = binomial(rank_, degree_);
  for (const auto& s : stalks_) {
    if (s.size() != len) throw Error(ErrorKind::DimensionMismatch, "form needs C(rank, degree) coefficients");
  }
}

KForm KForm::zero(const OpenSet& domain, std::size_t rank, std::size_t degree) {
  return {domain, rank, degree, std::vector<QVector>(domain.size(), QVector(binomial(rank, degree), Rational(0)))};
}

KForm KForm::scalar(const StructureSection& s, std::size_t rank) {
  std::vector<QVector> stalks;
  for (const auto& v : s.values()) stalks.push_back({v});
  return {s.domain(), rank, 0, std::move(stalks)};
}

KForm KForm::basis(const OpenSet& domain, std::size_t rank, const std::vector<std::size_t>& indices) {
  if (!std::is_sorted(indices.begin(), indices.end())) {
    throw Error(ErrorKind::MalformedInput, "basis form indices must be increasing");
  }
  for (auto i : indices) {
    if (i >= rank) throw Error(ErrorKind::DimensionMismatch, "basis form index out of range");
  }
  KForm f = zero(domain, rank, indices.size());
  const std::size_t pos = combination_rank(rank, subset_of(indices));
  for (auto& s : f.stalks_) s[pos] = Rational(1);
  return f;
}

KForm KForm::one_form(const SectionVector& coefficients) {
  return {coefficients.domain(), coefficients.size(), 1, coefficients.stalks()};
}

KForm KForm::top(const OpenSet& domain, std::size_t rank) {
  std::vector<std::size_t> all(rank);
  std::iota(all.begin(), all.end(), 0);
  return basis(domain, rank, all);
}

StructureSection KForm::coefficient(MultiIndex subset) const {
  if (static_cast<std::size_t>(__builtin_popcount(subset)) != degree_) {
    throw Error(ErrorKind::ArityMismatch, "multi-index length differs from the degree");
  }
  std::vector<Rational> values;
  const std::size_t pos = combination_rank(rank_, subset);
  for (const auto& s : stalks_) values.push_back(s[pos]);
  return {domain_, std::move(values)};
}

bool KForm::is_zero() const {
  for (const auto& s : stalks_) {
    if (!linalg::is_zero(s)) return false;
  }
  return true;
}

CovariantTensor KForm::to_tensor() const {
  CovariantTensor t = CovariantTensor::zero(domain_, rank_, degree_);
  std::vector<QVector> stalks = t.stalks();
  const std::size_t total = stalks.empty() ? 0 : stalks.front().size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto slots = unflatten(flat, rank_, degree_);
    std::vector<std::size_t> sorted = slots;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    // Sign of the permutation taking the sorted tuple to `slots`.
    std::vector<std::size_t> perm(degree_);
    for (std::size_t a = 0; a < degree_; ++a) {
      perm[a] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), slots[a]) - sorted.begin());
    }
    const int sign = permutation_sign(perm);
    const std::size_t pos = combination_rank(rank_, subset_of(sorted));
    for (std::size_t k = 0; k < stalks.size(); ++k) stalks[k][flat] = sign > 0 ? stalks_[k][pos] : -stalks_[k][pos];
  }
  return {domain_, rank_, degree_, std::move(stalks)};
}

KForm KForm::from_tensor(const CovariantTensor& t) {
  if (!t.is_antisymmetric()) throw Error(ErrorKind::NotSkew, "tensor is not alternating");
  KForm f = zero(t.domain(), t.rank(), t.order());
  const auto subsets = combinations(t.rank(), t.order());
  for (std::size_t pos = 0; pos < subsets.size(); ++pos) {
    const std::size_t flat = t.flat_index(indices_of(subsets[pos]));
    for (std::size_t k = 0; k < f.stalks_.size(); ++k) f.stalks_[k][pos] = t.stalks()[k][flat];
  }
  return f;
}

KForm KForm::scaled(const StructureSection& c) const {
  require_same_domain(c.domain(), domain_, "scalar over a different open set");
  KForm r = *this;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) {
    for (auto& x : r.stalks_[k]) x *= c.values()[k];
  }
  return r;
}

KForm KForm::scaled(const Rational& c) const { return scaled(StructureSection::constant(domain_, c)); }

KForm KForm::restrict(const OpenSet& v) const {
  if (v.space() != domain_.space() || !v.is_subset_of(domain_)) {
    throw Error(ErrorKind::NotASubset, "restriction target is not contained in the domain");
  }
  std::vector<QVector> out;
  for (auto p : v.members()) out.push_back(stalks_[domain_.position_of(p)]);
  return {v, rank_, degree_, std::move(out)};
}

KForm operator+(const KForm& a, const KForm& b) {
  require_compatible(a.domain_, b.domain_, a.rank_, b.rank_);
  if (a.degree_ != b.degree_) throw Error(ErrorKind::DimensionMismatch, "forms of different degree");
  KForm r = a;
  for (std::size_t k = 0; k < r.stalks_.size(); ++k) {
    for (std::size_t i = 0; i < r.stalks_[k].size(); ++i) r.stalks_[k][i] += b.stalks_[k][i];
  }
  return r;
}

KForm operator-(const KForm& a, const KForm& b) { return a + b.scaled(Rational(-1)); }

KForm wedge(const KForm& xi, const KForm& eta) {
  require_compatible(xi.domain(), eta.domain(), xi.rank(), eta.rank());
  const std::size_t n = xi.rank();
  const std::size_t k = xi.degree();
  const std::size_t l = eta.degree();
  KForm result = KForm::zero(xi.domain(), n, k + l);
  if (k + l > n) return result;
  const auto left = combinations(n, k);
  const auto right = combinations(n, l);
  std::vector<QVector> stalks = result.stalks();
  for (std::size_t a = 0; a < left.size(); ++a) {
    for (std::size_t b = 0; b < right.size(); ++b) {
      const int sign = merge_sign(left[a], right[b]);
      if (sign == 0) continue;
      const std::size_t pos = combination_rank(n, left[a] | right[b]);
      for (std::size_t p = 0; p < stalks.size(); ++p) {
        const Rational term = xi.stalks()[p][a] * eta.stalks()[p][b];
        if (sign > 0) {
          stalks[p][pos] += term;
        } else {
          stalks[p][pos] -= term;
        }
      }
    }
  }
  return {xi.domain(), n, k + l, std::move(stalks)};
}

StructureSection evaluate_form(const KForm& form, const std::vector<SectionVector>& args) {
  const std::size_t k = form.degree();
  if (args.size() != k) throw Error(ErrorKind::ArityMismatch, "argument count differs from the form degree");
  for (const auto& a : args) {
    require_same_domain(a.domain(), form.domain(), "argument over a different open set");
    if (a.size() != form.rank()) throw Error(ErrorKind::DimensionMismatch, "argument has the wrong length");
  }
  const auto subsets = combinations(form.rank(), k);
  std::vector<Rational> values;
  for (std::size_t p = 0; p < form.stalks().size(); ++p) {
    Rational acc(0);
    for (std::size_t pos = 0; pos < subsets.size(); ++pos) {
      const Rational& c = form.stalks()[p][pos];
      if (c.is_zero()) continue;
      const auto idx = indices_of(subsets[pos]);
      QMatrix pairing(k, k);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) pairing(a, b) = args[b].stalk(p)[idx[a]];
      }
      acc += c * linalg::determinant(pairing);
    }
    values.push_back(std::move(acc));
  }
  return {form.domain(), std::move(values)};
}

KForm volume_element(const SectionMatrix& metric, const std::vector<SectionVector>& basis) {
  const std::size_t n = metric.rows();
  if (!metric.is_square()) throw Error(ErrorKind::NotSquare, "metric must be square");
  if (!(transpose_morphism(metric) == metric)) throw Error(ErrorKind::NotSymmetric, "metric is not symmetric");
  if (basis.size() != n) throw Error(ErrorKind::NotABasis, "basis must have rank-many vectors");
  const auto independence = linear_independence(basis);
  if (!independence.independent) {
    throw Error(ErrorKind::NotABasis, "basis vectors are dependent", {*independence.witness_point});
  }
  const SectionMatrix p = SectionMatrix::from_columns(metric.domain(), basis, n);
  const SectionMatrix gram = transpose_morphism(p) * metric * p;
  const StructureSection det_gram = determinant(gram);
  const auto& space = metric.domain().space();
  if (!det_gram.is_unit()) {
    throw Error(ErrorKind::DegenerateMetric, "Gram determinant vanishes", space->labels_of(det_gram.zero_set()));
  }
  const StructureSection magnitude = det_gram.abs();
  std::vector<Rational> scale;
  std::vector<std::string> irrational;
  const auto members = metric.domain().members();
  for (std::size_t k = 0; k < members.size(); ++k) {
    auto r = magnitude.values()[k].try_sqrt();
    if (!r) {
      irrational.push_back(space->label(members[k]));
      continue;
    }
    scale.push_back(*r);
  }
  if (!irrational.empty()) throw Error(ErrorKind::NotExact, "sqrt|det| is irrational", irrational);
  // s_1* ^ ... ^ s_n* = det(P)^{-1} e^1 ^ ... ^ e^n.
  const StructureSection coefficient = StructureSection(metric.domain(), std::move(scale)) * determinant(p).inverse();
  return KForm::top(metric.domain(), n).scaled(coefficient);
}

KForm form_power(const KForm& omega, std::size_t m) {
  if (omega.degree() != 2) throw Error(ErrorKind::ArityMismatch, "form_power expects a 2-form");
  if (2 * m > omega.rank()) throw Error(ErrorKind::DegreeOverflow, "2m exceeds the rank");
  KForm acc = KForm::scalar(StructureSection::one(omega.domain()), omega.rank());
  for (std::size_t i = 0; i < m; ++i) acc = wedge(acc, omega);
  return acc;
}

// ---- GradedForm ----

GradedForm::GradedForm(OpenSet domain, std::size_t rank) : domain_(std::move(domain)), rank_(rank) {
  for (std::size_t d = 0; d <= rank_; ++d) components_.push_back(KForm::zero(domain_, rank_, d));
}

GradedForm::GradedForm(const KForm& homogeneous) : GradedForm(homogeneous.domain(), homogeneous.rank()) { add(homogeneous); }

void GradedForm::add(const KForm& form) {
  require_compatible(form.domain(), domain_, form.rank(), rank_);
  if (form.overflowed()) return;
  components_[form.degree()] = components_[form.degree()] + form;
}

std::size_t GradedForm::dimension() const {
  std::size_t total = 0;
  for (const auto& c : components_) total += binomial(rank_, c.degree());
  return total;
}

GradedForm operator+(const GradedForm& a, const GradedForm& b) {
  GradedForm r = a;
  for (const auto& c : b.components_) r.add(c);
  return r;
}

GradedForm wedge(const GradedForm& a, const GradedForm& b) {
  require_compatible(a.domain_, b.domain_, a.rank_, b.rank_);
  GradedForm r(a.domain_, a.rank_);
  for (const auto& x : a.components_) {
    for (const auto& y : b.components_) {
      if (x.degree() + y.degree() <= a.rank_) r.add(wedge(x, y));
    }
  }
  return r;
}

}  // namespace sheafsym
