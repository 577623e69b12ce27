#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sheafsym/exterior.hpp"
#include "sheafsym/free_module.hpp"
#include "sheafsym/presheaf.hpp"

namespace sheafsym {

// J = [[0, I_m], [-I_m, 0]].
QMatrix standard_symplectic_matrix(std::size_t m);
SectionMatrix standard_symplectic_form(const OpenSet& domain, std::size_t m);
// [[0, I_m, 0], [-I_m, 0, 0], [0, 0, 0]] of size n.
QMatrix skew_normal_matrix(std::size_t n, std::size_t m);

struct FormCheck {
  bool skew = false;
  // Rank of the Gram matrix at each point of the domain, in member order.
  std::vector<std::size_t> ranks;
  bool constant_rank = true;
  bool nondegenerate = false;
  StructureSection det;
};

// Throws Error{NotSquare}.
FormCheck check_form(const SectionMatrix& omega);

// Symplectic (Darboux) basis s_1..s_m, t_1..t_m, followed by kernel vectors
// in the degenerate case. Columns of change_of_basis are the basis vectors in
// that order, and gram = P^T Omega P is the certified normal form.
struct DarbouxBasis {
  std::size_t m = 0;
  std::vector<SectionVector> s;
  std::vector<SectionVector> t;
  std::vector<SectionVector> kernel;
  SectionMatrix change_of_basis;
  SectionMatrix gram;
};

// Splits off hyperbolic planes one at a time: choose s, t̄ with ω(s, t̄) a
// unit, rescale t = ω(s, t̄)^{-1} t̄ so that ω(s, t) = 1, and project every
// remaining generator z onto the ω-orthogonal complement by
// z + ω(z, s) t - ω(z, t) s. When no generator pair pairs to a unit section,
// the pivot is chosen stalk by stalk and glued.
//
// Throws Error{NotSkew}, Error{Degenerate} (witness: points where det Ω
// vanishes), Error{NotSquare}.
DarbouxBasis darboux_basis(const SectionMatrix& omega);

// Degenerate case: P^T Ω P = [[0, I_m, 0], [-I_m, 0, 0], [0, 0, 0]] with
// 2m the (constant) pointwise rank. Throws Error{NonConstantRank} with the
// points whose rank is below the maximum.
DarbouxBasis skew_normal_form(const SectionMatrix& omega);

// sum_i s_i* ^ t_i* expressed in the Kronecker gauge; s_i*, t_i* are the dual
// basis one-forms (rows of P^{-1}).
KForm standard_sum_decomposition(const DarbouxBasis& basis);

// The skew form of a Gram matrix as a 2-form: coefficient on e^i ^ e^j (i < j) is Ω_ij.
KForm two_form_from_matrix(const SectionMatrix& omega);

// True iff M^T Ω2 M = Ω1. When it holds and both forms are the standard J,
// det M = 1 is verified as well (Error{InvariantViolation} otherwise).
// Throws Error{DimensionMismatch}.
bool is_symplectic_map(const SectionMatrix& m, const SectionMatrix& omega1, const SectionMatrix& omega2);

// An element of the symplectic group Sp(2n, A(U)) for the standard form J.
class SymplecticMap {
 public:
  // Throws Error{NotSymplectic} unless M^T J M = J.
  explicit SymplecticMap(SectionMatrix m);
  static SymplecticMap identity(const OpenSet& domain, std::size_t half_rank);

  const SectionMatrix& matrix() const noexcept { return m_; }
  std::size_t half_rank() const noexcept { return m_.rows() / 2; }

  friend bool operator==(const SymplecticMap& a, const SymplecticMap& b) { return a.m_ == b.m_; }

 private:
  SectionMatrix m_;
};

SymplecticMap sp_compose(const SymplecticMap& f, const SymplecticMap& g);
// adj(M), since det M = 1; cross-checked against J^{-1} M^T J.
SymplecticMap sp_invert(const SymplecticMap& f);

// Form on E ⊕ E*, E = A^n: ω((s1, α1), (s2, α2)) = α2(s1) - α1(s2), in the
// basis (e_1..e_n; e^1..e^n).
SectionMatrix hyperbolic_sum_form(const OpenSet& domain, std::size_t n);

// ((-1)^{⌊m/2⌋} / m!) ω^m. Requires rank = 2m; throws Error{DegenerateForm}
// with the points where ω^m vanishes.
KForm orientation_form(const KForm& omega, std::size_t m);

// ---- generators of exact group elements ----

// I + c v v^T J: preserves ω(x, y) = x^T J y for every v and c.
QMatrix symplectic_transvection(const QVector& v, const Rational& c);
// Product of `factors` random transvections and block maps diag(A, A^{-T}).
QMatrix random_symplectic(std::size_t half_rank, std::mt19937_64& rng, std::size_t factors = 6);
// S diag(λ_1..λ_n, 1/λ_1..1/λ_n) S^{-1} with S random symplectic.
QMatrix planted_spectrum_symplectic(const std::vector<Rational>& eigenvalues, std::mt19937_64& rng);
// Random nondegenerate skew matrix of size 2m: P^T J P for random invertible P.
QMatrix random_nondegenerate_skew(std::size_t m, std::mt19937_64& rng);
// Random n×n skew matrix of rank exactly 2m.
QMatrix random_skew_of_rank(std::size_t n, std::size_t m, std::mt19937_64& rng);
// Random invertible matrix with small rational entries.
QMatrix random_invertible(std::size_t n, std::mt19937_64& rng);

// The presheaf U -> Sp(2n, A(U)) of symplectic matrix sections, sampled from
// a fixed pool of group elements at each point.
class SymplecticPresheaf final : public PointwisePresheaf {
 public:
  SymplecticPresheaf(SpacePtr space, std::size_t half_rank, std::vector<QMatrix> pool);
  std::string name() const override { return "symplectic"; }
  std::size_t block_width() const override { return 4 * half_rank_ * half_rank_; }
  std::vector<std::vector<Rational>> candidates(std::size_t point, const SampleGrid& grid) const override;
  bool admits(std::size_t point, const std::vector<Rational>& block) const override;

  PresheafSection encode(const SymplecticMap& map) const;
  SymplecticMap decode(const PresheafSection& section) const;

 private:
  std::size_t half_rank_;
  std::vector<QMatrix> pool_;
};

}  // namespace sheafsym
