#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sheafsym/rational.hpp"
#include "sheafsym/site.hpp"

namespace sheafsym {

// An abstract section of some presheaf over an open set. The payload is the
// presheaf's own encoding; for a fixed presheaf and open set its length is
// fixed, and two sections are equal iff their payloads are.
struct PresheafSection {
  OpenSet domain;
  std::vector<Rational> payload;

  friend bool operator==(const PresheafSection& a, const PresheafSection& b) {
    return a.domain == b.domain && a.payload == b.payload;
  }
};

// Finite set of rational sample values used to enumerate section sets whose
// carriers are infinite. Seeded construction is deterministic.
struct SampleGrid {
  std::vector<Rational> values;

  static SampleGrid of(std::vector<Rational> values) { return {std::move(values)}; }
  // `size` distinct rationals with small numerators and denominators.
  static SampleGrid seeded(std::uint64_t seed, std::size_t size);
};

// Presheaf of modules over a finite site. Sections over an open set are
// described by a finite (sampled) enumeration, plus restriction maps.
class Presheaf {
 public:
  virtual ~Presheaf() = default;

  virtual const SpacePtr& space() const = 0;
  virtual std::string name() const = 0;
  // Throws Error{NotASubset} when V is not inside the section's domain.
  virtual PresheafSection restrict(const PresheafSection& s, const OpenSet& v) const = 0;
  // Finite enumeration of the sections over U whose data is drawn from the
  // grid. Throws Error{NonEnumerableSections} when that is impossible.
  virtual std::vector<PresheafSection> sections(const OpenSet& u, const SampleGrid& grid) const = 0;

 protected:
  void require_subset(const PresheafSection& s, const OpenSet& v) const;
};

// Sections whose data is a fixed-width block of rationals per point, with
// any per-point choice admissible and restriction selecting blocks. Such
// presheaves are complete, and gluing is constructive.
class PointwisePresheaf : public Presheaf {
 public:
  explicit PointwisePresheaf(SpacePtr space) : space_(std::move(space)) {}

  const SpacePtr& space() const override { return space_; }
  PresheafSection restrict(const PresheafSection& s, const OpenSet& v) const override;
  std::vector<PresheafSection> sections(const OpenSet& u, const SampleGrid& grid) const override;

  virtual std::size_t block_width() const = 0;
  // Admissible blocks at a point, drawn from the grid.
  virtual std::vector<std::vector<Rational>> candidates(std::size_t point, const SampleGrid& grid) const = 0;
  virtual bool admits(std::size_t point, const std::vector<Rational>& block) const = 0;

  std::vector<Rational> block_at(const PresheafSection& s, std::size_t point) const;
  // Checks every block against admits().
  bool is_section(const PresheafSection& s) const;

 private:
  SpacePtr space_;
};

// The structure sheaf A: all rational-valued functions on open sets.
class FunctionSheaf final : public PointwisePresheaf {
 public:
  using PointwisePresheaf::PointwisePresheaf;
  std::string name() const override { return "function"; }
  std::size_t block_width() const override { return 1; }
  std::vector<std::vector<Rational>> candidates(std::size_t point, const SampleGrid& grid) const override;
  bool admits(std::size_t, const std::vector<Rational>& block) const override { return block.size() == 1; }
};

// Locally constant rational functions (the constant sheaf). A function on U
// is locally constant iff it is constant on the minimal neighbourhood of
// each point of U.
class LocallyConstantSheaf final : public Presheaf {
 public:
  explicit LocallyConstantSheaf(SpacePtr space) : space_(std::move(space)) {}
  const SpacePtr& space() const override { return space_; }
  std::string name() const override { return "locally_constant"; }
  PresheafSection restrict(const PresheafSection& s, const OpenSet& v) const override;
  std::vector<PresheafSection> sections(const OpenSet& u, const SampleGrid& grid) const override;

 private:
  SpacePtr space_;
};

// The constant presheaf: P(U) = Q for nonempty U with identity restrictions,
// and P(empty) a single point. Not complete on disconnected opens.
class ConstantPresheaf final : public Presheaf {
 public:
  explicit ConstantPresheaf(SpacePtr space) : space_(std::move(space)) {}
  const SpacePtr& space() const override { return space_; }
  std::string name() const override { return "constant"; }
  PresheafSection restrict(const PresheafSection& s, const OpenSet& v) const override;
  std::vector<PresheafSection> sections(const OpenSet& u, const SampleGrid& grid) const override;

 private:
  SpacePtr space_;
};

// A cover of U with one chosen section over each member.
struct CompatibleFamily {
  std::vector<OpenSet> cover;
  std::vector<PresheafSection> members;
};

// Pairwise restrictions to overlaps agree.
bool is_compatible(const Presheaf& presheaf, const CompatibleFamily& family);

struct AxiomResult {
  std::string axiom;  // "S1" or "S2"
  bool pass = true;
  // S1 failure: two distinct sections over U agreeing on every member.
  // S2 failure: the members of a compatible family with no gluing.
  std::vector<PresheafSection> witness;
};

struct CompletenessReport {
  AxiomResult s1;
  AxiomResult s2;
  bool complete() const { return s1.pass && s2.pass; }
};

// Memoizes, for one presheaf and one grid, the enumerated sections over each
// open set and the restriction maps between them, with every payload
// replaced by an id that is unique per open set. Reusing one cache across
// many completeness checks turns the per-cover work into integer
// comparisons. The presheaf must outlive the cache.
class SectionCache {
 public:
  SectionCache(const Presheaf& presheaf, SampleGrid grid);

  const Presheaf& presheaf() const noexcept { return presheaf_; }
  const SampleGrid& grid() const noexcept { return grid_; }
  const std::vector<PresheafSection>& sections(PointMask open);
  // Id of each of sections(open) among the sections over `open`.
  const std::vector<int>& ids(PointMask open);
  // Id over `to` of each of sections(from) restricted to `to` ⊆ `from`.
  const std::vector<int>& restriction_ids(PointMask from, PointMask to);

 private:
  struct Entry {
    std::vector<PresheafSection> sections;
    std::vector<int> ids;
  };
  struct PayloadHash {
    std::size_t operator()(const std::vector<Rational>& v) const noexcept;
  };
  struct PairHash {
    std::size_t operator()(const std::pair<PointMask, PointMask>& p) const noexcept {
      return std::hash<PointMask>{}(p.first * 0x9e3779b97f4a7c15ULL ^ p.second);
    }
  };

  const Entry& entry(PointMask open);
  int intern(PointMask open, const std::vector<Rational>& payload);

  const Presheaf& presheaf_;
  SampleGrid grid_;
  std::unordered_map<PointMask, Entry> entries_;
  std::unordered_map<PointMask, std::unordered_map<std::vector<Rational>, int, PayloadHash>> tables_;
  std::unordered_map<std::pair<PointMask, PointMask>, std::vector<int>, PairHash> restrictions_;
};

// Checks locality (S1) and gluing (S2) for U and the given cover over the
// sampled section sets. Throws Error{NotACover} if the family does not cover U.
CompletenessReport check_completeness(const Presheaf& presheaf, const OpenSet& u, const std::vector<OpenSet>& cover,
                                      const SampleGrid& grid);
CompletenessReport check_completeness(SectionCache& cache, const OpenSet& u, const std::vector<OpenSet>& cover);

// Sections of the sheafification over U, realized as compatible families
// indexed by the distinct minimal open neighbourhoods of the points of U.
std::vector<CompatibleFamily> sheafify_sections(const Presheaf& presheaf, const OpenSet& u, const SampleGrid& grid);

struct Stalk {
  OpenSet neighborhood;
  std::vector<PresheafSection> sections;
};

// On a finite space the germ colimit is attained on the minimal open
// neighbourhood, so the stalk is the section set there.
Stalk stalk_at(const Presheaf& presheaf, const std::string& point, const SampleGrid& grid);

// Assembles the unique section over U restricting to each member. Throws
// Error{IncompatibleFamily} (witness: the overlap) or Error{NotACover}.
PresheafSection glue(const PointwisePresheaf& presheaf, const OpenSet& u, const CompatibleFamily& family);

}  // namespace sheafsym
