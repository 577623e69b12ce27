#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sheafsym {

using PointMask = std::uint64_t;

class FiniteSpace;
using SpacePtr = std::shared_ptr<const FiniteSpace>;

// Finite topological space with explicitly enumerated opens. Points are
// indexed 0..n-1 in the order given; an open set is a bitmask over them.
class FiniteSpace {
 public:
  static constexpr std::size_t kMaxPoints = 64;

  // Checks that the opens contain the empty and whole set and are closed
  // under pairwise union and intersection. Opens may be listed in any order
  // and with repetition. Errors name the witness sets.
  static SpacePtr validate(std::vector<std::string> points, const std::vector<std::vector<std::string>>& opens);
  static SpacePtr validate_masks(std::vector<std::string> points, std::vector<PointMask> opens);

  static SpacePtr discrete(std::vector<std::string> points);
  static SpacePtr indiscrete(std::vector<std::string> points);
  // A single point named "x"; the default site for plain rational data.
  static SpacePtr point();

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::string& label(std::size_t index) const { return points_.at(index); }
  // Throws Error{UnknownPoint}.
  std::size_t index_of(std::string_view label) const;

  PointMask whole() const noexcept { return size() == 64 ? ~PointMask{0} : ((PointMask{1} << size()) - 1); }
  // Sorted ascending by mask value.
  const std::vector<PointMask>& opens() const noexcept { return opens_; }
  bool is_open(PointMask mask) const;

  // Intersection of all opens containing the point.
  PointMask minimal_neighborhood(std::size_t point) const { return minimal_[point]; }

  PointMask mask_of(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels_of(PointMask mask) const;
  std::string describe(PointMask mask) const;

 private:
  FiniteSpace() = default;

  std::vector<std::string> points_;
  std::vector<PointMask> opens_;
  std::vector<PointMask> minimal_;
};

// An open subset of a finite space.
class OpenSet {
 public:
  OpenSet() = default;
  // Throws Error{NotAnOpenSet} when the mask is not one of the space's opens.
  OpenSet(SpacePtr space, PointMask mask);
  static OpenSet whole(const SpacePtr& space) { return {space, space->whole()}; }
  static OpenSet empty(const SpacePtr& space) { return {space, 0}; }
  static OpenSet from_labels(const SpacePtr& space, const std::vector<std::string>& labels);

  const SpacePtr& space() const noexcept { return space_; }
  PointMask mask() const noexcept { return mask_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(__builtin_popcountll(mask_)); }
  bool empty() const noexcept { return mask_ == 0; }
  bool contains(std::size_t point) const noexcept { return ((mask_ >> point) & 1U) != 0; }
  bool is_subset_of(const OpenSet& other) const noexcept { return (mask_ & ~other.mask_) == 0; }

  // Global point indices of the members, ascending.
  std::vector<std::size_t> members() const;
  // Position of a member point within members(); the point must belong to the set.
  std::size_t position_of(std::size_t point) const;
  std::vector<std::string> labels() const { return space_->labels_of(mask_); }

  OpenSet intersect(const OpenSet& other) const;
  OpenSet unite(const OpenSet& other) const;

  friend bool operator==(const OpenSet& a, const OpenSet& b) {
    return a.space_ == b.space_ && a.mask_ == b.mask_;
  }

 private:
  SpacePtr space_;
  PointMask mask_ = 0;
};

OpenSet minimal_open_neighborhood(const SpacePtr& space, std::string_view point);

// True iff every member lies in U and the members' union is U.
bool is_open_cover(const OpenSet& u, const std::vector<OpenSet>& family);

// All topologies on `n` labelled points (n <= 5), as validated spaces with
// points named "p0", "p1", ....
std::vector<SpacePtr> enumerate_topologies(std::size_t n);

}  // namespace sheafsym
