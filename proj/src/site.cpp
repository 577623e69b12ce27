#include "sheafsym/site.hpp"

#include <algorithm>
#include <set>

#include "sheafsym/error.hpp"

namespace sheafsym {

SpacePtr FiniteSpace::validate(std::vector<std::string> points, const std::vector<std::vector<std::string>>& opens) {
  if (points.size() > kMaxPoints) throw Error(ErrorKind::DimensionTooLarge, "at most 64 points are supported");
  std::set<std::string> seen;
  for (const auto& p : points) {
    if (!seen.insert(p).second) throw Error(ErrorKind::DuplicatePoint, "point listed twice", {p});
  }
  std::vector<PointMask> masks;
  for (const auto& open : opens) {
    PointMask m = 0;
    for (const auto& label : open) {
      auto it = std::find(points.begin(), points.end(), label);
      if (it == points.end()) throw Error(ErrorKind::UnknownPoint, "open set mentions unknown point", {label});
      m |= PointMask{1} << static_cast<std::size_t>(it - points.begin());
    }
    masks.push_back(m);
  }
  return validate_masks(std::move(points), std::move(masks));
}

SpacePtr FiniteSpace::validate_masks(std::vector<std::string> points, std::vector<PointMask> opens) {
  std::shared_ptr<FiniteSpace> space(new FiniteSpace());
  space->points_ = std::move(points);
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  for (auto m : opens) {
    if ((m & ~space->whole()) != 0) throw Error(ErrorKind::UnknownPoint, "open set mask exceeds the point set");
  }
  space->opens_ = std::move(opens);
  const auto& os = space->opens_;
  const bool has_empty = std::binary_search(os.begin(), os.end(), PointMask{0});
  const bool has_whole = std::binary_search(os.begin(), os.end(), space->whole());
  if (!has_empty || !has_whole) {
    std::vector<std::string> missing;
    if (!has_empty) missing.emplace_back("{}");
    if (!has_whole) missing.push_back(space->describe(space->whole()));
    throw Error(ErrorKind::MissingEmptyOrWhole, "the empty set and the whole space must be open", missing);
  }
  for (std::size_t i = 0; i < os.size(); ++i) {
    for (std::size_t j = i + 1; j < os.size(); ++j) {
      if (!std::binary_search(os.begin(), os.end(), os[i] | os[j])) {
        throw Error(ErrorKind::NotClosedUnderUnion, "union of two opens is not open",
                    {space->describe(os[i]), space->describe(os[j])});
      }
    }
  }
  for (std::size_t i = 0; i < os.size(); ++i) {
    for (std::size_t j = i + 1; j < os.size(); ++j) {
      if (!std::binary_search(os.begin(), os.end(), os[i] & os[j])) {
        throw Error(ErrorKind::NotClosedUnderIntersection, "intersection of two opens is not open",
                    {space->describe(os[i]), space->describe(os[j])});
      }
    }
  }
  space->minimal_.resize(space->size());
  for (std::size_t x = 0; x < space->size(); ++x) {
    PointMask acc = space->whole();
    for (auto m : os) {
      if (((m >> x) & 1U) != 0) acc &= m;
    }
    space->minimal_[x] = acc;
  }
  return space;
}

SpacePtr FiniteSpace::discrete(std::vector<std::string> points) {
  const std::size_t n = points.size();
  if (n > 20) throw Error(ErrorKind::DimensionTooLarge, "discrete space limited to 20 points");
  std::vector<PointMask> opens;
  for (PointMask m = 0; m < (PointMask{1} << n); ++m) opens.push_back(m);
  return validate_masks(std::move(points), std::move(opens));
}

SpacePtr FiniteSpace::indiscrete(std::vector<std::string> points) {
  const std::size_t n = points.size();
  PointMask whole = n == 64 ? ~PointMask{0} : ((PointMask{1} << n) - 1);
  return validate_masks(std::move(points), {0, whole});
}

SpacePtr FiniteSpace::point() {
  static const SpacePtr single = validate_masks({"x"}, {0, 1});
  return single;
}

std::size_t FiniteSpace::index_of(std::string_view label) const {
  auto it = std::find(points_.begin(), points_.end(), label);
  if (it == points_.end()) throw Error(ErrorKind::UnknownPoint, "no such point", {std::string(label)});
  return static_cast<std::size_t>(it - points_.begin());
}

bool FiniteSpace::is_open(PointMask mask) const { return std::binary_search(opens_.begin(), opens_.end(), mask); }

PointMask FiniteSpace::mask_of(const std::vector<std::string>& labels) const {
  PointMask m = 0;
  for (const auto& l : labels) m |= PointMask{1} << index_of(l);
  return m;
}

std::vector<std::string> FiniteSpace::labels_of(PointMask mask) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (((mask >> i) & 1U) != 0) out.push_back(points_[i]);
  }
  return out;
}

std::string FiniteSpace::describe(PointMask mask) const {
  std::string s = "{";
  bool first = true;
  for (const auto& l : labels_of(mask)) {
    if (!first) s += ",";
    first = false;
    s += l;
  }
  return s + "}";
}

OpenSet::OpenSet(SpacePtr space, PointMask mask) : space_(std::move(space)), mask_(mask) {
  if (!space_->is_open(mask_)) throw Error(ErrorKind::NotAnOpenSet, "not an open set", {space_->describe(mask_)});
}

OpenSet OpenSet::from_labels(const SpacePtr& space, const std::vector<std::string>& labels) {
  return {space, space->mask_of(labels)};
}

std::vector<std::size_t> OpenSet::members() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::size_t i = 0; i < space_->size(); ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::size_t OpenSet::position_of(std::size_t point) const {
  const PointMask below = point == 0 ? 0 : (mask_ & ((PointMask{1} << point) - 1));
  return static_cast<std::size_t>(__builtin_popcountll(below));
}

OpenSet OpenSet::intersect(const OpenSet& other) const {
  if (space_ != other.space_) throw Error(ErrorKind::DomainMismatch, "open sets of different spaces");
  return {space_, mask_ & other.mask_};
}

OpenSet OpenSet::unite(const OpenSet& other) const {
  if (space_ != other.space_) throw Error(ErrorKind::DomainMismatch, "open sets of different spaces");
  return {space_, mask_ | other.mask_};
}

OpenSet minimal_open_neighborhood(const SpacePtr& space, std::string_view point) {
  return {space, space->minimal_neighborhood(space->index_of(point))};
}

bool is_open_cover(const OpenSet& u, const std::vector<OpenSet>& family) {
  PointMask covered = 0;
  for (const auto& v : family) {
    if (v.space() != u.space() || !v.is_subset_of(u)) return false;
    covered |= v.mask();
  }
  return covered == u.mask();
}

std::vector<SpacePtr> enumerate_topologies(std::size_t n) {
  if (n > 5) throw Error(ErrorKind::DimensionTooLarge, "topology enumeration limited to 5 points");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  // Finite topologies correspond to preorders: up[i] is the minimal open
  // neighbourhood of point i, and the opens are the up-closed sets.
  std::vector<std::pair<std::size_t, std::size_t>> off_diagonal;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) off_diagonal.emplace_back(i, j);
    }
  }
  const PointMask whole = (PointMask{1} << n) - 1;
  std::vector<SpacePtr> out;
  const std::size_t count = std::size_t{1} << off_diagonal.size();
  std::vector<PointMask> up(n);
  for (std::size_t relation = 0; relation < count; ++relation) {
    for (std::size_t i = 0; i < n; ++i) up[i] = PointMask{1} << i;
    for (std::size_t k = 0; k < off_diagonal.size(); ++k) {
      if (((relation >> k) & 1U) != 0) up[off_diagonal[k].first] |= PointMask{1} << off_diagonal[k].second;
    }
    bool transitive = true;
    for (std::size_t i = 0; i < n && transitive; ++i) {
      for (std::size_t j = 0; j < n && transitive; ++j) {
        if (((up[i] >> j) & 1U) != 0) transitive = (up[j] & ~up[i]) == 0;
      }
    }
    if (!transitive) continue;
    std::vector<PointMask> opens;
    for (PointMask m = 0; m <= whole; ++m) {
      bool upward = true;
      for (std::size_t i = 0; i < n && upward; ++i) {
        if (((m >> i) & 1U) != 0) upward = (up[i] & ~m) == 0;
      }
      if (upward) opens.push_back(m);
    }
    out.push_back(FiniteSpace::validate_masks(labels, std::move(opens)));
  }
  return out;
}

}  // namespace sheafsym
