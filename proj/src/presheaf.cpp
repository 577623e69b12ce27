#include "sheafsym/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "sheafsym/error.hpp"

namespace sheafsym {

namespace {

constexpr std::size_t kMaxEnumeration = 1U << 20;

void require_grid(const SampleGrid& grid) {
  if (grid.values.empty()) throw Error(ErrorKind::NonEnumerableSections, "empty sample grid");
}

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && r > kMaxEnumeration / base) {
      throw Error(ErrorKind::NonEnumerableSections, "section set too large to enumerate");
    }
    r *= base;
  }
  return r;
}

// Calls f(choice) for every tuple in the product of ranges [0, sizes[i]).
void for_each_tuple(const std::vector<std::size_t>& sizes, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (auto s : sizes) {
    if (s == 0) return;
  }
  while (true) {
    f(idx);
    std::size_t k = sizes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (sizes.empty()) return;
  }
}

}  // namespace

SampleGrid SampleGrid::seeded(std::uint64_t seed, std::size_t size) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 5);
  SampleGrid grid;
  std::set<Rational> seen;
  while (grid.values.size() < size) {
    Rational q(num(rng), den(rng));
    if (seen.insert(q).second) grid.values.push_back(q);
  }
  return grid;
}

void Presheaf::require_subset(const PresheafSection& s, const OpenSet& v) const {
  if (v.space() != s.domain.space() || !v.is_subset_of(s.domain)) {
    throw Error(ErrorKind::NotASubset, "restriction target is not contained in the domain",
                {s.domain.space()->describe(v.mask())});
  }
}

// ---- PointwisePresheaf ----

std::vector<Rational> PointwisePresheaf::block_at(const PresheafSection& s, std::size_t point) const {
  const std::size_t w = block_width();
  const std::size_t pos = s.domain.position_of(point);
  return {s.payload.begin() + static_cast<std::ptrdiff_t>(pos * w),
          s.payload.begin() + static_cast<std::ptrdiff_t>((pos + 1) * w)};
}

bool PointwisePresheaf::is_section(const PresheafSection& s) const {
  if (s.payload.size() != s.domain.size() * block_width()) return false;
  for (auto p : s.domain.members()) {
    if (!admits(p, block_at(s, p))) return false;
  }
  return true;
}

PresheafSection PointwisePresheaf::restrict(const PresheafSection& s, const OpenSet& v) const {
  require_subset(s, v);
  const std::size_t w = block_width();
  PresheafSection out{v, {}};
  out.payload.reserve(v.size() * w);
  // Blocks are stored in point order, so one pass over the domain suffices.
  std::size_t pos = 0;
  for (PointMask rest = s.domain.mask(); rest != 0; rest &= rest - 1, ++pos) {
    if ((v.mask() & rest & (~rest + 1)) == 0) continue;
    const auto first = s.payload.begin() + static_cast<std::ptrdiff_t>(pos * w);
    out.payload.insert(out.payload.end(), first, first + static_cast<std::ptrdiff_t>(w));
  }
  return out;
}

std::vector<PresheafSection> PointwisePresheaf::sections(const OpenSet& u, const SampleGrid& grid) const {
  const auto members = u.members();
  std::vector<std::vector<std::vector<Rational>>> pools;
  std::vector<std::size_t> sizes;
  std::size_t total = 1;
  for (auto p : members) {
    pools.push_back(candidates(p, grid));
    sizes.push_back(pools.back().size());
    total *= pools.back().size();
    if (total > kMaxEnumeration) throw Error(ErrorKind::NonEnumerableSections, "section set too large to enumerate");
  }
  std::vector<PresheafSection> out;
  for_each_tuple(sizes, [&](const std::vector<std::size_t>& choice) {
    PresheafSection s{u, {}};
    for (std::size_t k = 0; k < choice.size(); ++k) {
      const auto& b = pools[k][choice[k]];
      s.payload.insert(s.payload.end(), b.begin(), b.end());
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<std::vector<Rational>> FunctionSheaf::candidates(std::size_t, const SampleGrid& grid) const {
  require_grid(grid);
  std::vector<std::vector<Rational>> out;
  for (const auto& q : grid.values) out.push_back({q});
  return out;
}

// ---- LocallyConstantSheaf ----

PresheafSection LocallyConstantSheaf::restrict(const PresheafSection& s, const OpenSet& v) const {
  require_subset(s, v);
  PresheafSection out{v, {}};
  for (auto p : v.members()) out.payload.push_back(s.payload[s.domain.position_of(p)]);
  return out;
}

std::vector<PresheafSection> LocallyConstantSheaf::sections(const OpenSet& u, const SampleGrid& grid) const {
  require_grid(grid);
  const auto members = u.members();
  // Union-find over member positions: x is joined with its minimal neighbourhood.
  std::vector<std::size_t> parent(members.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : (parent[i] = find(parent[i]));
  };
  for (std::size_t k = 0; k < members.size(); ++k) {
    const PointMask nbhd = space_->minimal_neighborhood(members[k]);
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (((nbhd >> members[j]) & 1U) != 0) parent[find(j)] = find(k);
    }
  }
  std::vector<std::size_t> roots;
  std::vector<std::size_t> component(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::size_t r = find(k);
    auto it = std::find(roots.begin(), roots.end(), r);
    component[k] = static_cast<std::size_t>(it - roots.begin());
    if (it == roots.end()) roots.push_back(r);
  }
  checked_power(grid.values.size(), roots.size());
  std::vector<PresheafSection> out;
  for_each_tuple(std::vector<std::size_t>(roots.size(), grid.values.size()), [&](const std::vector<std::size_t>& c) {
    PresheafSection s{u, {}};
    for (std::size_t k = 0; k < members.size(); ++k) s.payload.push_back(grid.values[c[component[k]]]);
    out.push_back(std::move(s));
  });
  return out;
}

// ---- ConstantPresheaf ----

PresheafSection ConstantPresheaf::restrict(const PresheafSection& s, const OpenSet& v) const {
  require_subset(s, v);
  if (v.empty()) return {v, {}};
  return {v, s.payload};
}

std::vector<PresheafSection> ConstantPresheaf::sections(const OpenSet& u, const SampleGrid& grid) const {
  if (u.empty()) return {PresheafSection{u, {}}};
  require_grid(grid);
  std::vector<PresheafSection> out;
  for (const auto& q : grid.values) out.push_back({u, {q}});
  return out;
}

// ---- axioms ----

bool is_compatible(const Presheaf& presheaf, const CompatibleFamily& family) {
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    for (std::size_t j = i + 1; j < family.members.size(); ++j) {
      const OpenSet overlap = family.cover[i].intersect(family.cover[j]);
      if (!(presheaf.restrict(family.members[i], overlap) == presheaf.restrict(family.members[j], overlap))) {
        return false;
      }
    }
  }
  return true;
}

// ---- SectionCache ----

std::size_t SectionCache::PayloadHash::operator()(const std::vector<Rational>& v) const noexcept {
  std::size_t h = v.size();
  for (const auto& r : v) h = h * 1000003U ^ r.hash();
  return h;
}

SectionCache::SectionCache(const Presheaf& presheaf, SampleGrid grid) : presheaf_(presheaf), grid_(std::move(grid)) {}

int SectionCache::intern(PointMask open, const std::vector<Rational>& payload) {
  auto& table = tables_[open];
  if (auto it = table.find(payload); it != table.end()) return it->second;
  return table.emplace(payload, static_cast<int>(table.size())).first->second;
}

const SectionCache::Entry& SectionCache::entry(PointMask open) {
  auto [it, inserted] = entries_.try_emplace(open);
  if (inserted) {
    it->second.sections = presheaf_.sections(OpenSet(presheaf_.space(), open), grid_);
    for (const auto& s : it->second.sections) it->second.ids.push_back(intern(open, s.payload));
  }
  return it->second;
}

const std::vector<PresheafSection>& SectionCache::sections(PointMask open) { return entry(open).sections; }

const std::vector<int>& SectionCache::ids(PointMask open) { return entry(open).ids; }

const std::vector<int>& SectionCache::restriction_ids(PointMask from, PointMask to) {
  auto [it, inserted] = restrictions_.try_emplace({from, to});
  if (inserted) {
    const OpenSet target(presheaf_.space(), to);
    std::vector<int> out;
    for (const auto& s : entry(from).sections) out.push_back(intern(to, presheaf_.restrict(s, target).payload));
    it->second = std::move(out);
  }
  return it->second;
}

namespace {

// Enumerates compatible families over `cover` by backtracking, pruning on
// overlaps as soon as both members are chosen. f receives, per member, the
// index of the chosen section in cache.sections(member); enumeration stops
// when f returns false.
void for_each_compatible_family(SectionCache& cache, const std::vector<OpenSet>& cover,
                                const std::function<bool(const std::vector<std::size_t>&)>& f) {
  const std::size_t m = cover.size();
  std::vector<std::size_t> pool_sizes(m);
  for (std::size_t i = 0; i < m; ++i) pool_sizes[i] = cache.sections(cover[i].mask()).size();
  // overlap[i][j][a] = id of section a over cover_i restricted to cover_i ∩ cover_j.
  std::vector<std::vector<const std::vector<int>*>> overlap(m, std::vector<const std::vector<int>*>(m, nullptr));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) overlap[i][j] = &cache.restriction_ids(cover[i].mask(), cover[i].mask() & cover[j].mask());
    }
  }
  std::vector<std::size_t> choice(m, 0);
  bool keep_going = true;
  std::function<void(std::size_t)> recurse = [&](std::size_t depth) {
    if (depth == m) {
      keep_going = f(choice);
      return;
    }
    for (std::size_t a = 0; a < pool_sizes[depth] && keep_going; ++a) {
      bool ok = true;
      for (std::size_t i = 0; i < depth && ok; ++i) ok = (*overlap[depth][i])[a] == (*overlap[i][depth])[choice[i]];
      if (!ok) continue;
      choice[depth] = a;
      recurse(depth + 1);
    }
  };
  recurse(0);
}

std::vector<OpenSet> minimal_neighborhood_cover(const OpenSet& u) {
  std::vector<OpenSet> cover;
  for (auto p : u.members()) {
    OpenSet n(u.space(), u.space()->minimal_neighborhood(p));
    if (std::find(cover.begin(), cover.end(), n) == cover.end()) cover.push_back(n);
  }
  return cover;
}

}  // namespace

CompletenessReport check_completeness(SectionCache& cache, const OpenSet& u, const std::vector<OpenSet>& cover) {
  if (!is_open_cover(u, cover)) throw Error(ErrorKind::NotACover, "family is not an open cover", {u.space()->describe(u.mask())});
  if (u.space() != cache.presheaf().space()) throw Error(ErrorKind::DomainMismatch, "open set of another space");
  CompletenessReport report;
  report.s1.axiom = "S1";
  report.s2.axiom = "S2";

  // Signature of a section over U: the ids of its restrictions to every cover member.
  const auto& sections = cache.sections(u.mask());
  const auto& own = cache.ids(u.mask());
  std::vector<const std::vector<int>*> to_member;
  for (const auto& v : cover) to_member.push_back(&cache.restriction_ids(u.mask(), v.mask()));
  std::map<std::vector<int>, std::size_t> by_signature;
  for (std::size_t a = 0; a < sections.size(); ++a) {
    std::vector<int> sig;
    sig.reserve(cover.size());
    for (const auto* r : to_member) sig.push_back((*r)[a]);
    auto [it, inserted] = by_signature.emplace(std::move(sig), a);
    if (!inserted && report.s1.pass && own[it->second] != own[a]) {
      report.s1.pass = false;
      report.s1.witness = {sections[it->second], sections[a]};
    }
  }

  std::vector<int> family_sig(cover.size());
  for_each_compatible_family(cache, cover, [&](const std::vector<std::size_t>& choice) {
    for (std::size_t i = 0; i < cover.size(); ++i) family_sig[i] = cache.ids(cover[i].mask())[choice[i]];
    if (by_signature.count(family_sig) != 0) return true;
    report.s2.pass = false;
    for (std::size_t i = 0; i < cover.size(); ++i) report.s2.witness.push_back(cache.sections(cover[i].mask())[choice[i]]);
    return false;
  });
  return report;
}

CompletenessReport check_completeness(const Presheaf& presheaf, const OpenSet& u, const std::vector<OpenSet>& cover,
                                      const SampleGrid& grid) {
  SectionCache cache(presheaf, grid);
  return check_completeness(cache, u, cover);
}

std::vector<CompatibleFamily> sheafify_sections(const Presheaf& presheaf, const OpenSet& u, const SampleGrid& grid) {
  const std::vector<OpenSet> cover = minimal_neighborhood_cover(u);
  SectionCache cache(presheaf, grid);
  std::vector<CompatibleFamily> out;
  for_each_compatible_family(cache, cover, [&](const std::vector<std::size_t>& choice) {
    CompatibleFamily f{cover, {}};
    for (std::size_t i = 0; i < cover.size(); ++i) f.members.push_back(cache.sections(cover[i].mask())[choice[i]]);
    out.push_back(std::move(f));
    return true;
  });
  return out;
}

Stalk stalk_at(const Presheaf& presheaf, const std::string& point, const SampleGrid& grid) {
  OpenSet n = minimal_open_neighborhood(presheaf.space(), point);
  return {n, presheaf.sections(n, grid)};
}

PresheafSection glue(const PointwisePresheaf& presheaf, const OpenSet& u, const CompatibleFamily& family) {
  if (family.cover.size() != family.members.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one section per cover member required");
  }
  for (std::size_t i = 0; i < family.cover.size(); ++i) {
    if (!(family.members[i].domain == family.cover[i])) {
      throw Error(ErrorKind::DomainMismatch, "family member lives over a different open set");
    }
  }
  if (!is_open_cover(u, family.cover)) {
    throw Error(ErrorKind::NotACover, "family is not an open cover", {u.space()->describe(u.mask())});
  }
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    for (std::size_t j = i + 1; j < family.members.size(); ++j) {
      const OpenSet overlap = family.cover[i].intersect(family.cover[j]);
      if (!(presheaf.restrict(family.members[i], overlap) == presheaf.restrict(family.members[j], overlap))) {
        throw Error(ErrorKind::IncompatibleFamily, "members disagree on an overlap", overlap.labels());
      }
    }
  }
  PresheafSection out{u, {}};
  for (auto p : u.members()) {
    for (std::size_t i = 0; i < family.cover.size(); ++i) {
      if (family.cover[i].contains(p)) {
        auto b = presheaf.block_at(family.members[i], p);
        out.payload.insert(out.payload.end(), b.begin(), b.end());
        break;
      }
    }
  }
  return out;
}

}  // namespace sheafsym
