#include "sheafsym/json_io.hpp"

#include <string>

#include "sheafsym/error.hpp"

namespace sheafsym::json_io {

namespace {

[[noreturn]] void malformed(const std::string& message) { throw Error(ErrorKind::MalformedInput, message); }

const Json& require_array(const Json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be a JSON array");
  return j;
}

std::string require_string(const Json& j, const char* what) {
  if (!j.is_string()) malformed(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::size_t require_count(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    malformed(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::vector<std::string> labels(const Json& j, const char* what) {
  std::vector<std::string> out;
  for (const auto& e : require_array(j, what)) out.push_back(require_string(e, "point label"));
  return out;
}

}  // namespace

Json rational(const Rational& r) { return r.to_string(); }

Rational parse_rational(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(j.dump()));
  malformed("rational must be a string \"p/q\" or an integer, got " + j.dump());
}

Json space(const FiniteSpace& space) {
  Json opens = Json::array();
  for (PointMask mask : space.opens()) opens.push_back(space.labels_of(mask));
  return Json{{"points", space.points()}, {"opens", std::move(opens)}};
}

SpacePtr parse_space(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("opens")) {
    malformed("site must be an object with \"points\" and \"opens\"");
  }
  std::vector<std::vector<std::string>> opens;
  for (const auto& o : require_array(j.at("opens"), "opens")) opens.push_back(labels(o, "open set"));
  return FiniteSpace::validate(labels(j.at("points"), "points"), opens);
}

Json open_set(const OpenSet& u) { return u.labels(); }

OpenSet parse_open(const Json& j, const SpacePtr& space) { return OpenSet::from_labels(space, labels(j, "open set")); }

Json section(const StructureSection& s) {
  Json values = Json::object();
  const auto members = s.domain().members();
  for (std::size_t k = 0; k < members.size(); ++k) values[s.domain().space()->label(members[k])] = rational(s.values()[k]);
  return Json{{"open", open_set(s.domain())}, {"values", std::move(values)}};
}

Json compact_section(const StructureSection& s) {
  if (auto c = s.constant_value(); c && !s.domain().empty()) return rational(*c);
  return section(s);
}

StructureSection parse_section(const Json& j, const OpenSet& domain) {
  if (!j.is_object()) return StructureSection::constant(domain, parse_rational(j));
  if (!j.contains("open") || !j.contains("values") || !j.at("values").is_object()) {
    malformed("section object needs \"open\" and a \"values\" map");
  }
  const OpenSet declared = parse_open(j.at("open"), domain.space());
  if (!(declared == domain)) {
    throw Error(ErrorKind::DomainMismatch, "section declared over " + domain.space()->describe(declared.mask()) +
                                               " where " + domain.space()->describe(domain.mask()) + " is expected");
  }
  const auto& values = j.at("values");
  for (const auto& [label, _] : values.items()) {
    if (!domain.contains(domain.space()->index_of(label))) {
      throw Error(ErrorKind::NotASubset, "value given at a point outside the open set", {label});
    }
  }
  std::vector<Rational> out;
  for (auto p : domain.members()) {
    const auto& label = domain.space()->label(p);
    if (!values.contains(label)) throw Error(ErrorKind::MalformedInput, "section has no value at a point", {label});
    out.push_back(parse_rational(values.at(label)));
  }
  return {domain, std::move(out)};
}

Json vector(const SectionVector& v) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(compact_section(v.entry(i)));
  return out;
}

SectionVector parse_vector(const Json& j, const OpenSet& domain) {
  std::vector<StructureSection> entries;
  for (const auto& e : require_array(j, "vector")) entries.push_back(parse_section(e, domain));
  return SectionVector::from_entries(domain, entries);
}

Json matrix(const SectionMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(compact_section(m.entry(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

SectionMatrix parse_matrix(const Json& j, const OpenSet& domain) {
  std::vector<std::vector<StructureSection>> rows;
  for (const auto& r : require_array(j, "matrix")) {
    std::vector<StructureSection> row;
    for (const auto& e : require_array(r, "matrix row")) row.push_back(parse_section(e, domain));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::DimensionMismatch, "matrix rows have different lengths");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return SectionMatrix::zero(domain, 0, 0);
  return SectionMatrix::from_entries(domain, rows);
}

std::string multi_index_key(MultiIndex subset) {
  std::string key = "[";
  bool first = true;
  for (auto i : indices_of(subset)) {
    if (!first) key += ",";
    key += std::to_string(i + 1);
    first = false;
  }
  return key + "]";
}

MultiIndex parse_multi_index_key(const std::string& key, std::size_t rank) {
  const Json parsed = Json::parse(key, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_array()) malformed("multi-index key must look like \"[1,3]\": " + key);
  std::vector<std::size_t> indices;
  for (const auto& e : parsed) {
    if (!e.is_number_integer() || e.get<long long>() < 1 || static_cast<std::size_t>(e.get<long long>()) > rank) {
      malformed("multi-index entries must be integers in 1.." + std::to_string(rank) + ": " + key);
    }
    const auto i = static_cast<std::size_t>(e.get<long long>()) - 1;
    if (!indices.empty() && i <= indices.back()) malformed("multi-index must be strictly increasing: " + key);
    indices.push_back(i);
  }
  return subset_of(indices);
}

Json kform(const KForm& form) {
  Json coeffs = Json::object();
  if (!form.overflowed()) {
    for (MultiIndex subset : combinations(form.rank(), form.degree())) {
      const StructureSection c = form.coefficient(subset);
      if (!c.is_zero()) coeffs[multi_index_key(subset)] = compact_section(c);
    }
  }
  return Json{{"degree", form.degree()}, {"rank", form.rank()}, {"coeffs", std::move(coeffs)}};
}

KForm parse_kform(const Json& j, const OpenSet& domain) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("rank")) {
    malformed("k-form must be an object with \"degree\" and \"rank\"");
  }
  const std::size_t degree = require_count(j.at("degree"), "degree");
  const std::size_t rank = require_count(j.at("rank"), "rank");
  if (rank > 16) throw Error(ErrorKind::DimensionTooLarge, "k-form rank limited to 16");
  if (degree > rank) malformed("k-form degree exceeds rank");
  KForm form = KForm::zero(domain, rank, degree);
  if (!j.contains("coeffs")) return form;
  if (!j.at("coeffs").is_object()) malformed("\"coeffs\" must be an object keyed by multi-indices");
  for (const auto& [key, value] : j.at("coeffs").items()) {
    const MultiIndex subset = parse_multi_index_key(key, rank);
    if (static_cast<std::size_t>(__builtin_popcount(subset)) != degree) {
      malformed("multi-index " + key + " does not have " + std::to_string(degree) + " entries");
    }
    form = form + KForm::basis(domain, rank, indices_of(subset)).scaled(parse_section(value, domain));
  }
  return form;
}

Json polynomial(const QPolynomial& p) {
  Json out = Json::array();
  for (const auto& c : p.coefficients()) out.push_back(rational(c));
  return out;
}

Json char_poly(const CharPoly& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(compact_section(c));
  return Json{{"monic", p.is_monic()}, {"coeffs", std::move(coeffs)}};
}

Json presheaf_section(const PresheafSection& s) {
  Json payload = Json::array();
  for (const auto& r : s.payload) payload.push_back(rational(r));
  return Json{{"open", open_set(s.domain)}, {"payload", std::move(payload)}};
}

}  // namespace sheafsym::json_io
