#pragma once

#include "json.hpp"

#include "sheafsym/charpoly.hpp"
#include "sheafsym/exterior.hpp"
#include "sheafsym/free_module.hpp"
#include "sheafsym/polynomial.hpp"
#include "sheafsym/presheaf.hpp"
#include "sheafsym/section.hpp"
#include "sheafsym/site.hpp"

// JSON encodings of the library's objects. Every parse_* throws
// Error{MalformedInput} on a shape or type mismatch and lets the library's
// own validation errors through (UnknownPoint, NotAnOpenSet, ...).
namespace sheafsym::json_io {

// Insertion-ordered so that reports are byte-stable.
using Json = nlohmann::ordered_json;

// "p/q" in canonical form, or "p" for integers.
Json rational(const Rational& r);
// Accepts canonical or non-canonical strings and JSON integers.
Rational parse_rational(const Json& j);

// {"points": [...], "opens": [[...], ...]}
Json space(const FiniteSpace& space);
SpacePtr parse_space(const Json& j);

// Array of point labels in point order.
Json open_set(const OpenSet& u);
OpenSet parse_open(const Json& j, const SpacePtr& space);

// {"open": [...], "values": {label: rational}}
Json section(const StructureSection& s);
// A bare rational when the section is constant, else the object form.
Json compact_section(const StructureSection& s);
// Accepts either form; a bare rational is promoted to a constant section
// over `domain`. An object must be declared over `domain` exactly
// (Error{DomainMismatch}) and assign every point of it.
StructureSection parse_section(const Json& j, const OpenSet& domain);

Json vector(const SectionVector& v);
SectionVector parse_vector(const Json& j, const OpenSet& domain);

// Array of rows of compact sections.
Json matrix(const SectionMatrix& m);
SectionMatrix parse_matrix(const Json& j, const OpenSet& domain);

// {"degree": k, "rank": n, "coeffs": {"[1,3]": ...}} with 1-based strictly
// increasing multi-indices; zero coefficients are omitted.
Json kform(const KForm& form);
KForm parse_kform(const Json& j, const OpenSet& domain);
std::string multi_index_key(MultiIndex subset);
MultiIndex parse_multi_index_key(const std::string& key, std::size_t rank);

// Coefficients, constant term first.
Json polynomial(const QPolynomial& p);
// {"monic": bool, "coeffs": [<section>...]}
Json char_poly(const CharPoly& p);

// {"open": [...], "payload": [...]}
Json presheaf_section(const PresheafSection& s);

}  // namespace sheafsym::json_io
