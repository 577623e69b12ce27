#include "sheafsym/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "sheafsym/charpoly.hpp"
#include "sheafsym/error.hpp"
#include "sheafsym/exterior.hpp"
#include "sheafsym/json_io.hpp"
#include "sheafsym/presheaf.hpp"
#include "sheafsym/symplectic.hpp"

namespace sheafsym::cli {

namespace {

using json_io::Json;

struct Options {
  std::string command;
  std::string input;
  std::string output = "text";
  std::uint64_t seed = 0;
  bool timing = false;
};

struct Failure {
  std::string code;
  std::string message;
  Json witness = Json::array();
};

struct Outcome {
  Json result = nullptr;
  Json certificate = nullptr;
  std::optional<Failure> failure;
};

// Errors raised while `parsing` is set are input errors (exit 2); later ones
// are domain errors (exit 1).
struct Context {
  const Json& doc;
  const Options& options;
  bool parsing = true;
};

const Json& field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::MalformedInput, std::string("problem file has no \"") + key + "\" field");
  return doc.at(key);
}

SpacePtr space_of(const Json& doc) { return doc.contains("space") ? json_io::parse_space(doc.at("space")) : FiniteSpace::point(); }

OpenSet domain_of(const Json& doc, const SpacePtr& space) {
  return doc.contains("open") ? json_io::parse_open(doc.at("open"), space) : OpenSet::whole(space);
}

Json labels_json(const std::vector<std::string>& labels) { return Json(labels); }

Json basis_json(const DarbouxBasis& basis) {
  Json out = Json::array();
  for (const auto* group : {&basis.s, &basis.t, &basis.kernel}) {
    for (const auto& v : *group) out.push_back(json_io::vector(v));
  }
  return out;
}

Outcome run_darboux(Context& ctx, bool allow_degenerate) {
  const SpacePtr space = space_of(ctx.doc);
  const OpenSet u = domain_of(ctx.doc, space);
  const SectionMatrix omega = json_io::parse_matrix(field(ctx.doc, "form"), u);
  ctx.parsing = false;

  const DarbouxBasis basis = allow_degenerate ? skew_normal_form(omega) : darboux_basis(omega);
  Outcome out;
  out.result = Json{{"m", basis.m}};
  if (allow_degenerate) out.result["rank"] = 2 * basis.m;
  out.result["basis"] = basis_json(basis);
  out.result["change_of_basis"] = json_io::matrix(basis.change_of_basis);
  out.certificate = Json{{"gram", json_io::matrix(basis.gram)}};
  return out;
}

Json random_probe(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  QVector v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(num(rng), den(rng));
  Json out = Json::array();
  for (const auto& x : v) out.push_back(json_io::rational(x));
  return out;
}

Outcome run_check_symplectic(Context& ctx) {
  const SpacePtr space = space_of(ctx.doc);
  const OpenSet u = domain_of(ctx.doc, space);
  const SectionMatrix m = json_io::parse_matrix(field(ctx.doc, "matrix"), u);
  std::optional<SectionMatrix> source;
  std::optional<SectionMatrix> target;
  if (ctx.doc.contains("form")) source = target = json_io::parse_matrix(ctx.doc.at("form"), u);
  if (ctx.doc.contains("form_source")) source = json_io::parse_matrix(ctx.doc.at("form_source"), u);
  if (ctx.doc.contains("form_target")) target = json_io::parse_matrix(ctx.doc.at("form_target"), u);
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "the map must be square");
  if (!source || !target) {
    if (m.rows() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "the standard form needs an even dimension");
    const SectionMatrix j = standard_symplectic_form(u, m.rows() / 2);
    if (!source) source = j;
    if (!target) target = j;
  }
  ctx.parsing = false;

  const bool ok = is_symplectic_map(m, *source, *target);
  const SectionMatrix pullback = transpose_morphism(m) * *target * m;

  std::mt19937_64 rng(ctx.options.seed);
  const Json x = random_probe(m.rows(), rng);
  const Json y = random_probe(m.rows(), rng);
  const SectionVector xv = json_io::parse_vector(x, u);
  const SectionVector yv = json_io::parse_vector(y, u);

  Outcome out;
  out.result = Json{{"symplectic", ok}, {"det", json_io::compact_section(determinant(m))}};
  out.certificate = Json{{"pullback", json_io::matrix(pullback)},
                         {"probe",
                          {{"seed", ctx.options.seed},
                           {"x", x},
                           {"y", y},
                           {"form", json_io::compact_section(bilinear(*source, xv, yv))},
                           {"pulled_back", json_io::compact_section(bilinear(*target, m.apply(xv), m.apply(yv)))}}}};
  if (!ok) {
    Json witness = Json::array();
    for (auto p : u.members()) {
      if (!(pullback.at_point(p) == source->at_point(p))) witness.push_back(space->label(p));
    }
    out.failure = Failure{"NotSymplectic", "M^T Omega' M differs from Omega", std::move(witness)};
  }
  return out;
}

Outcome run_charpoly(Context& ctx) {
  const SpacePtr space = space_of(ctx.doc);
  const OpenSet u = domain_of(ctx.doc, space);
  const SectionMatrix m = json_io::parse_matrix(field(ctx.doc, "matrix"), u);
  ctx.parsing = false;

  const CharPoly p = char_poly(m);
  Outcome out;
  out.result = json_io::char_poly(p);
  out.certificate = Json{{"residue", json_io::matrix(cayley_hamilton_check(m))}};
  return out;
}

Outcome run_eigen(Context& ctx) {
  const SpacePtr space = space_of(ctx.doc);
  const OpenSet u = domain_of(ctx.doc, space);
  const SectionMatrix m = json_io::parse_matrix(field(ctx.doc, "matrix"), u);
  ctx.parsing = false;

  const EigenReport report = eigen_sections(m);
  Json pairs = Json::array();
  Json residues = Json::array();
  for (const auto& pair : report.pairs) {
    pairs.push_back(Json{{"lambda", json_io::compact_section(pair.lambda)}, {"vector", json_io::vector(pair.vector)}});
    residues.push_back(json_io::vector(m.apply(pair.vector) - pair.vector.scaled(pair.lambda)));
  }
  Outcome out;
  out.result = Json{{"pairs", std::move(pairs)}, {"omitted_points", report.omitted_points}};
  out.certificate = Json{{"residues", std::move(residues)}};
  if (report.pairs.empty() && !report.omitted_points.empty()) {
    out.failure = Failure{"NoRationalEigenvalue", "no eigenpair section exists over the whole open set",
                          labels_json(report.omitted_points)};
  }
  return out;
}

std::unique_ptr<Presheaf> make_presheaf(const std::string& kind, const SpacePtr& space) {
  if (kind == "function") return std::make_unique<FunctionSheaf>(space);
  if (kind == "constant") return std::make_unique<ConstantPresheaf>(space);
  if (kind == "locally_constant") return std::make_unique<LocallyConstantSheaf>(space);
  throw Error(ErrorKind::MalformedInput, "unknown presheaf kind \"" + kind + "\"", {kind});
}

std::vector<OpenSet> default_cover(const OpenSet& u) {
  std::vector<OpenSet> cover;
  for (auto p : u.members()) {
    OpenSet nbhd(u.space(), u.space()->minimal_neighborhood(p));
    if (std::find(cover.begin(), cover.end(), nbhd) == cover.end()) cover.push_back(nbhd);
  }
  return cover;
}

Json axiom_json(const AxiomResult& r) {
  Json witness = Json::array();
  for (const auto& s : r.witness) witness.push_back(json_io::presheaf_section(s));
  return Json{{"axiom", r.axiom}, {"status", r.pass ? "pass" : "fail"}, {"witness", std::move(witness)}};
}

Outcome run_sheaf_check(Context& ctx) {
  const SpacePtr space = space_of(ctx.doc);
  const OpenSet u = domain_of(ctx.doc, space);
  const Json& kind = field(ctx.doc, "presheaf");
  if (!kind.is_string()) throw Error(ErrorKind::MalformedInput, "\"presheaf\" must be a string");
  const auto presheaf = make_presheaf(kind.get<std::string>(), space);
  std::vector<OpenSet> cover;
  if (ctx.doc.contains("cover")) {
    if (!ctx.doc.at("cover").is_array()) throw Error(ErrorKind::MalformedInput, "\"cover\" must be an array of open sets");
    for (const auto& member : ctx.doc.at("cover")) cover.push_back(json_io::parse_open(member, space));
  } else {
    cover = default_cover(u);
  }
  SampleGrid grid = SampleGrid::seeded(ctx.options.seed, 2);
  if (ctx.doc.contains("grid")) {
    if (!ctx.doc.at("grid").is_array()) throw Error(ErrorKind::MalformedInput, "\"grid\" must be an array of rationals");
    grid.values.clear();
    for (const auto& v : ctx.doc.at("grid")) grid.values.push_back(json_io::parse_rational(v));
  }
  ctx.parsing = false;

  const CompletenessReport report = check_completeness(*presheaf, u, cover, grid);
  Json cover_json = Json::array();
  for (const auto& member : cover) cover_json.push_back(json_io::open_set(member));
  Json grid_json = Json::array();
  for (const auto& v : grid.values) grid_json.push_back(json_io::rational(v));

  Outcome out;
  out.result = Json{{"presheaf", presheaf->name()},
                    {"open", json_io::open_set(u)},
                    {"cover", std::move(cover_json)},
                    {"grid", std::move(grid_json)},
                    {"axioms", Json::array({axiom_json(report.s1), axiom_json(report.s2)})}};
  out.certificate = Json{{"complete", report.complete()}};
  if (!report.complete()) {
    Json failed = Json::array();
    if (!report.s1.pass) failed.push_back("S1");
    if (!report.s2.pass) failed.push_back("S2");
    out.failure = Failure{"NotComplete", "the presheaf violates a completeness axiom on this cover", std::move(failed)};
  }
  return out;
}

Outcome run_wedge(Context& ctx) {
  const SpacePtr space = space_of(ctx.doc);
  const OpenSet u = domain_of(ctx.doc, space);
  const KForm left = json_io::parse_kform(field(ctx.doc, "left"), u);
  const KForm right = json_io::parse_kform(field(ctx.doc, "right"), u);
  ctx.parsing = false;

  if (left.rank() != right.rank()) throw Error(ErrorKind::DimensionMismatch, "forms on modules of different rank");
  const KForm product = wedge(left, right);
  const KForm swapped = wedge(right, left);
  const int sign = (left.degree() * right.degree()) % 2 == 0 ? 1 : -1;
  if (!product.overflowed() && !(product == swapped.scaled(Rational(sign)))) {
    throw Error(ErrorKind::InvariantViolation, "graded commutativity failed");
  }
  Outcome out;
  out.result = Json{{"form", json_io::kform(product)}, {"overflow", product.overflowed()}};
  out.certificate = Json{{"swapped", json_io::kform(swapped)}, {"sign", sign}};
  return out;
}

Outcome dispatch(Context& ctx) {
  const std::string& c = ctx.options.command;
  if (c == "darboux") return run_darboux(ctx, false);
  if (c == "normal-form") return run_darboux(ctx, true);
  if (c == "check-symplectic") return run_check_symplectic(ctx);
  if (c == "charpoly") return run_charpoly(ctx);
  if (c == "eigen") return run_eigen(ctx);
  if (c == "sheaf-check") return run_sheaf_check(ctx);
  if (c == "wedge") return run_wedge(ctx);
  throw Error(ErrorKind::MalformedInput, "unknown subcommand " + c);
}

// ---- rendering ----

bool is_section_object(const Json& j) { return j.is_object() && j.size() == 2 && j.contains("open") && j.contains("values"); }

bool is_inline(const Json& j) {
  if (j.is_primitive() || is_section_object(j)) return true;
  if (j.is_array()) return std::all_of(j.begin(), j.end(), [](const Json& e) { return is_inline(e); });
  return false;
}

std::string inline_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  if (is_section_object(j)) {
    std::string s = "{";
    bool first = true;
    for (const auto& [label, value] : j.at("values").items()) {
      s += (first ? "" : ", ") + label + ": " + inline_text(value);
      first = false;
    }
    return s + "}";
  }
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_text(j[i]);
    return s + "]";
  }
  return j.dump();
}

void render_text(const Json& j, int indent, std::ostream& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (is_inline(value)) {
        out << pad << key << ": " << inline_text(value) << '\n';
      } else {
        out << pad << key << ":\n";
        render_text(value, indent + 2, out);
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (is_inline(e)) {
        out << pad << "- " << inline_text(e) << '\n';
      } else {
        out << pad << "-\n";
        render_text(e, indent + 2, out);
      }
    }
  } else {
    out << pad << inline_text(j) << '\n';
  }
}

void emit(const Json& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << report.dump(2) << '\n';
  } else {
    render_text(report, 0, out);
  }
}

Json make_report(const std::string& command, const Outcome& outcome) {
  Json report{{"command", command}, {"status", outcome.failure ? "error" : "ok"}};
  if (outcome.failure) {
    report["error"] = Json{{"code", outcome.failure->code},
                           {"message", outcome.failure->message},
                           {"witness", outcome.failure->witness}};
  }
  report["result"] = outcome.result;
  report["certificate"] = outcome.certificate;
  return report;
}

Outcome failure_outcome(const Error& e) {
  Outcome out;
  out.failure = Failure{std::string(e.name()), e.detail(), labels_json(e.witness())};
  return out;
}

Outcome failure_outcome(const std::string& code, const std::string& message) {
  Outcome out;
  out.failure = Failure{code, message, Json::array()};
  return out;
}

// Output format requested on the command line, recovered even when
// argument parsing fails so that the error report honours it.
std::string scan_output_format(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--output=json" || (args[i] == "--output" && i + 1 < args.size() && args[i + 1] == "json")) return "json";
  }
  return "text";
}

const std::vector<std::string> kCommands = {"darboux", "normal-form", "check-symplectic", "charpoly",
                                            "eigen", "sheaf-check", "wedge"};

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out) {
  Options options;
  CLI::App app{"Exact symplectic algebra over finite topological spaces", "sheafsym"};
  app.require_subcommand(1);
  for (const auto& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " computation on a problem file");
    sub->add_option("--input", options.input, "JSON problem file")->required();
    sub->add_option("--output", options.output, "report format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--seed", options.seed, "seed for randomized self-checks");
    sub->add_flag("--timing", options.timing, "include wall-clock timing in the report");
    sub->callback([&options, name] { options.command = name; });
  }

  std::vector<std::string> argv_storage{"sheafsym"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string command;
    for (const auto& a : args) {
      if (std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end()) {
        command = a;
        break;
      }
    }
    emit(make_report(command, failure_outcome("MalformedInput", e.what())), scan_output_format(args), out);
    return kExitMalformed;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  int code = kExitOk;

  std::ifstream file(options.input);
  if (!file) {
    outcome = failure_outcome("MalformedInput", "cannot open input file " + options.input);
    code = kExitMalformed;
  } else {
    const Json doc = Json::parse(file, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      outcome = failure_outcome("MalformedInput", "input is not a JSON object");
      code = kExitMalformed;
    } else {
      Context ctx{doc, options};
      try {
        outcome = dispatch(ctx);
        if (outcome.failure) code = kExitDomainError;
      } catch (const Error& e) {
        outcome = failure_outcome(e);
        code = ctx.parsing || e.kind() == ErrorKind::MalformedInput ? kExitMalformed : kExitDomainError;
      } catch (const nlohmann::json::exception& e) {
        outcome = failure_outcome("MalformedInput", e.what());
        code = kExitMalformed;
      }
    }
  }

  Json report = make_report(options.command, outcome);
  if (options.timing) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report["timing"] = Json{{"seconds", elapsed.count()}};
  }
  emit(report, options.output, out);
  return code;
}

}  // namespace sheafsym::cli
