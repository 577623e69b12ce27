// Acceptance gate: one PASS/FAIL line per criterion, each with its time
// budget. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sheafsym/charpoly.hpp"
#include "sheafsym/cli.hpp"
#include "sheafsym/error.hpp"
#include "sheafsym/exterior.hpp"
#include "sheafsym/free_module.hpp"
#include "sheafsym/linalg.hpp"
#include "sheafsym/presheaf.hpp"
#include "sheafsym/symplectic.hpp"

using namespace sheafsym;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

OpenSet single_point() { return OpenSet::whole(FiniteSpace::point()); }

SectionMatrix constant(const QMatrix& m) { return SectionMatrix::constant(single_point(), m); }

QMatrix gram(const SectionMatrix& p, const SectionMatrix& omega) {
  return (transpose_morphism(p) * omega * p).stalk(0);
}

template <typename T>
T pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

OpenSet random_nonempty_open(const SpacePtr& space, std::mt19937_64& rng) {
  std::vector<PointMask> opens;
  for (auto m : space->opens()) {
    if (m != 0) opens.push_back(m);
  }
  return {space, pick(opens, rng)};
}

// Minimal neighbourhoods of the points of U plus one random open inside U.
std::vector<OpenSet> random_cover(const OpenSet& u, std::mt19937_64& rng) {
  std::vector<OpenSet> cover;
  for (auto p : u.members()) {
    OpenSet n(u.space(), u.space()->minimal_neighborhood(p));
    if (std::find(cover.begin(), cover.end(), n) == cover.end()) cover.push_back(n);
  }
  std::vector<PointMask> inside;
  for (auto m : u.space()->opens()) {
    if ((m & ~u.mask()) == 0) inside.push_back(m);
  }
  OpenSet extra(u.space(), pick(inside, rng));
  if (std::find(cover.begin(), cover.end(), extra) == cover.end()) cover.push_back(extra);
  return cover;
}

// ---- criteria ----

Check darboux_suite() {
  Check c;
  const std::size_t sizes[] = {2, 4, 6, 8};
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const std::size_t n = sizes[seed % 4];
    const SectionMatrix omega = constant(random_nondegenerate_skew(n / 2, rng));
    const DarbouxBasis basis = darboux_basis(omega);
    c.expect(basis.m == n / 2, "wrong m for seed " + std::to_string(seed));
    c.expect(gram(basis.change_of_basis, omega) == standard_symplectic_matrix(n / 2),
             "P^T Omega P != J for seed " + std::to_string(seed));
  }
  return c;
}

Check degenerate_suite() {
  Check c;
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(2000 + seed);
    const std::size_t n = 2 + static_cast<std::size_t>(seed) % 7;  // 2..8
    const std::size_t m = std::uniform_int_distribution<std::size_t>(0, (n - 1) / 2)(rng);
    const SectionMatrix omega = constant(random_skew_of_rank(n, m, rng));
    const DarbouxBasis basis = skew_normal_form(omega);
    c.expect(basis.m == m, "wrong rank for seed " + std::to_string(seed));
    c.expect(gram(basis.change_of_basis, omega) == skew_normal_matrix(n, m),
             "normal form not certified for seed " + std::to_string(seed));
    c.expect(!oracle::leibniz_det(basis.change_of_basis.stalk(0)).is_zero(), "P singular for seed " + std::to_string(seed));
  }
  return c;
}

Check cayley_hamilton_suite() {
  Check c;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(3000 + seed);
    const std::size_t n = 1 + static_cast<std::size_t>(seed) % 6;
    const SectionMatrix m = constant(oracle::random_matrix(n, n, rng));
    c.expect(poly_apply(char_poly(m), m).is_zero(), "P(M) != 0 for seed " + std::to_string(seed));
  }
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(3500 + seed);
    const auto spaces = enumerate_topologies(1 + static_cast<std::size_t>(seed) % 4);
    const SpacePtr space = pick(spaces, rng);
    const OpenSet u = random_nonempty_open(space, rng);
    const std::size_t n = 1 + static_cast<std::size_t>(seed) % 5;
    std::vector<QMatrix> stalks;
    for (std::size_t k = 0; k < u.size(); ++k) stalks.push_back(oracle::random_matrix(n, n, rng));
    const SectionMatrix m(u, n, n, stalks);
    c.expect(poly_apply(char_poly(m), m).is_zero(), "P(M) != 0 for section matrix seed " + std::to_string(seed));
  }
  return c;
}

Check laplace_suite() {
  Check c;
  int units = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(4000 + seed);
    const std::size_t n = 1 + static_cast<std::size_t>(seed) % 5;
    QMatrix a = oracle::random_matrix(n, n, rng);
    if (seed % 7 == 0 && n > 1) {
      for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = a(0, j);
    }
    const SectionMatrix am = constant(a);
    const auto [det, adj] = determinant_adjugate(am);
    const SectionMatrix scaled_id = SectionMatrix::identity(am.domain(), n).scaled(det);
    c.expect(am * adj == scaled_id && adj * am == scaled_id, "A adj(A) != det(A) I for seed " + std::to_string(seed));
    c.expect(det.values().front() == oracle::leibniz_det(a), "det disagrees with Leibniz for seed " + std::to_string(seed));
    if (det.is_unit()) {
      ++units;
      c.expect(am * adj.scaled(det.inverse()) == SectionMatrix::identity(am.domain(), n),
               "A (det^-1 adj A) != I for seed " + std::to_string(seed));
    }
  }
  c.expect(units > 50, "too few invertible instances");
  return c;
}

Check symplectic_group_suite() {
  Check c;
  std::vector<SymplecticMap> maps;
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(5000 + seed);
    const std::size_t half = 1 + static_cast<std::size_t>(seed) % 4;
    const QMatrix m = random_symplectic(half, rng);
    const QMatrix j = standard_symplectic_matrix(half);
    c.expect(m.transposed() * j * m == j, "M^T J M != J for seed " + std::to_string(seed));
    if (half <= 3) c.expect(oracle::leibniz_det(m) == Rational(1), "Leibniz det(M) != 1 for seed " + std::to_string(seed));
    c.expect(determinant(constant(m)).values().front() == Rational(1), "det(M) != 1 for seed " + std::to_string(seed));
    maps.emplace_back(constant(m));
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const SymplecticMap& f = maps[i];
    const SymplecticMap inv = sp_invert(f);
    const std::size_t half = f.half_rank();
    const SectionMatrix j = standard_symplectic_form(f.matrix().domain(), half);
    c.expect(is_symplectic_map(inv.matrix(), j, j), "inverse not symplectic");
    c.expect(sp_compose(f, inv) == SymplecticMap::identity(f.matrix().domain(), half), "M M^-1 != I");
    for (std::size_t k = i + 1; k < maps.size(); ++k) {
      if (maps[k].half_rank() != half) continue;
      const SymplecticMap g = sp_compose(f, maps[k]);
      c.expect(is_symplectic_map(g.matrix(), j, j), "composite not symplectic");
      c.expect(determinant(g.matrix()).values().front() == Rational(1), "composite det != 1");
    }
  }
  return c;
}

KForm standard_omega(const OpenSet& u, std::size_t m) {
  KForm omega = KForm::zero(u, 2 * m, 2);
  for (std::size_t i = 0; i < m; ++i) omega = omega + KForm::basis(u, 2 * m, {i, m + i});
  return omega;
}

Check form_power_suite() {
  Check c;
  const OpenSet u = single_point();
  for (std::size_t m = 1; m <= 4; ++m) {
    const KForm omega = standard_omega(u, m);
    const Rational constant_factor = oracle::factorial(m) * Rational((m / 2) % 2 == 0 ? 1 : -1);
    c.expect(form_power(omega, m) == KForm::top(u, 2 * m).scaled(constant_factor), "omega^m constant wrong for m=" + std::to_string(m));
    c.expect(orientation_form(omega, m) == KForm::top(u, 2 * m), "orientation form not the unit top form for m=" + std::to_string(m));
  }
  return c;
}

KForm random_form(const OpenSet& u, std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<QVector> stalks;
  for (std::size_t p = 0; p < u.size(); ++p) stalks.push_back(oracle::random_vector(binomial(n, k), rng));
  return {u, n, k, stalks};
}

Check exterior_suite() {
  Check c;
  const OpenSet u = single_point();
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(7000 + seed);
    const std::size_t n = 1 + static_cast<std::size_t>(seed) % 5;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    const std::size_t l = std::uniform_int_distribution<std::size_t>(0, n - k)(rng);
    const KForm xi = random_form(u, n, k, rng);
    const KForm eta = random_form(u, n, l, rng);
    const Rational sign((k * l) % 2 == 0 ? 1 : -1);
    c.expect(wedge(xi, eta) == wedge(eta, xi).scaled(sign), "graded commutativity, seed " + std::to_string(seed));

    const std::size_t p = std::uniform_int_distribution<std::size_t>(0, n - k - l)(rng);
    const KForm zeta = random_form(u, n, p, rng);
    c.expect(wedge(wedge(xi, eta), zeta) == wedge(xi, wedge(eta, zeta)), "associativity, seed " + std::to_string(seed));

    const std::size_t order = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(n, 4))(rng);
    std::size_t entries = 1;
    for (std::size_t i = 0; i < order; ++i) entries *= n;
    const CovariantTensor t(u, n, order, {oracle::random_vector(entries, rng)});
    const CovariantTensor at = alternation(t);
    c.expect(alternation(at) == at && at.is_antisymmetric(), "alternation idempotence, seed " + std::to_string(seed));

    std::vector<SectionVector> alphas;
    std::vector<SectionVector> args;
    for (std::size_t i = 0; i < k; ++i) {
      alphas.push_back(SectionVector::constant(u, oracle::random_vector(n, rng)));
      args.push_back(SectionVector::constant(u, oracle::random_vector(n, rng)));
    }
    KForm product = KForm::scalar(StructureSection::one(u), n);
    QMatrix pairings(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      product = wedge(product, KForm::one_form(alphas[i]));
      for (std::size_t j = 0; j < k; ++j) pairings(i, j) = pairing(alphas[i], args[j]).values().front();
    }
    c.expect(evaluate_form(product, args).values().front() == oracle::leibniz_det(pairings),
             "determinant evaluation formula, seed " + std::to_string(seed));
  }
  return c;
}

// All families of opens inside U whose union is U.
std::vector<std::vector<OpenSet>> all_covers(const OpenSet& u) {
  std::vector<PointMask> inside;
  for (auto m : u.space()->opens()) {
    if ((m & ~u.mask()) == 0) inside.push_back(m);
  }
  std::vector<std::vector<OpenSet>> covers;
  const std::size_t count = std::size_t{1} << inside.size();
  for (std::size_t bits = 0; bits < count; ++bits) {
    PointMask unite = 0;
    std::vector<OpenSet> family;
    for (std::size_t i = 0; i < inside.size(); ++i) {
      if ((bits >> i) & 1U) {
        unite |= inside[i];
        family.emplace_back(u.space(), inside[i]);
      }
    }
    if (unite == u.mask()) covers.push_back(std::move(family));
  }
  return covers;
}

Check sheaf_axiom_suite() {
  Check c;
  const SampleGrid grid = SampleGrid::seeded(8, 2);
  std::size_t checked = 0;
  for (std::size_t n = 0; n <= 4; ++n) {
    for (const auto& space : enumerate_topologies(n)) {
      const FunctionSheaf sheaf(space);
      SectionCache cache(sheaf, grid);
      for (auto mask : space->opens()) {
        const OpenSet u(space, mask);
        for (const auto& cover : all_covers(u)) {
          const CompletenessReport r = check_completeness(cache, u, cover);
          ++checked;
          if (!r.complete()) c.fail("function sheaf fails on " + space->describe(mask));
        }
      }
    }
  }
  c.expect(checked > 100000, "too few covers checked: " + std::to_string(checked));

  const SpacePtr two = FiniteSpace::discrete({"a", "b"});
  const ConstantPresheaf constant_presheaf(two);
  const OpenSet u = OpenSet::whole(two);
  const std::vector<OpenSet> cover{OpenSet::from_labels(two, {"a"}), OpenSet::from_labels(two, {"b"})};
  const CompletenessReport first = check_completeness(constant_presheaf, u, cover, grid);
  const CompletenessReport second = check_completeness(constant_presheaf, u, cover, grid);
  c.expect(first.s1.pass && !first.s2.pass, "constant presheaf should fail S2 only");
  c.expect(first.s2.witness == second.s2.witness, "S2 witness not reproducible");
  c.expect(first.s2.witness.size() == 2 && first.s2.witness[0].payload != first.s2.witness[1].payload,
           "S2 witness is not a pair of distinct constants");
  std::cout << "  (" << checked << " covers checked)\n";
  return c;
}

Check completeness_suite() {
  Check c;
  const SampleGrid grid = SampleGrid::seeded(9, 2);
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(9000 + seed);
    const SpacePtr space = pick(enumerate_topologies(1 + static_cast<std::size_t>(seed) % 4), rng);
    const OpenSet u = random_nonempty_open(space, rng);
    const auto cover = random_cover(u, rng);
    const std::size_t half = 1 + static_cast<std::size_t>(seed) % 2;
    std::vector<QMatrix> pool{QMatrix::identity(2 * half), random_symplectic(half, rng), random_symplectic(half, rng)};
    const SymplecticPresheaf sp(space, half, pool);

    std::vector<QMatrix> stalks;
    for (std::size_t k = 0; k < u.size(); ++k) stalks.push_back(pick(pool, rng));
    const PresheafSection global = sp.encode(SymplecticMap(SectionMatrix(u, 2 * half, 2 * half, stalks)));
    CompatibleFamily family{cover, {}};
    for (const auto& v : cover) family.members.push_back(sp.restrict(global, v));
    c.expect(is_compatible(sp, family), "Sp family not compatible, seed " + std::to_string(seed));
    c.expect(glue(sp, u, family) == global, "Sp gluing not the original, seed " + std::to_string(seed));
    c.expect(check_completeness(sp, u, cover, grid).complete(), "Sp presheaf incomplete, seed " + std::to_string(seed));
  }
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(9500 + seed);
    const SpacePtr space = pick(enumerate_topologies(1 + static_cast<std::size_t>(seed) % 4), rng);
    const OpenSet whole = OpenSet::whole(space);
    std::vector<QMatrix> stalks;
    for (std::size_t k = 0; k < space->size(); ++k) {
      const QMatrix s = random_invertible(2, rng);
      QMatrix d(2, 2);
      d(0, 0) = oracle::random_rational(rng);
      d(1, 1) = d(0, 0) + Rational(1 + static_cast<long>(k));
      stalks.push_back(s * d * *linalg::inverse(s));
    }
    const SectionMatrix m(whole, 2, 2, stalks);
    const EigenvectorPresheaf ep(m);
    const OpenSet u = random_nonempty_open(space, rng);
    const auto cover = random_cover(u, rng);

    PresheafSection global{u, {}};
    for (auto p : u.members()) {
      const auto block = pick(ep.candidates(p, grid), rng);
      global.payload.insert(global.payload.end(), block.begin(), block.end());
    }
    const EigenPair pair = ep.decode(global);
    const SectionMatrix mu = m.restrict(u);
    c.expect(is_eigenpair(mu, pair), "sampled section is not an eigenpair, seed " + std::to_string(seed));
    std::vector<EigenPair> members;
    for (const auto& v : cover) members.push_back(ep.decode(ep.restrict(global, v)));
    const EigenPair glued = eigen_presheaf_glue(mu, cover, members);
    c.expect(glued.lambda == pair.lambda && glued.vector == pair.vector, "eigenpair gluing not unique, seed " + std::to_string(seed));
    c.expect(check_completeness(ep, u, cover, grid).complete(), "eigenvector presheaf incomplete, seed " + std::to_string(seed));
  }
  return c;
}

Check reciprocity_suite() {
  Check c;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(10000 + seed);
    const std::size_t half = 1 + static_cast<std::size_t>(seed) % 4;
    std::vector<Rational> planted;
    QPolynomial expected = QPolynomial::constant(Rational(1));
    for (std::size_t i = 0; i < half; ++i) {
      const long num = std::uniform_int_distribution<long>(1, 5)(rng) * (rng() % 2 == 0 ? 1 : -1);
      const Rational lambda(num, std::uniform_int_distribution<long>(1, 3)(rng));
      planted.push_back(lambda);
      expected = expected * QPolynomial{-lambda, Rational(1)} * QPolynomial{-lambda.inverse(), Rational(1)};
    }
    const SectionMatrix m = constant(planted_spectrum_symplectic(planted, rng));
    const ReciprocityReport r = reciprocal_spectrum_check(m);
    c.expect(r.palindromic, "P(t) != t^2n P(1/t), seed " + std::to_string(seed));
    c.expect(r.closed_under_inverse, "spectrum not closed under inversion, seed " + std::to_string(seed));
    c.expect(r.poly.stalks().front() == expected, "characteristic polynomial differs from planted spectrum, seed " + std::to_string(seed));
    for (const auto& lambda : planted) {
      const auto& ev = r.eigenvalues.front();
      c.expect(std::find(ev.begin(), ev.end(), lambda) != ev.end() &&
                   std::find(ev.begin(), ev.end(), lambda.inverse()) != ev.end(),
               "planted eigenvalue missing, seed " + std::to_string(seed));
    }
  }
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Check cli_suite() {
  Check c;
  const std::string dir = SHEAFSYM_GOLDEN_DIR;
  std::ifstream cases(dir + "/cases.txt");
  std::string line;
  std::size_t count = 0;
  std::set<std::string> commands_with_error[3];
  while (std::getline(cases, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name;
    std::string command;
    int expected_exit = -1;
    fields >> name >> command >> expected_exit;
    std::vector<std::string> args{command, "--input", dir + "/" + name + ".json", "--output", "json"};
    std::string extra;
    while (fields >> extra) args.push_back(extra);
    std::ostringstream first;
    std::ostringstream second;
    const int code = cli::run_command(args, first);
    cli::run_command(args, second);
    c.expect(code == expected_exit, name + ": exit " + std::to_string(code) + ", expected " + std::to_string(expected_exit));
    c.expect(first.str() == second.str(), name + ": report not byte-stable");
    c.expect(first.str() == slurp(dir + "/" + name + ".expected"), name + ": report differs from golden file");
    if (expected_exit >= 0 && expected_exit <= 2) commands_with_error[expected_exit].insert(command);
    ++count;
  }
  for (int code = 0; code <= 2; ++code) {
    c.expect(commands_with_error[code].size() == 7, "exit code " + std::to_string(code) + " not covered for every subcommand");
  }
  c.expect(count >= 21, "too few golden cases");
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Darboux basis for random nondegenerate skew forms", 5, darboux_suite},
      {2, "degenerate skew normal form", 5, degenerate_suite},
      {3, "Cayley-Hamilton", 10, cayley_hamilton_suite},
      {4, "Laplace decomposition and adjugate inverse", 5, laplace_suite},
      {5, "symplectic group membership and closure", 5, symplectic_group_suite},
      {6, "omega^m constant and orientation form", 2, form_power_suite},
      {7, "exterior algebra laws", 10, exterior_suite},
      {8, "sheaf axioms on all topologies with at most 4 points", 30, sheaf_axiom_suite},
      {9, "Sp and eigenvector presheaf completeness", 10, completeness_suite},
      {10, "eigenvalue reciprocity for planted spectra", 5, reciprocity_suite},
      {11, "CLI golden files and exit codes", 5, cli_suite},
  };
  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = criterion.run();
    } catch (const std::exception& e) {
      result.fail(std::string("exception: ") + e.what());
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (elapsed.count() >= criterion.budget_seconds) {
      result.fail("time budget exceeded (" + std::to_string(elapsed.count()) + " s >= " +
                  std::to_string(criterion.budget_seconds) + " s)");
    }
    std::cout << (result.ok ? "PASS" : "FAIL") << " criterion " << criterion.id << ": " << criterion.name << " ("
              << std::fixed << std::setprecision(3) << elapsed.count() << " s, budget " << std::setprecision(0)
              << criterion.budget_seconds << " s)";
    if (!result.ok) std::cout << " -- " << result.detail;
    std::cout << std::endl;
    failures += result.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
