#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "sheafsym/charpoly.hpp"
#include "sheafsym/cli.hpp"
#include "sheafsym/error.hpp"
#include "sheafsym/exterior.hpp"
#include "sheafsym/free_module.hpp"
#include "sheafsym/linalg.hpp"
#include "sheafsym/rational.hpp"
#include "sheafsym/site.hpp"
#include "sheafsym/symplectic.hpp"

namespace py = pybind11;
using namespace sheafsym;

namespace {

// Matrices cross the boundary as lists of rows of rational literals; the
// Python layer converts to and from fractions.Fraction.
using Rows = std::vector<std::vector<std::string>>;

QMatrix to_matrix(const Rows& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  QMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational::parse(rows[i][j]);
  }
  return m;
}

Rows from_matrix(const QMatrix& m) {
  Rows rows(m.rows(), std::vector<std::string>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j).to_string();
  }
  return rows;
}

std::vector<std::string> from_values(const std::vector<Rational>& values) {
  std::vector<std::string> out;
  for (const auto& v : values) out.push_back(v.to_string());
  return out;
}

OpenSet single_point() { return OpenSet::whole(FiniteSpace::point()); }

SectionMatrix constant_matrix(const Rows& rows) { return SectionMatrix::constant(single_point(), to_matrix(rows)); }

py::dict basis_report(const DarbouxBasis& b) {
  py::dict d;
  d["m"] = b.m;
  d["change_of_basis"] = from_matrix(b.change_of_basis.stalk(0));
  d["gram"] = from_matrix(b.gram.stalk(0));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact symplectic linear algebra over sheaves of rational functions";

  static py::exception<Error> error_type(m, "SheafsymError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(e.detail());
      exc.attr("kind") = std::string(e.name());
      exc.attr("witness") = e.witness();
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Rational>(m, "Rational")
      .def(py::init([](const std::string& s) { return Rational::parse(s); }))
      .def(py::init([](long n, long d) { return Rational(n, d); }), py::arg("numerator"), py::arg("denominator") = 1)
      .def("__str__", &Rational::to_string)
      .def("__repr__", [](const Rational& r) { return "Rational('" + r.to_string() + "')"; })
      .def("__hash__", &Rational::hash)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self / py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def("inverse", &Rational::inverse)
      .def("abs", &Rational::abs)
      .def("sqrt", &Rational::sqrt);

  m.def("determinant", [](const Rows& a) { return linalg::determinant(to_matrix(a)).to_string(); });
  m.def("adjugate", [](const Rows& a) { return from_matrix(determinant_adjugate(constant_matrix(a)).adj.stalk(0)); });
  m.def("inverse", [](const Rows& a) { return from_matrix(try_inverse_matrix(constant_matrix(a)).stalk(0)); });
  m.def("char_poly", [](const Rows& a) { return from_values(char_poly(to_matrix(a)).coefficients()); },
        "Coefficients of det(tI - M), constant term first.");
  m.def("cayley_hamilton_residue", [](const Rows& a) { return from_matrix(cayley_hamilton_check(constant_matrix(a)).stalk(0)); });
  m.def("rational_roots", [](const std::vector<std::string>& coeffs) {
    std::vector<Rational> c;
    for (const auto& s : coeffs) c.push_back(Rational::parse(s));
    return from_values(rational_roots(QPolynomial(c)));
  });
  m.def("darboux", [](const Rows& form) { return basis_report(darboux_basis(constant_matrix(form))); });
  m.def("skew_normal_form", [](const Rows& form) { return basis_report(skew_normal_form(constant_matrix(form))); });
  m.def("is_symplectic", [](const Rows& a) {
    const auto matrix = constant_matrix(a);
    if (matrix.rows() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "symplectic maps act on even rank");
    const auto j = standard_symplectic_form(single_point(), matrix.rows() / 2);
    return is_symplectic_map(matrix, j, j);
  });
  m.def("standard_form_power", [](std::size_t half_rank, std::size_t power) {
    const auto u = single_point();
    KForm omega = KForm::zero(u, 2 * half_rank, 2);
    for (std::size_t i = 0; i < half_rank; ++i) omega = omega + KForm::basis(u, 2 * half_rank, {i, i + half_rank});
    const KForm p = form_power(omega, power);
    return p.coefficient(combinations(2 * half_rank, 2 * power).front()).values().front().to_string();
  }, "Coefficient of the leading basis form in the power of the standard symplectic form.");
  m.def("topology_count", [](std::size_t n) { return enumerate_topologies(n).size(); });
  m.def("run_command", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    const int code = cli::run_command(args, out);
    return py::make_tuple(code, out.str());
  }, "Runs a CLI subcommand in-process and returns (exit_code, report).");
}
