"""Exact symplectic linear algebra over sheaves of rational-valued functions.

Matrices are lists of rows whose entries may be ``int``, ``str`` literals
such as ``"3/4"``, or :class:`fractions.Fraction`; results come back as
``Fraction``.
"""

import json
from fractions import Fraction

from . import _core
from ._core import Rational, SheafsymError

__all__ = [
    "Rational",
    "SheafsymError",
    "adjugate",
    "cayley_hamilton_residue",
    "char_poly",
    "darboux",
    "determinant",
    "inverse",
    "is_symplectic",
    "rational_roots",
    "run",
    "skew_normal_form",
    "standard_form_power",
    "topology_count",
]


def _rows(matrix):
    return [[str(x) for x in row] for row in matrix]


def _fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def determinant(matrix):
    return Fraction(_core.determinant(_rows(matrix)))


def adjugate(matrix):
    return _fractions(_core.adjugate(_rows(matrix)))


def inverse(matrix):
    return _fractions(_core.inverse(_rows(matrix)))


def char_poly(matrix):
    """Coefficients of det(tI - M), constant term first."""
    return [Fraction(c) for c in _core.char_poly(_rows(matrix))]


def cayley_hamilton_residue(matrix):
    return _fractions(_core.cayley_hamilton_residue(_rows(matrix)))


def rational_roots(coeffs):
    """Distinct rational roots, ascending, of the polynomial with these coefficients (constant first)."""
    return [Fraction(r) for r in _core.rational_roots([str(c) for c in coeffs])]


def _basis(report):
    return {
        "m": report["m"],
        "change_of_basis": _fractions(report["change_of_basis"]),
        "gram": _fractions(report["gram"]),
    }


def darboux(form):
    return _basis(_core.darboux(_rows(form)))


def skew_normal_form(form):
    return _basis(_core.skew_normal_form(_rows(form)))


def is_symplectic(matrix):
    return _core.is_symplectic(_rows(matrix))


def standard_form_power(half_rank, power):
    return Fraction(_core.standard_form_power(half_rank, power))


def topology_count(n):
    return _core.topology_count(n)


def run(command, document, *options):
    """Runs a CLI subcommand on an input document; returns (exit_code, report dict)."""
    import os
    import tempfile

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as handle:
        json.dump(document, handle)
        path = handle.name
    try:
        code, out = _core.run_command([command, "--input", path, "--output", "json", *options])
    finally:
        os.unlink(path)
    return code, json.loads(out)
