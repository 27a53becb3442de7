"""Parsing and serialization of the JSON document formats.

All numbers that can be non-integral travel as rational strings "p/q";
floats are rejected everywhere.  Parse errors carry the field path of the
offending value.  The exact schemas are documented in docs/formats.md.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .frobenius import CubicPotential, FrobeniusAlgebra, GradedBasisSpec
from .hodge import Flag, NilpotentOrbitData
from .linalg import Subspace
from .quantum import QuantumPotential
from .series import QSeries, rat_from_str, rat_to_str
from .smatrix import SeriesMatrix


class SchemaError(ValueError):
    """Malformed input document; the message names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(path, f"expected an exact rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return rat_from_str(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(path, str(exc))
    raise SchemaError(path, f"expected an exact rational, got {type(value).__name__}")


def parse_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value


def require(doc, key, path: str):
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing field")
    return doc[key]


def parse_matrix(value, path: str) -> list:
    if not isinstance(value, list) or not value:
        raise SchemaError(path, "expected a nonempty matrix (list of rows)")
    width = None
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise SchemaError(f"{path}[{i}]", "expected a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SchemaError(f"{path}[{i}]", "ragged matrix rows")
        out.append([parse_rational(x, f"{path}[{i}][{j}]")
                    for j, x in enumerate(row)])
    return out


def matrix_payload(matrix) -> list:
    return [[rat_to_str(x) for x in row] for row in matrix]


def parse_series(value, num_vars: int, order: int, path: str) -> QSeries:
    if not isinstance(value, list):
        raise SchemaError(path, "expected a list of {alpha, coeff} terms")
    terms = {}
    for i, item in enumerate(value):
        alpha = require(item, "alpha", f"{path}[{i}]")
        if (not isinstance(alpha, list)
                or any(isinstance(a, bool) or not isinstance(a, int) or a < 0
                       for a in alpha)):
            raise SchemaError(f"{path}[{i}].alpha",
                              "expected a list of nonnegative integers")
        if len(alpha) != num_vars:
            raise SchemaError(f"{path}[{i}].alpha",
                              f"expected {num_vars} exponents, got {len(alpha)}")
        coeff = parse_rational(require(item, "coeff", f"{path}[{i}]"),
                               f"{path}[{i}].coeff")
        key = tuple(alpha)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return QSeries(num_vars, order, terms)


def parse_series_matrix(doc, path: str, order_override=None) -> SeriesMatrix:
    num_vars = parse_int(require(doc, "num_vars", path), f"{path}.num_vars")
    order = parse_int(require(doc, "order", path), f"{path}.order")
    if order_override is not None:
        order = order_override
    entries = require(doc, "entries", path)
    if not isinstance(entries, list) or not entries:
        raise SchemaError(f"{path}.entries", "expected a nonempty list of rows")
    rows = len(entries)
    cols = None
    data = []
    for i, row in enumerate(entries):
        if not isinstance(row, list):
            raise SchemaError(f"{path}.entries[{i}]", "expected a list")
        if cols is None:
            cols = len(row)
        elif len(row) != cols:
            raise SchemaError(f"{path}.entries[{i}]", "ragged rows")
        data.append([parse_series(e, num_vars, order, f"{path}.entries[{i}][{j}]")
                     for j, e in enumerate(row)])
    return SeriesMatrix(rows, cols, num_vars, order, data)


def series_matrix_payload(mat: SeriesMatrix) -> dict:
    return {"num_vars": mat.num_vars, "order": mat.order,
            "entries": [[e.to_payload() for e in row] for row in mat.data]}


# ---------------------------------------------------------------------------
# Algebra documents


def parse_algebra(doc, path: str = "algebra") -> FrobeniusAlgebra:
    r = parse_int(require(doc, "r", path), f"{path}.r")
    s = parse_int(require(doc, "s", path), f"{path}.s")
    try:
        basis = GradedBasisSpec(r, s)
    except ValueError as exc:
        raise SchemaError(path, str(exc))
    n = basis.dim
    bform = parse_matrix(require(doc, "B", path), f"{path}.B")
    if len(bform) != n or len(bform[0]) != n:
        raise SchemaError(f"{path}.B", f"expected a {n}x{n} matrix")
    product = require(doc, "product", path)
    if not isinstance(product, list):
        raise SchemaError(f"{path}.product", "expected a list")
    mult = [[None] * n for _ in range(n)]
    for i, item in enumerate(product):
        a = parse_int(require(item, "a", f"{path}.product[{i}]"),
                      f"{path}.product[{i}].a")
        b = parse_int(require(item, "b", f"{path}.product[{i}]"),
                      f"{path}.product[{i}].b")
        if not (0 <= a < n and 0 <= b < n):
            raise SchemaError(f"{path}.product[{i}]",
                              f"indices must lie in 0..{n - 1}")
        coeffs = require(item, "coeffs", f"{path}.product[{i}]")
        if not isinstance(coeffs, list) or len(coeffs) != n:
            raise SchemaError(f"{path}.product[{i}].coeffs",
                              f"expected {n} coefficients")
        vec = [parse_rational(x, f"{path}.product[{i}].coeffs[{j}]")
               for j, x in enumerate(coeffs)]
        mult[a][b] = vec
        if mult[b][a] is None:
            mult[b][a] = vec[:]
    # pairs not listed multiply to zero (sparse convention, see formats.md)
    zero = [Fraction(0)] * n
    for a in range(n):
        for b in range(n):
            if mult[a][b] is None:
                mult[a][b] = zero[:]
    try:
        return FrobeniusAlgebra(basis, mult, bform)
    except ValueError as exc:
        raise SchemaError(path, str(exc))


def algebra_payload(alg: FrobeniusAlgebra) -> dict:
    n = alg.basis.dim
    product = []
    for a in range(n):
        for b in range(a, n):
            vec = alg.mult[a][b]
            if any(x != 0 for x in vec) or a == 0:
                product.append({"a": a, "b": b,
                                "coeffs": [rat_to_str(x) for x in vec]})
    return {"r": alg.basis.r, "s": alg.basis.s,
            "B": matrix_payload(alg.bform), "product": product}


# ---------------------------------------------------------------------------
# Potential documents


def parse_potential(doc, path: str = "potential",
                    default_order: int = 6) -> QuantumPotential:
    r = parse_int(require(doc, "r", path), f"{path}.r")
    s = parse_int(require(doc, "s", path), f"{path}.s")
    try:
        basis = GradedBasisSpec(r, s)
    except ValueError as exc:
        raise SchemaError(path, str(exc))
    order = doc.get("order", default_order)
    order = parse_int(order, f"{path}.order")
    if order < 1:
        raise SchemaError(f"{path}.order", "truncation order must be >= 1")
    classical = require(doc, "classical", path)
    monomials_doc = require(classical, "monomials", f"{path}.classical")
    if not isinstance(monomials_doc, list):
        raise SchemaError(f"{path}.classical.monomials", "expected a list")
    monomials = {}
    for i, item in enumerate(monomials_doc):
        exps = require(item, "exps", f"{path}.classical.monomials[{i}]")
        if (not isinstance(exps, list) or len(exps) != basis.dim
                or any(isinstance(e, bool) or not isinstance(e, int) or e < 0
                       for e in exps)):
            raise SchemaError(f"{path}.classical.monomials[{i}].exps",
                              f"expected {basis.dim} nonnegative integers")
        coeff = parse_rational(
            require(item, "coeff", f"{path}.classical.monomials[{i}]"),
            f"{path}.classical.monomials[{i}].coeff")
        key = tuple(exps)
        monomials[key] = monomials.get(key, Fraction(0)) + coeff
    try:
        cubic = CubicPotential(basis, monomials)
    except ValueError as exc:
        raise SchemaError(f"{path}.classical", str(exc))
    psi_doc = require(doc, "psi", path)
    if not isinstance(psi_doc, list) or len(psi_doc) != s:
        raise SchemaError(f"{path}.psi", f"expected {s} series")
    psi = [parse_series(entry, r, order, f"{path}.psi[{a}]")
           for a, entry in enumerate(psi_doc)]
    try:
        return QuantumPotential.from_classical(cubic, psi, order)
    except ValueError as exc:
        raise SchemaError(path, str(exc))


def potential_payload(pot: QuantumPotential) -> dict:
    return {"r": pot.basis.r, "s": pot.basis.s,
            "classical": {"monomials": pot.classical().to_payload()},
            "psi": [series.to_payload() for series in pot.psi],
            "order": pot.order}


# ---------------------------------------------------------------------------
# Orbit and asymptotic-data documents


def parse_orbit(doc, path: str = "orbit") -> NilpotentOrbitData:
    n = parse_int(require(doc, "n", path), f"{path}.n")
    n_docs = require(doc, "N", path)
    if not isinstance(n_docs, list) or not n_docs:
        raise SchemaError(f"{path}.N", "expected a nonempty list of matrices")
    nilpotents = []
    for j, mat_doc in enumerate(n_docs):
        mat = parse_matrix(mat_doc, f"{path}.N[{j}]")
        if len(mat) != n or len(mat[0]) != n:
            raise SchemaError(f"{path}.N[{j}]", f"expected {n}x{n}")
        nilpotents.append(mat)
    q_matrix = parse_matrix(require(doc, "Q", path), f"{path}.Q")
    if len(q_matrix) != n or len(q_matrix[0]) != n:
        raise SchemaError(f"{path}.Q", f"expected {n}x{n}")
    flag_doc = require(doc, "F0", path)
    if not isinstance(flag_doc, list) or len(flag_doc) not in (5, 6):
        raise SchemaError(f"{path}.F0",
                          "expected bases for F^0..F^4 (optionally F^5)")
    steps = []
    for p, level in enumerate(flag_doc):
        if not isinstance(level, list):
            raise SchemaError(f"{path}.F0[{p}]", "expected a list of vectors")
        vectors = []
        for i, vec in enumerate(level):
            if not isinstance(vec, list) or len(vec) != n:
                raise SchemaError(f"{path}.F0[{p}][{i}]",
                                  f"expected a vector of length {n}")
            vectors.append([parse_rational(x, f"{path}.F0[{p}][{i}][{c}]")
                            for c, x in enumerate(vec)])
        steps.append(Subspace.from_vectors(vectors, n))
    if len(steps) == 5:
        steps.append(Subspace.zero(n))
    try:
        flag = Flag(n, steps)
        return NilpotentOrbitData(n, nilpotents, flag, q_matrix)
    except ValueError as exc:
        raise SchemaError(path, str(exc))


def orbit_payload(orbit: NilpotentOrbitData) -> dict:
    return {"n": orbit.dimension,
            "N": [matrix_payload(mat) for mat in orbit.nilpotents],
            "F0": [[[rat_to_str(x) for x in vec]
                    for vec in orbit.flag.piece(p).basis_vectors()]
                   for p in range(5)],
            "Q": matrix_payload(orbit.pairing)}


def parse_vector(value, n: int, path: str) -> list:
    if not isinstance(value, list) or len(value) != n:
        raise SchemaError(path, f"expected a vector of length {n}")
    return [parse_rational(x, f"{path}[{i}]") for i, x in enumerate(value)]
