"""Matrix-valued logarithmic differential forms and exact integration.

In the unit normalization dq_j/q_j = dz_j, a 1-form is a tuple of matrix
coefficients on dz_1..dz_r and a 2-form stores one coefficient per ordered
pair j < k on dz_j ^ dz_k (antisymmetry is structural).  The exterior
derivative of a series matrix F is sum_j theta_j(F) dz_j, and
:func:`primitive_of_closed_form` inverts it monomial by monomial.
"""

from __future__ import annotations

from .series import QSeries
from .smatrix import SeriesMatrix


class ClosednessError(ValueError):
    """A 1-form failed the closedness test needed for integration."""

    def __init__(self, alpha, j, k, detail=""):
        self.alpha = tuple(alpha)
        self.j = j
        self.k = k
        super().__init__(
            f"form is not closed at monomial {self.alpha}: "
            f"alpha_{k}*c_{j} != alpha_{j}*c_{k}{detail}")


class MatrixForm1:
    """Sum_j A_j dz_j with SeriesMatrix coefficients A_j."""

    __slots__ = ("components",)

    def __init__(self, components: list[SeriesMatrix]):
        if not components:
            raise ValueError("a 1-form needs at least one component")
        shape = (components[0].rows, components[0].cols)
        for c in components:
            if (c.rows, c.cols) != shape:
                raise ValueError("1-form components must share a shape")
        self.components = components

    @property
    def num_dirs(self) -> int:
        return len(self.components)

    def __add__(self, other: "MatrixForm1") -> "MatrixForm1":
        return MatrixForm1([a + b for a, b in
                            zip(self.components, other.components)])

    def __neg__(self) -> "MatrixForm1":
        return MatrixForm1([-a for a in self.components])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


class MatrixForm2:
    """Sum_{j<k} B_{jk} dz_j ^ dz_k; only j < k is stored."""

    __slots__ = ("num_dirs", "components")

    def __init__(self, num_dirs: int, components: dict):
        self.num_dirs = num_dirs
        self.components = components

    def component(self, j: int, k: int) -> SeriesMatrix:
        return self.components[(j, k)]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components.values())

    def witness(self):
        """First nonzero (j, k, row, col, alpha) entry, or None."""
        for (j, k), mat in sorted(self.components.items()):
            for i in range(mat.rows):
                for c in range(mat.cols):
                    entry = mat.entry(i, c)
                    if not entry.is_zero():
                        alpha, coeff = entry.sorted_terms()[0]
                        return {"dz_pair": [j, k], "row": i, "col": c,
                                "alpha": list(alpha), "value": str(coeff)}
        return None


def wedge(x: MatrixForm1, y: MatrixForm1) -> MatrixForm2:
    """(x ^ y)_{jk} = x_j y_k - x_k y_j as matrix products, for j < k."""
    if x.num_dirs != y.num_dirs:
        raise ValueError("1-forms live over different coordinate counts")
    comps = {}
    r = x.num_dirs
    for j in range(1, r + 1):
        for k in range(j + 1, r + 1):
            a = (x.components[j - 1] @ y.components[k - 1])
            b = (x.components[k - 1] @ y.components[j - 1])
            comps[(j, k)] = a - b
    return MatrixForm2(r, comps)


def d_matrix(f: SeriesMatrix, num_dirs: int | None = None) -> MatrixForm1:
    """Exterior derivative: dF = sum_j theta_j(F) dz_j."""
    r = f.num_vars if num_dirs is None else num_dirs
    return MatrixForm1([f.theta(j) for j in range(1, r + 1)])


def primitive_scalar(components: list[QSeries]) -> QSeries:
    """The unique F with F(0) = 0 and theta_j F = components[j-1] for all j.

    Requires every component to have zero constant term and the form to be
    closed (alpha_k * c_j(alpha) = alpha_j * c_k(alpha) for every monomial).
    """
    r = len(components)
    num_vars = components[0].num_vars
    order = min(c.order for c in components)
    if num_vars != r:
        raise ValueError("component count must match the variable count")
    for j, comp in enumerate(components, start=1):
        if comp.constant_term != 0:
            raise ValueError(
                f"component {j} has nonzero constant term; no primitive exists")
    support = set()
    for comp in components:
        support |= comp.support()
    terms = {}
    for alpha in support:
        if sum(alpha) > order:
            continue
        coeffs = [c.coefficient(alpha) for c in components]
        for j in range(r):
            for k in range(j + 1, r):
                if alpha[k] * coeffs[j] != alpha[j] * coeffs[k]:
                    raise ClosednessError(alpha, j + 1, k + 1)
        j = next(i for i, a in enumerate(alpha) if a)
        terms[alpha] = coeffs[j] / alpha[j]
    return QSeries(num_vars, order, terms)


def primitive_of_closed_form(form: MatrixForm1) -> SeriesMatrix:
    """Entrywise primitive of a closed matrix 1-form, normalized to F(0)=0."""
    comps = form.components
    rows, cols = comps[0].rows, comps[0].cols
    num_vars = comps[0].num_vars
    order = min(c.order for c in comps)
    result = SeriesMatrix.zeros(rows, cols, num_vars, order)
    for i in range(rows):
        for j in range(cols):
            result.data[i][j] = primitive_scalar(
                [c.entry(i, j) for c in comps])
    return result


def curvature(components: list[SeriesMatrix]) -> MatrixForm2:
    """Curvature of d + sum_j A_j dz_j: theta_j A_k - theta_k A_j + [A_j, A_k]."""
    r = len(components)
    comps = {}
    for j in range(1, r + 1):
        for k in range(j + 1, r + 1):
            a_j, a_k = components[j - 1], components[k - 1]
            comps[(j, k)] = a_j.theta(k).__neg__() + a_k.theta(j) \
                + a_j.commutator(a_k)
    return MatrixForm2(r, comps)
