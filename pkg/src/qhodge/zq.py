"""Mixed polynomial-in-z / series-in-q coefficients.

The multivalued covering coordinates z_j (with q_j = exp(z_j)) enter flat
frames and period-map factors polynomially, because all the matrices around
are nilpotent.  A :class:`ZQSeries` is a finite sum of z-monomials with
QSeries coefficients; d/dz_j has the closed rule

    d/dz_j (z^a f(q)) = a_j z^(a - e_j) f(q) + z^a theta_j f(q),

so no logarithms or transcendental constants ever appear.
"""

from __future__ import annotations

from .series import QSeries, rat
from . import linalg


class ZQSeries:
    __slots__ = ("num_vars", "order", "terms")

    def __init__(self, num_vars: int, order: int, terms=None):
        self.num_vars = num_vars
        self.order = order
        clean = {}
        if terms:
            for zexp, coeff in terms.items():
                if len(zexp) != num_vars:
                    raise ValueError("z-exponent length mismatch")
                if not coeff.is_zero():
                    clean[tuple(zexp)] = coeff
        self.terms = clean

    @classmethod
    def from_q(cls, series: QSeries) -> "ZQSeries":
        zero = (0,) * series.num_vars
        return cls(series.num_vars, series.order, {zero: series})

    @classmethod
    def constant(cls, num_vars: int, order: int, value) -> "ZQSeries":
        return cls.from_q(QSeries.constant(num_vars, order, rat(value)))

    @classmethod
    def z_variable(cls, num_vars: int, order: int, j: int) -> "ZQSeries":
        zexp = tuple(1 if i == j - 1 else 0 for i in range(num_vars))
        return cls(num_vars, order, {zexp: QSeries.constant(num_vars, order, 1)})

    def is_zero(self) -> bool:
        return not self.terms

    def q_part(self) -> QSeries:
        """The z-degree-zero part."""
        zero = (0,) * self.num_vars
        return self.terms.get(zero, QSeries.zero(self.num_vars, self.order))

    def is_pure_q(self) -> bool:
        zero = (0,) * self.num_vars
        return all(zexp == zero for zexp in self.terms)

    def __add__(self, other: "ZQSeries") -> "ZQSeries":
        terms = dict(self.terms)
        for zexp, coeff in other.terms.items():
            if zexp in terms:
                terms[zexp] = terms[zexp] + coeff
            else:
                terms[zexp] = coeff
        return ZQSeries(self.num_vars, min(self.order, other.order), terms)

    def __neg__(self) -> "ZQSeries":
        return ZQSeries(self.num_vars, self.order,
                        {z: -c for z, c in self.terms.items()})

    def __sub__(self, other: "ZQSeries") -> "ZQSeries":
        return self + (-other)

    def __mul__(self, other) -> "ZQSeries":
        if isinstance(other, QSeries):
            other = ZQSeries.from_q(other)
        if not isinstance(other, ZQSeries):
            other = ZQSeries.constant(self.num_vars, self.order, other)
        terms = {}
        for za, ca in self.terms.items():
            for zb, cb in other.terms.items():
                zc = tuple(x + y for x, y in zip(za, zb))
                prod = ca * cb
                if zc in terms:
                    terms[zc] = terms[zc] + prod
                else:
                    terms[zc] = prod
        return ZQSeries(self.num_vars, min(self.order, other.order), terms)

    def dz(self, j: int) -> "ZQSeries":
        """d/dz_j: formal z-derivative plus theta_j on the q-coefficients."""
        i = j - 1
        terms = {}

        def bump(zexp, coeff):
            if zexp in terms:
                terms[zexp] = terms[zexp] + coeff
            else:
                terms[zexp] = coeff

        for zexp, coeff in self.terms.items():
            if zexp[i]:
                lowered = tuple(a - 1 if k == i else a for k, a in enumerate(zexp))
                bump(lowered, coeff * rat(zexp[i]))
            bump(zexp, coeff.theta(j))
        return ZQSeries(self.num_vars, self.order, terms)

    def evaluate_z(self, values) -> QSeries:
        """Substitute rational values for the z variables."""
        values = [rat(v) for v in values]
        acc = QSeries.zero(self.num_vars, self.order)
        for zexp, coeff in self.terms.items():
            factor = rat(1)
            for v, a in zip(values, zexp):
                factor *= v ** a
            if factor != 0:
                acc = acc + coeff * factor
        return acc

    def __eq__(self, other):
        return (isinstance(other, ZQSeries)
                and self.num_vars == other.num_vars
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for zexp, coeff in sorted(self.terms.items()):
            zs = "*".join(f"z{i + 1}" if a == 1 else f"z{i + 1}^{a}"
                          for i, a in enumerate(zexp) if a)
            parts.append(f"({coeff})" if not zs else f"{zs}*({coeff})")
        return " + ".join(parts)


class ZQMatrix:
    __slots__ = ("rows", "cols", "num_vars", "order", "data")

    def __init__(self, rows, cols, num_vars, order, data=None):
        self.rows = rows
        self.cols = cols
        self.num_vars = num_vars
        self.order = order
        if data is None:
            zero = ZQSeries(num_vars, order)
            data = [[zero for _ in range(cols)] for _ in range(rows)]
        self.data = data

    @classmethod
    def from_series_matrix(cls, m) -> "ZQMatrix":
        data = [[ZQSeries.from_q(e) for e in row] for row in m.data]
        return cls(m.rows, m.cols, m.num_vars, m.order, data)

    @classmethod
    def from_rational(cls, mat, num_vars, order) -> "ZQMatrix":
        data = [[ZQSeries.constant(num_vars, order, x) for x in row]
                for row in mat]
        return cls(len(mat), len(mat[0]) if mat else 0, num_vars, order, data)

    @classmethod
    def identity(cls, n, num_vars, order) -> "ZQMatrix":
        return cls.from_rational(linalg.identity(n), num_vars, order)

    def entry(self, i, j) -> ZQSeries:
        return self.data[i][j]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.data for e in row)

    def __add__(self, other: "ZQMatrix") -> "ZQMatrix":
        data = [[a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)]
        return ZQMatrix(self.rows, self.cols, self.num_vars,
                        min(self.order, other.order), data)

    def __neg__(self) -> "ZQMatrix":
        data = [[-e for e in row] for row in self.data]
        return ZQMatrix(self.rows, self.cols, self.num_vars, self.order, data)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "ZQMatrix") -> "ZQMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        order = min(self.order, other.order)
        result = ZQMatrix(self.rows, other.cols, self.num_vars, order)
        for i in range(self.rows):
            for k in range(self.cols):
                a = self.data[i][k]
                if a.is_zero():
                    continue
                for j in range(other.cols):
                    b = other.data[k][j]
                    if not b.is_zero():
                        result.data[i][j] = result.data[i][j] + a * b
        return result

    def dz(self, j: int) -> "ZQMatrix":
        data = [[e.dz(j) for e in row] for row in self.data]
        return ZQMatrix(self.rows, self.cols, self.num_vars, self.order, data)

    def exp_nilpotent(self, max_power=None) -> "ZQMatrix":
        from fractions import Fraction
        bound = self.rows if max_power is None else max_power
        acc = ZQMatrix.identity(self.rows, self.num_vars, self.order)
        power = acc
        for k in range(1, bound + 1):
            power = power @ self
            power = ZQMatrix(self.rows, self.cols, self.num_vars, self.order,
                             [[e * Fraction(1, k) for e in row]
                              for row in power.data])
            if power.is_zero():
                return acc
            acc = acc + power
        if not (power @ self).is_zero():
            raise ValueError("matrix is not nilpotent")
        return acc

    def evaluate_z(self, values):
        from .smatrix import SeriesMatrix
        data = [[e.evaluate_z(values) for e in row] for row in self.data]
        return SeriesMatrix(self.rows, self.cols, self.num_vars, self.order, data)

    def column(self, j) -> list[ZQSeries]:
        return [self.data[i][j] for i in range(self.rows)]
