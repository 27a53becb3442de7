"""Matrices with truncated-series entries.

A :class:`SeriesMatrix` is a dense rectangular matrix of :class:`QSeries`
sharing one variable count and one truncation order.  Constant (rational)
matrices are promoted with :meth:`SeriesMatrix.from_rational`.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .series import QSeries, rat


class SeriesMatrix:
    __slots__ = ("rows", "cols", "num_vars", "order", "data")

    def __init__(self, rows: int, cols: int, num_vars: int, order: int,
                 data=None):
        self.rows = rows
        self.cols = cols
        self.num_vars = num_vars
        self.order = order
        if data is None:
            zero = QSeries.zero(num_vars, order)
            data = [[zero for _ in range(cols)] for _ in range(rows)]
        else:
            for row in data:
                for entry in row:
                    if entry.num_vars != num_vars:
                        raise ValueError("entry variable counts disagree")
        self.data = data

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rational(cls, mat, num_vars: int, order: int) -> "SeriesMatrix":
        rows = len(mat)
        cols = len(mat[0]) if rows else 0
        data = [[QSeries.constant(num_vars, order, rat(x)) for x in row]
                for row in mat]
        return cls(rows, cols, num_vars, order, data)

    @classmethod
    def zeros(cls, rows: int, cols: int, num_vars: int, order: int):
        return cls(rows, cols, num_vars, order)

    @classmethod
    def identity(cls, n: int, num_vars: int, order: int) -> "SeriesMatrix":
        m = cls(n, n, num_vars, order)
        one = QSeries.constant(num_vars, order, 1)
        data = [[one if i == j else m.data[i][j] for j in range(n)]
                for i in range(n)]
        return cls(n, n, num_vars, order, data)

    # -- basics ---------------------------------------------------------------

    def entry(self, i: int, j: int) -> QSeries:
        return self.data[i][j]

    def set_entry(self, i: int, j: int, value: QSeries) -> None:
        self.data[i][j] = value

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.data for e in row)

    def constant_term(self):
        return [[e.constant_term for e in row] for row in self.data]

    def transpose(self) -> "SeriesMatrix":
        data = [[self.data[i][j] for i in range(self.rows)]
                for j in range(self.cols)]
        return SeriesMatrix(self.cols, self.rows, self.num_vars, self.order, data)

    def truncate(self, order: int) -> "SeriesMatrix":
        order = min(self.order, order)
        data = [[e.truncate(order) for e in row] for row in self.data]
        return SeriesMatrix(self.rows, self.cols, self.num_vars, order, data)

    def __eq__(self, other):
        return (isinstance(other, SeriesMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __repr__(self):
        return f"SeriesMatrix({self.rows}x{self.cols}, vars={self.num_vars}, order={self.order})"

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix addition")
        order = min(self.order, other.order)
        data = [[a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)]
        return SeriesMatrix(self.rows, self.cols, self.num_vars, order, data)

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return self + (-other)

    def __neg__(self) -> "SeriesMatrix":
        data = [[-e for e in row] for row in self.data]
        return SeriesMatrix(self.rows, self.cols, self.num_vars, self.order, data)

    def scale(self, c) -> "SeriesMatrix":
        if isinstance(c, QSeries):
            order = min(self.order, c.order)
            data = [[e * c for e in row] for row in self.data]
            return SeriesMatrix(self.rows, self.cols, self.num_vars, order, data)
        c = rat(c)
        data = [[e * c for e in row] for row in self.data]
        return SeriesMatrix(self.rows, self.cols, self.num_vars, self.order, data)

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        order = min(self.order, other.order)
        result = SeriesMatrix.zeros(self.rows, other.cols, self.num_vars, order)
        for i in range(self.rows):
            for k in range(self.cols):
                a = self.data[i][k]
                if a.is_zero():
                    continue
                for j in range(other.cols):
                    b = other.data[k][j]
                    if b.is_zero():
                        continue
                    result.data[i][j] = result.data[i][j] + a * b
        return result

    def commutator(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return (self @ other) - (other @ self)

    def theta(self, j: int) -> "SeriesMatrix":
        data = [[e.theta(j) for e in row] for row in self.data]
        return SeriesMatrix(self.rows, self.cols, self.num_vars, self.order, data)

    def compose(self, subs) -> "SeriesMatrix":
        data = [[e.compose(subs) for e in row] for row in self.data]
        order = min([self.order] + [s.order for s in subs])
        return SeriesMatrix(self.rows, self.cols, self.num_vars, order, data)

    def conjugate(self, p, p_inv=None) -> "SeriesMatrix":
        """p^-1 @ self @ p for a constant rational change of basis p."""
        if p_inv is None:
            p_inv = linalg.inverse(p)
        left = SeriesMatrix.from_rational(p_inv, self.num_vars, self.order)
        right = SeriesMatrix.from_rational(p, self.num_vars, self.order)
        return left @ self @ right

    # -- exponentials ---------------------------------------------------------

    def exp_nilpotent(self, max_power: int | None = None) -> "SeriesMatrix":
        """exp of a matrix whose powers vanish (checked up to the dimension)."""
        if self.rows != self.cols:
            raise ValueError("exp needs a square matrix")
        bound = self.rows if max_power is None else max_power
        acc = SeriesMatrix.identity(self.rows, self.num_vars, self.order)
        power = acc
        for k in range(1, bound + 1):
            power = power @ self
            power = power.scale(Fraction(1, k))
            if power.is_zero():
                return acc
            acc = acc + power
        if not (power @ self).is_zero():
            raise ValueError(f"matrix is not nilpotent (power {bound + 1} is nonzero)")
        return acc

    def log_unipotent(self) -> "SeriesMatrix":
        """log of I + U with U nilpotent; inverse of exp_nilpotent."""
        if self.rows != self.cols:
            raise ValueError("log needs a square matrix")
        u = self - SeriesMatrix.identity(self.rows, self.num_vars, self.order)
        acc = SeriesMatrix.zeros(self.rows, self.cols, self.num_vars, self.order)
        power = SeriesMatrix.identity(self.rows, self.num_vars, self.order)
        for k in range(1, self.rows + 1):
            power = power @ u
            if power.is_zero():
                return acc
            acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
        if not (power @ u).is_zero():
            raise ValueError("matrix is not unipotent")
        return acc


def nilpotent_exp(n_matrix, t) -> SeriesMatrix:
    """exp(t N) for a constant nilpotent N and a rational or series scalar t.

    The sum is finite because N is nilpotent; non-nilpotent input is
    rejected.  The result is a SeriesMatrix in t's variables (a constant
    order-0 matrix when t is rational).
    """
    dim = len(n_matrix)
    if dim and not linalg.is_zero_matrix(linalg.mat_pow(n_matrix, dim)):
        raise ValueError(f"matrix is not nilpotent (power {dim} is nonzero)")
    if isinstance(t, QSeries):
        num_vars, order = t.num_vars, t.order
        scalar = t
    else:
        num_vars, order = 0, 0
        scalar = QSeries.constant(0, 0, rat(t))
    n = SeriesMatrix.from_rational(n_matrix, num_vars, order)
    return n.scale(scalar).exp_nilpotent()
