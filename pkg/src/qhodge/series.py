"""Truncated multivariate power series over exact rationals.

A :class:`QSeries` stores the coefficients of monomials ``q^alpha`` with
total degree ``|alpha|`` at most a truncation order.  All coefficients are
``fractions.Fraction``; there is no floating point anywhere, so equality of
series is literal equality of coefficient tables.

Conventions (the "unit normalization" used throughout the package):

* the disk coordinates are ``q_j = exp(z_j)``, so the logarithmic derivative
  ``theta_j = q_j d/dq_j`` realizes ``d/dz_j``;
* binary operations require equal variable counts and truncate the result to
  the smaller of the two operand orders (the "effective order").
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Exponent = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce an int, Fraction or rational string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return rat_from_str(value)
    raise TypeError(f"not an exact rational: {value!r}")


def rat_from_str(text: str) -> Fraction:
    """Parse "p/q" or "n".  Floats and zero denominators are rejected."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        n, d = int(num), int(den)
        if d == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return Fraction(n, d)
    return Fraction(int(text))


def rat_to_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class QSeries:
    """A power series in ``q_1 .. q_r`` truncated at total degree ``order``."""

    __slots__ = ("num_vars", "order", "terms")

    def __init__(self, num_vars: int, order: int,
                 terms: Mapping[Exponent, Fraction] | None = None):
        if num_vars < 0 or order < 0:
            raise ValueError("num_vars and order must be nonnegative")
        self.num_vars = num_vars
        self.order = order
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for alpha, coeff in terms.items():
                if len(alpha) != num_vars:
                    raise ValueError(f"exponent {alpha} has wrong length")
                if any(a < 0 for a in alpha):
                    raise ValueError(f"negative exponent in {alpha}")
                if sum(alpha) > order:
                    continue
                c = rat(coeff)
                if c != 0:
                    clean[tuple(alpha)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int, order: int) -> "QSeries":
        return cls(num_vars, order)

    @classmethod
    def constant(cls, num_vars: int, order: int, value) -> "QSeries":
        zero_exp = (0,) * num_vars
        return cls(num_vars, order, {zero_exp: rat(value)})

    @classmethod
    def variable(cls, num_vars: int, order: int, j: int) -> "QSeries":
        """The coordinate series ``q_j`` (j is 1-based)."""
        if not 1 <= j <= num_vars:
            raise ValueError(f"variable index {j} out of range 1..{num_vars}")
        alpha = tuple(1 if i == j - 1 else 0 for i in range(num_vars))
        return cls(num_vars, order, {alpha: ONE})

    @classmethod
    def monomial(cls, num_vars: int, order: int, alpha: Iterable[int],
                 coeff=1) -> "QSeries":
        return cls(num_vars, order, {tuple(alpha): rat(coeff)})

    # -- inspection --------------------------------------------------------

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.num_vars, ZERO)

    def coefficient(self, alpha: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(alpha), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def support(self) -> set[Exponent]:
        return set(self.terms)

    # -- structural helpers -------------------------------------------------

    def truncate(self, order: int) -> "QSeries":
        """View at a lower order; never raises the stored order."""
        return QSeries(self.num_vars, min(self.order, order), self.terms)

    def _common_order(self, other: "QSeries") -> int:
        if self.num_vars != other.num_vars:
            raise ValueError(
                f"variable count mismatch: {self.num_vars} vs {other.num_vars}")
        return min(self.order, other.order)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(self.num_vars, self.order, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        order = self._common_order(other)
        terms = dict(self.terms)
        for alpha, coeff in other.terms.items():
            acc = terms.get(alpha, ZERO) + coeff
            if acc == 0:
                terms.pop(alpha, None)
            else:
                terms[alpha] = acc
        return QSeries(self.num_vars, order, terms)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.num_vars, self.order,
                       {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(self.num_vars, self.order, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            if c == 0:
                return QSeries.zero(self.num_vars, self.order)
            return QSeries(self.num_vars, self.order,
                           {a: coeff * c for a, coeff in self.terms.items()})
        if not isinstance(other, QSeries):
            return NotImplemented
        order = self._common_order(other)
        terms: dict[Exponent, Fraction] = {}
        # iterate the sparser factor on the outside
        left, right = self, other
        if len(left.terms) > len(right.terms):
            left, right = right, left
        for alpha, ca in left.terms.items():
            da = sum(alpha)
            for beta, cb in right.terms.items():
                if da + sum(beta) > order:
                    continue
                gamma = tuple(x + y for x, y in zip(alpha, beta))
                acc = terms.get(gamma, ZERO) + ca * cb
                if acc == 0:
                    terms.pop(gamma, None)
                else:
                    terms[gamma] = acc
        return QSeries(self.num_vars, order, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("series powers take nonnegative integer exponents")
        result = QSeries.constant(self.num_vars, self.order, 1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus -----------------------------------------------------------

    def theta(self, j: int) -> "QSeries":
        """The operator q_j d/dq_j (equivalently d/dz_j); j is 1-based."""
        if not 1 <= j <= self.num_vars:
            raise ValueError(f"variable index {j} out of range 1..{self.num_vars}")
        i = j - 1
        return QSeries(self.num_vars, self.order,
                       {a: c * a[i] for a, c in self.terms.items() if a[i]})

    def exp(self) -> "QSeries":
        """Truncated exponential; requires vanishing constant term."""
        if self.constant_term != 0:
            raise ValueError("series_exp requires constant term 0")
        acc = QSeries.constant(self.num_vars, self.order, 1)
        power = QSeries.constant(self.num_vars, self.order, 1)
        for k in range(1, self.order + 1):
            power = power * self * Fraction(1, k)
            if power.is_zero():
                break
            acc = acc + power
        return acc

    def log(self) -> "QSeries":
        """Truncated logarithm; requires constant term 1."""
        if self.constant_term != 1:
            raise ValueError("series_log requires constant term 1")
        u = self - 1
        acc = QSeries.zero(self.num_vars, self.order)
        power = QSeries.constant(self.num_vars, self.order, 1)
        for k in range(1, self.order + 1):
            power = power * u
            if power.is_zero():
                break
            acc = acc + power * Fraction((-1) ** (k + 1), k)
        return acc

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; requires nonzero constant term."""
        c0 = self.constant_term
        if c0 == 0:
            raise ValueError("series inverse requires nonzero constant term")
        u = 1 - self * (1 / c0)
        acc = QSeries.constant(self.num_vars, self.order, 1)
        power = QSeries.constant(self.num_vars, self.order, 1)
        for _ in range(self.order):
            power = power * u
            if power.is_zero():
                break
            acc = acc + power
        return acc * (1 / c0)

    def compose(self, subs: list["QSeries"]) -> "QSeries":
        """Substitute q_j -> subs[j-1]; every substitute needs constant term 0."""
        if len(subs) != self.num_vars:
            raise ValueError("need one substitute per variable")
        if not subs:
            return QSeries(0, self.order, self.terms)
        n = subs[0].num_vars
        order = self.order
        for s in subs:
            if s.num_vars != n:
                raise ValueError("substitutes must share a variable count")
            if s.constant_term != 0:
                raise ValueError("substitutes must have zero constant term")
            order = min(order, s.order)
        powers: list[dict[int, QSeries]] = [dict() for _ in subs]
        one = QSeries.constant(n, order, 1)

        def power_of(j: int, k: int) -> QSeries:
            cache = powers[j]
            if k == 0:
                return one
            if k not in cache:
                cache[k] = power_of(j, k - 1) * subs[j]
            return cache[k]

        acc = QSeries.zero(n, order)
        for alpha, coeff in self.terms.items():
            if sum(alpha) > order:
                continue
            mono = QSeries.constant(n, order, coeff)
            for j, a in enumerate(alpha):
                if a:
                    mono = mono * power_of(j, a)
            acc = acc + mono
        return acc

    # -- comparison / display ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(self.num_vars, self.order, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.num_vars == other.num_vars
                and self.order == other.order
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.num_vars, self.order,
                     tuple(sorted(self.terms.items()))))

    def equal_to_order(self, other: "QSeries", order: int | None = None) -> bool:
        """Compare coefficient tables up to a degree (min order by default)."""
        if self.num_vars != other.num_vars:
            return False
        cut = min(self.order, other.order) if order is None else order
        for alpha in set(self.terms) | set(other.terms):
            if sum(alpha) <= cut and self.coefficient(alpha) != other.coefficient(alpha):
                return False
        return True

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for alpha, coeff in self.sorted_terms():
            factors = [f"q{i + 1}" if a == 1 else f"q{i + 1}^{a}"
                       for i, a in enumerate(alpha) if a]
            body = "*".join(factors)
            cs = rat_to_str(coeff)
            parts.append(cs if not body else
                         body if cs == "1" else
                         f"-{body}" if cs == "-1" else f"{cs}*{body}")
        out = " + ".join(parts).replace("+ -", "- ")
        return out

    # -- serialization -------------------------------------------------------

    def to_payload(self) -> list[dict]:
        return [{"alpha": list(alpha), "coeff": rat_to_str(coeff)}
                for alpha, coeff in self.sorted_terms()]

    @classmethod
    def from_payload(cls, num_vars: int, order: int, payload) -> "QSeries":
        terms: dict[Exponent, Fraction] = {}
        for item in payload:
            alpha = tuple(int(a) for a in item["alpha"])
            coeff = rat_from_str(str(item["coeff"]))
            terms[alpha] = terms.get(alpha, ZERO) + coeff
        return cls(num_vars, order, terms)


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def series_exp(a: QSeries) -> QSeries:
    return a.exp()


def series_log(a: QSeries) -> QSeries:
    return a.log()


def theta_derivative(a: QSeries, j: int) -> QSeries:
    return a.theta(j)
