"""Ready-made algebras and potentials used in tests and documentation.

Two families cover most needs:

* ``hyperplane_algebra()`` is the multiplication table of powers of a
  hyperplane class h with h^5 = 0 and trace on h^4 (r = s = 1);
* ``rank_one_algebra(vectors, scales)`` builds the weight-four algebra whose
  degree-2 couplings are P^a = c_a v_a v_a^T.  Rank-one couplings satisfy
  the quadratic associativity relation for any choice of integer vectors
  v_a and nonzero rational scales c_a, which makes the family a convenient
  source of WDVV-compatible classical data; quantum parts of the shape
  psi^a = g_a(q^(v_a)) then solve the full WDVV system.
"""

from __future__ import annotations

from fractions import Fraction

from .frobenius import (FrobeniusAlgebra, GradedBasisSpec,
                        algebra_from_couplings)
from .series import QSeries, rat


def hyperplane_algebra() -> FrobeniusAlgebra:
    """Powers 1, h, h^2, h^3, h^4 of a hyperplane class, trace on h^4."""
    basis = GradedBasisSpec(1, 1)
    return algebra_from_couplings(basis, [[[Fraction(1)]]])


def rank_one_algebra(vectors, scales) -> FrobeniusAlgebra:
    """Degree-2 couplings P^a = c_a v_a v_a^T; always associative."""
    if len(vectors) != len(scales):
        raise ValueError("need one scale per vector")
    r = len(vectors[0])
    s = len(vectors)
    pa = []
    for v, c in zip(vectors, scales):
        c = rat(c)
        v = [rat(x) for x in v]
        pa.append([[c * v[j] * v[k] for k in range(r)] for j in range(r)])
    return algebra_from_couplings(GradedBasisSpec(r, s), pa)


def monomial_series(num_vars: int, order: int, vector, coeffs) -> QSeries:
    """g(u) = sum_k coeffs[k-1] u^k with u = q^vector; the divisor-type
    quantum parts that satisfy WDVV against rank-one couplings."""
    terms = {}
    for k, c in enumerate(coeffs, start=1):
        alpha = tuple(k * int(x) for x in vector)
        if sum(alpha) <= order and rat(c) != 0:
            terms[alpha] = rat(c)
    return QSeries(num_vars, order, terms)


def tensor_algebra(p_left: int, p_right: int) -> FrobeniusAlgebra:
    """Product of two hyperplane-power factors of weights 2*p_left, 2*p_right.

    Only combinations with p_left + p_right = 4 produce a weight-four
    algebra; (2, 2) gives the r = 2, s = 3 table of a product of two
    surfaces.  The degree-4 pairing of such products is indefinite for
    r >= 2, so the result is returned as raw data: a tuple
    (dimension, nilpotents, degrees, bform) suitable for the orbit-level
    constructors rather than as an adapted FrobeniusAlgebra.
    """
    if p_left + p_right != 4:
        raise ValueError("factor weights must add to 4")
    dim_l, dim_r = p_left + 1, p_right + 1
    n = dim_l * dim_r

    def index(i, j):
        return i * dim_r + j

    degrees = [0] * n
    for i in range(dim_l):
        for j in range(dim_r):
            degrees[index(i, j)] = i + j
    # multiplication by h (x) 1 and 1 (x) h'
    n1 = [[Fraction(0)] * n for _ in range(n)]
    n2 = [[Fraction(0)] * n for _ in range(n)]
    for i in range(dim_l):
        for j in range(dim_r):
            if i + 1 < dim_l:
                n1[index(i + 1, j)][index(i, j)] = Fraction(1)
            if j + 1 < dim_r:
                n2[index(i, j + 1)][index(i, j)] = Fraction(1)
    bform = [[Fraction(0)] * n for _ in range(n)]
    for i in range(dim_l):
        for j in range(dim_r):
            bform[index(i, j)][index(dim_l - 1 - i, dim_r - 1 - j)] = Fraction(1)
    return n, [n1, n2], degrees, bform
