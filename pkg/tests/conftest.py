"""Shared deterministic generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qhodge.fixtures import monomial_series, rank_one_algebra
from qhodge.quantum import QuantumPotential
from qhodge.series import QSeries


def random_rational(rng: random.Random, max_num: int = 9, max_den: int = 6,
                    allow_zero: bool = True) -> Fraction:
    num = rng.randint(-max_num, max_num)
    if not allow_zero:
        while num == 0:
            num = rng.randint(-max_num, max_num)
    return Fraction(num, rng.randint(1, max_den))


def random_series(rng: random.Random, num_vars: int, order: int,
                  max_terms: int = 8, zero_constant: bool = False) -> QSeries:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        alpha = tuple(rng.randint(0, order) for _ in range(num_vars))
        if sum(alpha) > order:
            continue
        if zero_constant and sum(alpha) == 0:
            continue
        terms[alpha] = random_rational(rng)
    return QSeries(num_vars, order, terms)


def random_rank_one_data(rng: random.Random, r: int, s: int,
                         positive: bool = False):
    """Integer direction vectors and nonzero scales for coupling blocks."""
    vectors = []
    for _ in range(s):
        vec = [rng.randint(1 if positive else 0, 3) for _ in range(r)]
        if all(v == 0 for v in vec):
            vec[rng.randrange(r)] = rng.randint(1, 3)
        vectors.append(vec)
    scales = [random_rational(rng, max_num=5, max_den=3, allow_zero=False)
              for _ in range(s)]
    return vectors, scales


def random_validating_algebra(rng: random.Random, r: int | None = None,
                              s: int | None = None):
    r = r if r is not None else rng.randint(1, 3)
    s = s if s is not None else rng.randint(1, 3)
    vectors, scales = random_rank_one_data(rng, r, s)
    return rank_one_algebra(vectors, scales)


def random_unipotent_algebra(rng: random.Random, r: int = 2, s: int = 2):
    """Rank-one algebra whose boundary point is maximally unipotent
    (positive direction vectors spanning the degree-2 space)."""
    while True:
        vectors, scales = random_rank_one_data(rng, r, s, positive=True)
        if _spans(vectors, r):
            return rank_one_algebra(vectors, scales)


def random_passing_potential(rng: random.Random, r: int = 2, s: int = 2,
                             order: int = 6) -> QuantumPotential:
    """Couplings P^a = c_a v_a v_a^T with quantum parts in u = q^(v_a):
    a family that satisfies the WDVV system identically."""
    # when s >= r, insist on spanning positive vectors so the boundary
    # point stays maximally unipotent (the solver-level tests rely on it)
    while True:
        vectors, scales = random_rank_one_data(rng, r, s, positive=True)
        if s < r or _spans(vectors, r):
            break
    psi = []
    for vec in vectors:
        coeffs = [random_rational(rng, max_num=7, allow_zero=False)
                  for _ in range(rng.randint(1, 3))]
        psi.append(monomial_series(r, order, vec, coeffs))
    alg = rank_one_algebra(vectors, scales)
    return QuantumPotential.from_algebra(alg, psi, order)


def random_violating_potential(rng: random.Random, r: int = 2, s: int = 2,
                               order: int = 6) -> QuantumPotential:
    pot = random_passing_potential(rng, r, s, order)
    a = rng.randrange(s)
    alpha = tuple(rng.randint(0, 2) for _ in range(r))
    if sum(alpha) == 0:
        alpha = tuple(1 for _ in range(r))
    bump = QSeries.monomial(r, order, alpha,
                            random_rational(rng, allow_zero=False))
    psi = list(pot.psi)
    psi[a] = psi[a] + bump
    return QuantumPotential(pot.basis, pot.pa, psi, order)


def _spans(vectors, r: int) -> bool:
    from qhodge import linalg
    return linalg.rank([[Fraction(x) for x in v] for v in vectors]) == r


@pytest.fixture
def rng():
    return random.Random(20260809)
