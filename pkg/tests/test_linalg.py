import random
from fractions import Fraction

import pytest

from qhodge import linalg
from qhodge.linalg import Subspace


def F(x):
    return Fraction(x)


class TestEchelon:
    def test_rref_pivots(self):
        m = [[F(2), F(4)], [F(1), F(2)]]
        r, pivots = linalg.rref(m)
        assert pivots == [0]
        assert r[0] == [F(1), F(2)]

    def test_kernel(self):
        m = [[F(1), F(2), F(3)]]
        basis = linalg.kernel_basis(m)
        assert len(basis) == 2
        for v in basis:
            assert sum(a * b for a, b in zip(m[0], v)) == 0

    def test_solve_and_inverse(self):
        a = [[F(2), F(1)], [F(1), F(1)]]
        x = linalg.solve_linear(a, [F(3), F(2)])
        assert linalg.mat_vec(a, x) == [F(3), F(2)]
        inv = linalg.inverse(a)
        assert linalg.mat_mul(a, inv) == linalg.identity(2)
        with pytest.raises(ValueError):
            linalg.inverse([[F(1), F(2)], [F(2), F(4)]])

    def test_inconsistent_system(self):
        assert linalg.solve_linear([[F(1)], [F(1)]], [F(1), F(2)]) is None


class TestSubspace:
    def test_canonical_equality(self):
        u = Subspace.from_vectors([[F(1), F(1), F(0)], [F(0), F(2), F(0)]], 3)
        w = Subspace.from_vectors([[F(3), F(0), F(0)], [F(5), F(7), F(0)]], 3)
        assert u == w
        assert u.dim == 2

    def test_containment(self):
        u = Subspace.from_vectors([[F(1), F(0), F(0)]], 3)
        w = Subspace.from_vectors([[F(1), F(0), F(0)], [F(0), F(1), F(0)]], 3)
        assert w.contains(u)
        assert not u.contains(w)
        assert u.contains_vector([F(5), F(0), F(0)])
        assert not u.contains_vector([F(0), F(1), F(0)])

    def test_intersection_and_sum(self):
        u = Subspace.from_vectors([[F(1), F(0), F(0)], [F(0), F(1), F(0)]], 3)
        w = Subspace.from_vectors([[F(0), F(1), F(0)], [F(0), F(0), F(1)]], 3)
        meet = u.intersect(w)
        assert meet == Subspace.from_vectors([[F(0), F(1), F(0)]], 3)
        assert u.add(w) == Subspace.full(3)

    def test_random_modular_law_dims(self):
        rng = random.Random(5)
        for _ in range(20):
            vecs = [[Fraction(rng.randint(-3, 3)) for _ in range(4)]
                    for _ in range(2)]
            wecs = [[Fraction(rng.randint(-3, 3)) for _ in range(4)]
                    for _ in range(2)]
            u = Subspace.from_vectors(vecs, 4)
            w = Subspace.from_vectors(wecs, 4)
            assert u.add(w).dim == u.dim + w.dim - u.intersect(w).dim


class TestPositivity:
    def test_positive_definite(self):
        ok, witness = linalg.is_positive_definite([[F(2), F(1)], [F(1), F(2)]])
        assert ok and witness is None

    def test_indefinite_witness(self):
        ok, witness = linalg.is_positive_definite([[F(1), F(2)], [F(2), F(1)]])
        assert not ok
        assert witness[0] == 1 and witness[1] < 0

    def test_rational_sqrt(self):
        assert linalg.rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert linalg.rational_sqrt(Fraction(2)) is None
        assert linalg.rational_sqrt(Fraction(-1)) is None
