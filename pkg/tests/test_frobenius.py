import random
from fractions import Fraction

import pytest

from qhodge import linalg
from qhodge.fixtures import hyperplane_algebra, rank_one_algebra
from qhodge.frobenius import (AssociativityError, CubicPotential,
                              DegeneratePairingError, FrobeniusAlgebra,
                              GradedBasisSpec, adapted_bform,
                              algebra_from_couplings, algebra_from_potential,
                              check_classical_wdvv, classical_potential,
                              orthonormalize_gram, pa_coefficients,
                              validate_frobenius)

from conftest import random_validating_algebra


class TestBasisSpec:
    def test_degree_ladder(self):
        basis = GradedBasisSpec(2, 3)
        assert basis.m == 8 and basis.dim == 9
        assert [basis.degree(a) for a in range(9)] == [0, 2, 2, 4, 4, 4, 6, 6, 8]

    def test_block_counts(self):
        basis = GradedBasisSpec(3, 1)
        degrees = [basis.degree(a) for a in range(basis.dim)]
        assert [degrees.count(d) for d in (0, 2, 4, 6, 8)] == [1, 3, 1, 3, 1]


class TestValidation:
    def test_hyperplane_passes(self):
        report = validate_frobenius(hyperplane_algebra())
        assert report.passed

    def test_perturbed_structure_constant(self):
        alg = hyperplane_algebra()
        mult = [[vec[:] for vec in row] for row in alg.mult]
        mult[1][1][2] = Fraction(2)
        mult[1][1] = mult[1][1]
        broken = FrobeniusAlgebra(alg.basis, mult, alg.bform)
        report = validate_frobenius(broken)
        assert not report.passed
        names = {item.name for item in report.failures()}
        assert names & {"pairing_compatibility", "associativity", "commutativity"}
        witness = report.failures()[0].witness
        assert witness is not None

    def test_associativity_witness_replays(self):
        alg = hyperplane_algebra()
        mult = [[vec[:] for vec in row] for row in alg.mult]
        mult[1][1][2] = Fraction(2)
        broken = FrobeniusAlgebra(alg.basis, mult, alg.bform)
        report = validate_frobenius(broken)
        item = report.item("associativity")
        assert not item.passed
        a, b, c = item.witness["a"], item.witness["b"], item.witness["c"]
        n = broken.basis.dim
        e_a = [Fraction(1 if x == a else 0) for x in range(n)]
        e_c = [Fraction(1 if x == c else 0) for x in range(n)]
        left = broken.product(broken.mult[a][b], e_c)
        right = broken.product(e_a, broken.mult[b][c])
        assert left != right

    def test_zero_product_fails_compatibility(self):
        basis = GradedBasisSpec(1, 1)
        n = basis.dim
        zero = [Fraction(0)] * n
        mult = [[zero[:] for _ in range(n)] for _ in range(n)]
        for b in range(n):
            e_b = [Fraction(1 if c == b else 0) for c in range(n)]
            mult[0][b] = e_b
            mult[b][0] = e_b[:]
        alg = FrobeniusAlgebra(basis, mult, adapted_bform(basis))
        report = validate_frobenius(alg)
        assert not report.item("pairing_compatibility").passed

    def test_constructor_rejects_non_adapted_pairing(self):
        basis = GradedBasisSpec(1, 1)
        alg = hyperplane_algebra()
        bad = linalg.mat_scale(alg.bform, 2)
        with pytest.raises(ValueError):
            FrobeniusAlgebra(basis, alg.mult, bad)


class TestClassicalPotential:
    def test_hyperplane_cubic(self):
        pot = classical_potential(hyperplane_algebra())
        expected = {
            (2, 0, 0, 0, 1): Fraction(1, 2),
            (1, 1, 0, 1, 0): Fraction(1),
            (1, 0, 2, 0, 0): Fraction(1, 2),
            (0, 2, 1, 0, 0): Fraction(1, 2),
        }
        assert pot.monomials == expected

    def test_brute_force_expansion_matches(self, rng):
        # oracle: expand (1/6) B(T_0, gamma^3) monomial by monomial
        alg = random_validating_algebra(rng)
        pot = classical_potential(alg)
        n = alg.basis.dim
        for _ in range(40):
            point = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            gamma3 = alg.product(point, alg.product(point, point))
            unit = [Fraction(1 if c == 0 else 0) for c in range(n)]
            expected = alg.b_value(unit, gamma3) / 6
            value = sum(c * _monomial_value(e, point)
                        for e, c in pot.monomials.items())
            assert value == expected

    def test_adapted_shape_coefficients(self, rng):
        alg = random_validating_algebra(rng, r=2, s=2)
        pot = classical_potential(alg)
        basis = alg.basis
        exps_unit = [0] * basis.dim
        exps_unit[0] = 2
        exps_unit[basis.m] = 1
        assert pot.monomials[tuple(exps_unit)] == Fraction(1, 2)
        for j in basis.v2_indices():
            exps = [0] * basis.dim
            exps[0] = 1
            exps[j] = 1
            exps[basis.r + basis.s + j] = 1
            assert pot.monomials[tuple(exps)] == 1

    def test_pa_readoff(self, rng):
        alg = random_validating_algebra(rng, r=2, s=2)
        pot = classical_potential(alg)
        pa = pa_coefficients(alg)
        r = alg.basis.r
        for a in range(alg.basis.s):
            for j in range(1, r + 1):
                for k in range(1, r + 1):
                    assert pot.third_partial(j, k, r + 1 + a) == pa[a][j - 1][k - 1]

    def test_euler_identity(self, rng):
        for _ in range(5):
            pot = classical_potential(random_validating_algebra(rng))
            assert pot.euler_defect() == {}

    def test_pairing_recovered(self, rng):
        alg = random_validating_algebra(rng)
        pot = classical_potential(alg)
        n = alg.basis.dim
        recovered = [[pot.third_partial(0, a, b) for b in range(n)]
                     for a in range(n)]
        assert recovered == alg.bform


class TestAlgebraFromPotential:
    def test_roundtrip_hyperplane(self):
        alg = hyperplane_algebra()
        assert algebra_from_potential(classical_potential(alg)) == alg

    def test_roundtrip_random(self, rng):
        for _ in range(10):
            alg = random_validating_algebra(rng)
            assert algebra_from_potential(classical_potential(alg)) == alg

    def test_missing_top_term_degenerate(self):
        pot = classical_potential(hyperplane_algebra())
        monomials = dict(pot.monomials)
        del monomials[(2, 0, 0, 0, 1)]
        broken = CubicPotential(pot.basis, monomials)
        with pytest.raises(DegeneratePairingError):
            algebra_from_potential(broken)

    def test_associativity_violation_witness(self):
        # r=2, s=1 coupling of rank two violates the quadratic relation
        from qhodge.quantum import QuantumPotential
        basis = GradedBasisSpec(2, 1)
        pa = [[[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]]
        pot = QuantumPotential(basis, pa, [__import__("qhodge.series",
                               fromlist=["QSeries"]).QSeries.zero(2, 2)],
                               2).classical()
        with pytest.raises(AssociativityError) as err:
            algebra_from_potential(pot)
        assert set(err.value.witness) >= {"a", "b", "c", "g"}


class TestClassicalWdvv:
    def test_r1_always_true(self, rng):
        for _ in range(5):
            alg = random_validating_algebra(rng, r=1)
            ok, witnesses = check_classical_wdvv(classical_potential(alg))
            assert ok and not witnesses

    def test_hyperplane_true(self):
        ok, _ = check_classical_wdvv(classical_potential(hyperplane_algebra()))
        assert ok

    def test_validating_implies_wdvv(self, rng):
        for _ in range(10):
            alg = random_validating_algebra(rng)
            assert validate_frobenius(alg).passed
            ok, _ = check_classical_wdvv(classical_potential(alg))
            assert ok

    def test_rank_two_coupling_fails_with_witness(self):
        from qhodge.quantum import QuantumPotential
        from qhodge.series import QSeries
        basis = GradedBasisSpec(2, 2)
        pa = [[[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]],
              [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]]
        pot = QuantumPotential(basis, pa,
                               [QSeries.zero(2, 2), QSeries.zero(2, 2)],
                               2).classical()
        ok, witnesses = check_classical_wdvv(pot)
        assert not ok and witnesses
        w = witnesses[0]
        # witness replay: the quoted contraction really is asymmetric
        alg_h = linalg.inverse([[pot.third_partial(0, a, b)
                                 for b in range(basis.dim)]
                                for a in range(basis.dim)])
        lhs = sum(pot.third_partial(w["a"], w["b"], d) * alg_h[d][f]
                  * pot.third_partial(f, w["c"], w["g"])
                  for d in range(basis.dim) for f in range(basis.dim))
        rhs = sum(pot.third_partial(w["c"], w["b"], d) * alg_h[d][f]
                  * pot.third_partial(f, w["a"], w["g"])
                  for d in range(basis.dim) for f in range(basis.dim))
        assert lhs != rhs


class TestPaCoefficients:
    def test_hyperplane_value(self):
        assert pa_coefficients(hyperplane_algebra())[0][0][0] == 1

    def test_symmetry(self, rng):
        alg = random_validating_algebra(rng, r=3, s=2)
        for block in pa_coefficients(alg):
            for j in range(3):
                for k in range(3):
                    assert block[j][k] == block[k][j]

    def test_zero_product_zero_coupling(self):
        alg = rank_one_algebra([[1, 0], [0, 2]], [1, 1])
        pa = pa_coefficients(alg)
        # T_1 * T_2 = 0 for diagonal directions
        assert all(block[0][1] == 0 for block in pa)


class TestOrthonormalize:
    def test_identity_fixed(self):
        gram = linalg.identity(3)
        assert orthonormalize_gram(gram) == linalg.identity(3)

    def test_rational_square_case(self):
        gram = [[Fraction(4), Fraction(2)], [Fraction(2), Fraction(10)]]
        u = orthonormalize_gram(gram)
        check = linalg.mat_mul(linalg.transpose(u), linalg.mat_mul(gram, u))
        assert check == linalg.identity(2)

    def test_irrational_pivot_rejected(self):
        with pytest.raises(ValueError):
            orthonormalize_gram([[Fraction(2)]])

    def test_indefinite_rejected(self):
        with pytest.raises(ValueError):
            orthonormalize_gram([[Fraction(1), Fraction(0)],
                                 [Fraction(0), Fraction(-1)]])


def _monomial_value(exps, point):
    value = Fraction(1)
    for e, x in zip(exps, point):
        value *= x ** e
    return value
