"""Regenerate the sample input documents from the library fixtures.

Run from the repository root:  python3 sample_inputs/regenerate.py
"""

import json
import pathlib
from fractions import Fraction

from qhodge import asymptotics, documents, hodge, linalg, quantum
from qhodge.fixtures import hyperplane_algebra, monomial_series, rank_one_algebra
from qhodge.series import QSeries
from qhodge.smatrix import SeriesMatrix

OUT = pathlib.Path(__file__).resolve().parent
ORDER = 6


def dump(name, payload):
    (OUT / name).write_text(json.dumps(payload, indent=2) + "\n")
    print("wrote", name)


def main():
    alg = hyperplane_algebra()
    dump("hyperplane_algebra.json", documents.algebra_payload(alg))

    pot = quantum.QuantumPotential.from_algebra(
        alg, [QSeries.variable(1, ORDER, 1)], ORDER)
    dump("hyperplane_potential.json", documents.potential_payload(pot))

    alg2 = rank_one_algebra([[1, 1], [1, 2]], [1, 2])
    psi1 = monomial_series(2, ORDER, [1, 1], [1, Fraction(5), Fraction(-2)])
    psi2 = monomial_series(2, ORDER, [1, 2], [Fraction(3), Fraction(1, 2)])
    pot2 = quantum.QuantumPotential.from_algebra(alg2, [psi1, psi2], ORDER)
    dump("rank_two_potential.json", documents.potential_payload(pot2))

    psi1_bad = psi1 + QSeries.variable(2, ORDER, 1)
    pot_bad = quantum.QuantumPotential.from_algebra(alg2, [psi1_bad, psi2],
                                                    ORDER)
    dump("rank_two_potential_wdvv_fail.json",
         documents.potential_payload(pot_bad))

    # rank-one orbit with a tail whose restricted part is nonzero
    orbit = hodge.orbit_from_algebra(alg)
    n1 = orbit.nilpotents[0]
    kappa = [[Fraction(0)] * 5 for _ in range(5)]
    kappa[2][1] = Fraction(1)
    kappa[3][2] = Fraction(1)
    base = linalg.mat_add(n1, kappa)
    r_matrix = SeriesMatrix.from_rational(base, 1, ORDER).scale(
        QSeries.variable(1, ORDER, 1))
    dump("solve_gamma_input.json",
         {"orbit": documents.orbit_payload(orbit),
          "R": documents.series_matrix_payload(r_matrix), "order": ORDER})

    asym = asymptotics.solve_gamma(orbit, r_matrix, ORDER)
    dump("canonical_coords_input.json",
         {"orbit": documents.orbit_payload(orbit),
          "Gamma": documents.series_matrix_payload(asym.gamma),
          "order": ORDER})

    # a grade(-1) block whose bracket with the second direction obstructs
    orbit2 = hodge.orbit_from_algebra(alg2)
    n = orbit2.dimension
    k = [[Fraction(0)] * n for _ in range(n)]
    k[3][1] = Fraction(1)
    bad = SeriesMatrix.from_rational(k, 2, ORDER).scale(
        QSeries.variable(2, ORDER, 1))
    ok, _ = asymptotics.check_integrability(orbit2, bad)
    assert not ok, "fixture is supposed to be non-integrable"
    dump("solve_gamma_noninteg.json",
         {"orbit": documents.orbit_payload(orbit2),
          "R": documents.series_matrix_payload(bad), "order": ORDER})

    asym_pot = quantum.asymptotic_data_from_potential(pot)
    dump("recover_potential_input.json",
         {"orbit": documents.orbit_payload(asym_pot.orbit),
          "Gamma": documents.series_matrix_payload(asym_pot.gamma),
          "order": ORDER})


if __name__ == "__main__":
    main()
