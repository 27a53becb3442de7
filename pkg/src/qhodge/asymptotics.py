"""Reconstruction of the full period-map tail from its first graded piece.

Around a normal-crossings boundary point the period map factors as

    exp(sum_j z_j N_j) . exp(Gamma(q)) . F0,      q_j = exp(z_j),

with Gamma holomorphic, Gamma(0) = 0, valued in the grade-lowering part of
the bigraded endomorphism algebra.  Writing G = exp(Gamma), Theta =
sum_j N_j dz_j, the horizontality of the map is the single equation

    dG = [G, Theta] + G dG_{-1},        G(0) = I,

whose grade-(-l) components integrate level by level once the grade-(-1)
piece R = G_{-1} satisfies d(Theta + dR) wedge-square zero.  The solver
below performs that induction with exact coefficients and checks the master
equation residual afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .forms import ClosednessError, MatrixForm1, primitive_of_closed_form, wedge
from .frobenius import GradedBasisSpec
from .hodge import (Bigrading, NilpotentOrbitData, WEIGHT, check_max_unipotent,
                    limiting_bigrading)
from .linalg import Matrix, Subspace
from .series import QSeries
from .smatrix import SeriesMatrix
from .zq import ZQMatrix


class SolveError(ValueError):
    def __init__(self, message, level=None, witness=None):
        self.level = level
        self.witness = witness
        super().__init__(message)


class LieBigrading:
    """Grade decomposition of endomorphisms induced by a split bigrading.

    A map has grade a when it sends I^{p,p} into I^{p+a,p+a}; the grade-a
    component of an arbitrary matrix is sum_p proj_{p+a} . M . proj_p.
    """

    def __init__(self, bigrading: Bigrading):
        self.bigrading = bigrading
        self.proj = bigrading.projections()
        self.ambient = bigrading.ambient

    def _proj_series(self, num_vars, order):
        return [SeriesMatrix.from_rational(p, num_vars, order)
                for p in self.proj]

    def component(self, mat, a: int):
        """Grade-a component; accepts a rational matrix or a SeriesMatrix."""
        if isinstance(mat, SeriesMatrix):
            projs = self._proj_series(mat.num_vars, mat.order)
            acc = SeriesMatrix.zeros(mat.rows, mat.cols, mat.num_vars, mat.order)
            for p in range(WEIGHT + 1):
                if 0 <= p + a <= WEIGHT:
                    acc = acc + (projs[p + a] @ mat @ projs[p])
            return acc
        acc = linalg.zeros(self.ambient, self.ambient)
        for p in range(WEIGHT + 1):
            if 0 <= p + a <= WEIGHT:
                piece = linalg.mat_mul(self.proj[p + a],
                                       linalg.mat_mul(mat, self.proj[p]))
                acc = linalg.mat_add(acc, piece)
        return acc

    def in_grade(self, mat, a: int) -> bool:
        comp = self.component(mat, a)
        if isinstance(mat, SeriesMatrix):
            return (mat - comp).is_zero()
        return linalg.is_zero_matrix(linalg.mat_sub(mat, comp))

    def lowers_grading(self, mat) -> bool:
        """Valued in the sum of the strictly negative grades."""
        if isinstance(mat, SeriesMatrix):
            acc = SeriesMatrix.zeros(mat.rows, mat.cols, mat.num_vars, mat.order)
            for a in range(-WEIGHT, 0):
                acc = acc + self.component(mat, a)
            return (mat - acc).is_zero()
        acc = linalg.zeros(self.ambient, self.ambient)
        for a in range(-WEIGHT, 0):
            acc = linalg.mat_add(acc, self.component(mat, a))
        return linalg.is_zero_matrix(linalg.mat_sub(mat, acc))


@dataclass
class AsymptoticData:
    """An orbit together with the reconstructed (or prescribed) tail."""

    orbit: NilpotentOrbitData
    gamma: SeriesMatrix           # full Gamma(q), grade <= -1
    bigrading: Bigrading
    lie: LieBigrading
    order: int

    @property
    def rank(self) -> int:
        return self.orbit.rank

    def gamma_minus1(self) -> SeriesMatrix:
        return self.lie.component(self.gamma, -1)

    def exp_gamma(self) -> SeriesMatrix:
        return self.gamma.exp_nilpotent()

    def basis_spec(self) -> GradedBasisSpec:
        return GradedBasisSpec(self.bigrading.piece(WEIGHT - 1).dim,
                               self.bigrading.piece(WEIGHT - 2).dim)

    def is_block_aligned(self) -> bool:
        """Whether the bigrading pieces are spans of adapted coordinate blocks."""
        spec = self.basis_spec()
        if spec.dim != self.orbit.dimension:
            return False
        n = spec.dim
        start = 0
        for p in range(WEIGHT, -1, -1):
            piece = self.bigrading.piece(p)
            vectors = []
            for a in range(n):
                if spec.block(a) == WEIGHT - p:
                    vec = [Fraction(0)] * n
                    vec[a] = Fraction(1)
                    vectors.append(vec)
            if piece != Subspace.from_vectors(vectors, n):
                return False
        return True

    def c_block(self) -> SeriesMatrix:
        """The degree-4 -> degree-6 block of Gamma (r x s), in aligned bases."""
        spec = self.basis_spec()
        if not self.is_block_aligned():
            raise SolveError("bigrading is not aligned with an adapted basis")
        rows = list(spec.v6_indices())
        cols = list(spec.v4_indices())
        data = [[self.gamma.entry(i, j) for j in cols] for i in rows]
        return SeriesMatrix(len(rows), len(cols), self.gamma.num_vars,
                            self.gamma.order, data)

    def d_block(self) -> list[QSeries]:
        """The degree-4 -> degree-8 row of Gamma (length s), in aligned bases."""
        spec = self.basis_spec()
        if not self.is_block_aligned():
            raise SolveError("bigrading is not aligned with an adapted basis")
        return [self.gamma.entry(spec.m, j) for j in spec.v4_indices()]


def theta_form(orbit: NilpotentOrbitData, num_vars: int, order: int) -> MatrixForm1:
    """Theta = sum_j N_j dz_j as a constant-coefficient 1-form."""
    return MatrixForm1([SeriesMatrix.from_rational(nj, num_vars, order)
                        for nj in orbit.nilpotents])


def dx_minus1(orbit: NilpotentOrbitData, r_matrix: SeriesMatrix) -> MatrixForm1:
    comps = []
    for j in range(1, orbit.rank + 1):
        const = SeriesMatrix.from_rational(orbit.nilpotents[j - 1],
                                           r_matrix.num_vars, r_matrix.order)
        comps.append(const + r_matrix.theta(j))
    return MatrixForm1(comps)


def check_integrability(orbit: NilpotentOrbitData, r_matrix: SeriesMatrix,
                        lie: LieBigrading | None = None):
    """R must be grade -1 with R(0) = 0 and (Theta + dR)^2 = 0."""
    if lie is None:
        lie = LieBigrading(limiting_bigrading(orbit))
    if not linalg.is_zero_matrix(r_matrix.constant_term()):
        return False, {"error": "R(0) != 0"}
    if not lie.in_grade(r_matrix, -1):
        return False, {"error": "R is not purely of grade -1"}
    form = dx_minus1(orbit, r_matrix)
    square = wedge(form, form)
    if square.is_zero():
        return True, None
    return False, square.witness()


def solve_gamma(orbit: NilpotentOrbitData, r_matrix: SeriesMatrix,
                order: int | None = None) -> AsymptoticData:
    """Reconstruct the unique G = exp(Gamma) with prescribed grade -1 part.

    Integrates the graded components of the master equation level by level
    (each right side is a closed 1-form with zero constant term, integrated
    by exact monomial division) and verifies the full residual afterwards.
    """
    if order is None:
        order = r_matrix.order
    r_matrix = r_matrix.truncate(order)
    order = r_matrix.order
    structural = orbit.validate()
    if not structural.passed:
        names = ", ".join(item.name for item in structural.failures())
        raise SolveError(f"orbit data is not valid: {names}")
    bigrading = limiting_bigrading(orbit)
    lie = LieBigrading(bigrading)

    for j, nj in enumerate(orbit.nilpotents, start=1):
        if not lie.in_grade(nj, -1):
            raise SolveError(f"monodromy logarithm {j} is not a grade -1 map")

    ok, witness = check_integrability(orbit, r_matrix, lie)
    if not ok:
        raise SolveError(f"integrability fails: {witness}", witness=witness)

    num_vars = orbit.rank
    n = orbit.dimension
    nilpotents = [SeriesMatrix.from_rational(nj, num_vars, order)
                  for nj in orbit.nilpotents]
    theta_r = [r_matrix.theta(j) for j in range(1, num_vars + 1)]

    levels = {1: r_matrix}
    for level in range(2, WEIGHT + 1):
        prev = levels[level - 1]
        comps = []
        for j in range(num_vars):
            rhs = prev.commutator(nilpotents[j]) + (prev @ theta_r[j])
            comps.append(rhs)
        rhs_form = MatrixForm1(comps)
        for comp in comps:
            if not linalg.is_zero_matrix(comp.constant_term()):
                raise SolveError(
                    "right side has a nonzero constant term", level=level)
        try:
            levels[level] = primitive_of_closed_form(rhs_form)
        except ClosednessError as exc:
            raise SolveError(
                f"closedness fails while integrating level {level}: {exc}",
                level=level,
                witness={"alpha": list(exc.alpha), "j": exc.j, "k": exc.k})

    g_matrix = SeriesMatrix.identity(n, num_vars, order)
    for level in range(1, WEIGHT + 1):
        g_matrix = g_matrix + levels[level]

    # master-equation residual: theta_j G - [G, N_j] - G theta_j R = 0
    for j in range(num_vars):
        residual = g_matrix.theta(j + 1) \
            - g_matrix.commutator(nilpotents[j]) - (g_matrix @ theta_r[j])
        if not residual.is_zero():
            raise SolveError("master equation residual is nonzero",
                             witness={"direction": j + 1})

    gamma = g_matrix.log_unipotent()
    if not lie.lowers_grading(gamma):
        raise SolveError("solved tail is not grade-lowering")
    return AsymptoticData(orbit, gamma, bigrading, lie, order)


def asymptotic_data_from_gamma(orbit: NilpotentOrbitData,
                               gamma: SeriesMatrix) -> AsymptoticData:
    """Wrap prescribed full Gamma data (no solving)."""
    bigrading = limiting_bigrading(orbit)
    lie = LieBigrading(bigrading)
    if not linalg.is_zero_matrix(gamma.constant_term()):
        raise SolveError("Gamma(0) != 0")
    if not lie.lowers_grading(gamma):
        raise SolveError("Gamma is not grade-lowering")
    return AsymptoticData(orbit, gamma, bigrading, lie, gamma.order)


# ---------------------------------------------------------------------------
# The period flag and its checks


@dataclass
class PeriodFlagResult:
    pieces: list[SeriesMatrix]       # basis columns of each flag piece
    horizontality_ok: bool
    horizontality_witness: dict | None
    isotropy_ok: bool
    isotropy_witness: dict | None


def period_factor(asym: AsymptoticData) -> ZQMatrix:
    """E(z, q) = exp(sum_j z_j N_j) exp(Gamma(q)) with symbolic z entries."""
    num_vars, order = asym.rank, asym.order
    zn = ZQMatrix(asym.orbit.dimension, asym.orbit.dimension, num_vars, order)
    from .zq import ZQSeries
    for j, nj in enumerate(asym.orbit.nilpotents, start=1):
        zj = ZQSeries.z_variable(num_vars, order, j)
        term = ZQMatrix.from_rational(nj, num_vars, order)
        term = ZQMatrix(term.rows, term.cols, num_vars, order,
                        [[e * zj for e in row] for row in term.data])
        zn = zn + term
    exp_zn = zn.exp_nilpotent()
    exp_gamma = ZQMatrix.from_series_matrix(asym.exp_gamma())
    return exp_zn @ exp_gamma


def period_flag(asym: AsymptoticData, z_values=None) -> PeriodFlagResult:
    """The moving flag E . F0, with horizontality and isotropy residuals.

    Horizontality is checked in the q-variables (the z-dependence cancels
    in E^-1 dE); the flag pieces are returned with the z variables
    evaluated at ``z_values`` (zero by default).
    """
    num_vars, order = asym.rank, asym.order
    exp_gamma = asym.exp_gamma()
    exp_gamma_inv = (-asym.gamma).exp_nilpotent()
    gamma_minus1 = asym.gamma_minus1()

    horizontality_witness = None
    for j in range(1, num_vars + 1):
        nj = SeriesMatrix.from_rational(asym.orbit.nilpotents[j - 1],
                                        num_vars, order)
        lhs = (exp_gamma_inv @ nj @ exp_gamma) \
            + (exp_gamma_inv @ exp_gamma.theta(j))
        rhs = nj + gamma_minus1.theta(j)
        diff = lhs - rhs
        if not diff.is_zero():
            for row in range(diff.rows):
                for col in range(diff.cols):
                    if not diff.entry(row, col).is_zero():
                        alpha, coeff = diff.entry(row, col).sorted_terms()[0]
                        horizontality_witness = {
                            "direction": j, "row": row, "col": col,
                            "alpha": list(alpha), "value": str(coeff)}
                        break
                if horizontality_witness:
                    break
            break

    factor = period_factor(asym)
    evaluated = factor.evaluate_z(z_values if z_values is not None
                                  else [Fraction(0)] * num_vars)
    pieces = []
    for p in range(WEIGHT + 1):
        cols = asym.orbit.flag.piece(p).basis_columns()
        if cols and cols[0]:
            piece = evaluated @ SeriesMatrix.from_rational(cols, num_vars, order)
        else:
            piece = SeriesMatrix.zeros(asym.orbit.dimension, 0, num_vars, order)
        pieces.append(piece)

    q_const = SeriesMatrix.from_rational(asym.orbit.pairing, num_vars, order)
    isotropy_witness = None
    for a in range(WEIGHT + 2):
        fa = pieces[a] if a <= WEIGHT else None
        b = WEIGHT - a + 1
        if fa is None or not (0 <= b <= WEIGHT):
            continue
        fb = pieces[b]
        if fa.cols == 0 or fb.cols == 0:
            continue
        block = fa.transpose() @ q_const @ fb
        if not block.is_zero():
            isotropy_witness = {"a": a, "b": b}
            break
    return PeriodFlagResult(pieces, horizontality_witness is None,
                            horizontality_witness,
                            isotropy_witness is None, isotropy_witness)


# ---------------------------------------------------------------------------
# Coordinate changes


class CoordinateChange:
    """A simple change s'_j = s_j f_j(s) with f_j(0) = 1."""

    def __init__(self, factors: list[QSeries]):
        for f in factors:
            if f.constant_term != 1:
                raise ValueError(
                    "only simple changes (f_j(0) = 1) are supported")
            if f.num_vars != len(factors):
                raise ValueError("factor variable counts must equal r")
        self.factors = factors

    @property
    def rank(self) -> int:
        return len(self.factors)

    def is_identity(self) -> bool:
        return all(f == QSeries.constant(f.num_vars, f.order, 1)
                   for f in self.factors)

    @classmethod
    def identity(cls, rank: int, order: int) -> "CoordinateChange":
        return cls([QSeries.constant(rank, order, 1) for _ in range(rank)])

    def forward_substitution(self) -> list[QSeries]:
        """s'_j = s_j f_j(s) as series in s (valuation >= 1)."""
        out = []
        for j, f in enumerate(self.factors, start=1):
            out.append(QSeries.variable(f.num_vars, f.order, j) * f)
        return out

    def inverse_substitution(self) -> list[QSeries]:
        """s_j as a series in s', computed by fixed-point iteration.

        Each pass of sigma_j <- s'_j / f_j(sigma) gains one q-degree of
        accuracy, so ``order`` passes suffice at truncation ``order``.
        """
        r = self.rank
        order = min(f.order for f in self.factors)
        sigma = [QSeries.variable(r, order, j) for j in range(1, r + 1)]
        for _ in range(order):
            sigma = [QSeries.variable(r, order, j + 1)
                     * self.factors[j].compose(sigma).inverse()
                     for j in range(r)]
        return sigma


def change_coordinates(asym: AsymptoticData,
                       change: CoordinateChange) -> AsymptoticData:
    """Transport the tail through a simple coordinate change.

    exp(Gamma'(s')) = exp(-sum_j log f_j(s) N_j) exp(Gamma(s)) followed by
    substitution of the inverse change; the orbit (and the limiting flag)
    are unchanged because the change is simple.
    """
    if change.rank != asym.rank:
        raise ValueError("coordinate change rank mismatch")
    num_vars, order = asym.rank, asym.order
    logs = [f.truncate(order).log() for f in change.factors]
    exponent = SeriesMatrix.zeros(asym.orbit.dimension, asym.orbit.dimension,
                                  num_vars, order)
    for j, nj in enumerate(asym.orbit.nilpotents):
        exponent = exponent + SeriesMatrix.from_rational(
            nj, num_vars, order).scale(-logs[j])
    m_matrix = exponent.exp_nilpotent() @ asym.exp_gamma()
    sigma = change.inverse_substitution()
    transported = m_matrix.compose(sigma)
    gamma_prime = transported.log_unipotent()
    return AsymptoticData(asym.orbit, gamma_prime, asym.bigrading, asym.lie,
                          order)


def rho_component(asym: AsymptoticData) -> list[QSeries]:
    """Coefficients gamma_j(s) with rho(Gamma) = sum_j gamma_j N_j.

    rho restricts a grade-(-1) map to Hom(I^{1,1}, I^{0,0}); maximal
    unipotency makes the restricted N_j a basis of that space, so the
    coefficients solve a constant linear system.
    """
    ok, why = check_max_unipotent(asym.orbit)
    if not ok:
        raise SolveError(f"orbit is not maximally unipotent: {why}")
    bigr = asym.bigrading
    basis_i11 = bigr.piece(1).basis_vectors()
    bottom = bigr.piece(0).basis_vectors()[0]
    n = asym.orbit.dimension
    # express I^{0,0}-components in the chosen bottom generator
    frame = bigr.frame()
    frame_inv = linalg.inverse(frame)
    bottom_coords = linalg.mat_vec(frame_inv, bottom)
    bottom_row = next(i for i, x in enumerate(bottom_coords) if x != 0)

    def bottom_component(vec) -> Fraction:
        return linalg.mat_vec(frame_inv, vec)[bottom_row] / bottom_coords[bottom_row]

    r = asym.rank
    nu = [[bottom_component(linalg.mat_vec(nj, u)) for u in basis_i11]
          for nj in asym.orbit.nilpotents]
    gamma_m1 = asym.gamma_minus1()
    beta = []
    for u in basis_i11:
        column = [sum((gamma_m1.entry(i, c) * u[c] for c in range(n)
                       if u[c] != 0),
                      QSeries.zero(asym.rank, asym.order)) for i in range(n)]
        # express the image in the bottom generator, exactly
        coeff = QSeries.zero(asym.rank, asym.order)
        for i in range(n):
            f = frame_inv[bottom_row][i]
            if f:
                coeff = coeff + column[i] * f
        beta.append(coeff * (1 / bottom_coords[bottom_row]))
    nu_inv = linalg.inverse(nu)
    out = []
    for j in range(r):
        acc = QSeries.zero(asym.rank, asym.order)
        for k in range(r):
            if nu_inv[k][j]:
                acc = acc + beta[k] * nu_inv[k][j]
        out.append(acc)
    return out


def canonical_coordinates(asym: AsymptoticData):
    """The unique simple change making the restricted tail vanish.

    Returns (change, transported data); applying the construction twice
    yields the identity change.
    """
    gammas = rho_component(asym)
    factors = [g.exp() for g in gammas]
    change = CoordinateChange(factors)
    moved = change_coordinates(asym, change)
    residual = rho_component(moved)
    if any(not g.is_zero() for g in residual):
        raise SolveError("canonical change failed to cancel the restricted tail")
    return change, moved
