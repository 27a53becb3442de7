"""Filtrations, weight filtrations, split mixed structures and orbit checks.

Everything here is exact: subspaces are rational echelon bases, positivity
is decided by elimination pivots, and "polarized by the whole cone" is
certified on the generators, the barycenter and any extra positive samples
the caller supplies.

Weight conventions: the limiting weight filtration of a rank-r family is
W(N)[-4] (centered at 4) for N in the positive span of the monodromy
logarithms; on a split Hodge-Tate limit the bigrading pieces are
I^{p,p} = F^p intersect W_{2p}, and the degree-2p graded piece of the
corresponding algebra sits in I^{(8-2p)/2, *}: V_{8-2p} = I^{p,p}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import Matrix, Subspace
from .frobenius import (FrobeniusAlgebra, GradedBasisSpec, adapted_bform,
                        orthonormalize_gram, unit_vector)
from .series import rat, rat_to_str
from .validation import ValidationReport

WEIGHT = 4


class NotNilpotentError(ValueError):
    pass


class NotHodgeTateError(ValueError):
    pass


class OrbitStructureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Flags and filtrations


class Flag:
    """A decreasing filtration F^0 >= F^1 >= ... by rational subspaces."""

    def __init__(self, ambient: int, steps: list[Subspace]):
        self.ambient = ambient
        self.steps = steps
        for i in range(len(steps) - 1):
            if not steps[i].contains(steps[i + 1]):
                raise ValueError(f"flag is not nested at step {i} >= {i + 1}")

    def piece(self, p: int) -> Subspace:
        if p < 0:
            return Subspace.full(self.ambient)
        if p >= len(self.steps):
            return Subspace.zero(self.ambient)
        return self.steps[p]

    @property
    def length(self) -> int:
        return len(self.steps)

    def __eq__(self, other):
        return (isinstance(other, Flag) and self.ambient == other.ambient
                and self.steps == other.steps)


class IncFiltration:
    """An increasing filtration W_lo <= ... <= W_hi, exhaustive at the top."""

    def __init__(self, ambient: int, lo: int, steps: list[Subspace]):
        self.ambient = ambient
        self.lo = lo
        self.steps = steps
        for i in range(len(steps) - 1):
            if not steps[i + 1].contains(steps[i]):
                raise ValueError("filtration is not increasing")
        if steps and steps[-1].dim != ambient:
            raise ValueError("filtration is not exhaustive at the top index")

    @property
    def hi(self) -> int:
        return self.lo + len(self.steps) - 1

    def piece(self, level: int) -> Subspace:
        if level < self.lo:
            return Subspace.zero(self.ambient)
        if level > self.hi:
            return Subspace.full(self.ambient)
        return self.steps[level - self.lo]

    def shift(self, offset: int) -> "IncFiltration":
        """W[-k] with (W[-k])_j = W_{j-k} corresponds to offset = k."""
        return IncFiltration(self.ambient, self.lo + offset, self.steps)

    def equals(self, other: "IncFiltration") -> bool:
        if self.ambient != other.ambient:
            return False
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return all(self.piece(l) == other.piece(l) for l in range(lo, hi + 1))

    def __eq__(self, other):
        return isinstance(other, IncFiltration) and self.equals(other)


def nilpotency_index(n_matrix: Matrix) -> int:
    """The largest d with N^d != 0; raises if N^dim is still nonzero."""
    dim = len(n_matrix)
    power = linalg.identity(dim)
    for d in range(dim):
        power = linalg.mat_mul(power, n_matrix)
        if linalg.is_zero_matrix(power):
            return d
    raise NotNilpotentError(f"matrix power {dim} is nonzero")


def weight_filtration(n_matrix: Matrix, center: int = 0) -> IncFiltration:
    """The monodromy weight filtration of a nilpotent matrix.

    Built from kernels and images of powers,

        W_l = sum_i ker(N^(i+l+1)) ^ im(N^i),

    then checked against both characterizing properties (N W_l <= W_{l-2}
    and N^l : gr_l -> gr_{-l} an isomorphism).  ``center`` shifts the
    result, so center=4 gives the weight-4 limiting filtration.
    """
    dim = len(n_matrix)
    d = nilpotency_index(n_matrix)
    powers = [linalg.identity(dim)]
    for _ in range(d + 1):
        powers.append(linalg.mat_mul(powers[-1], n_matrix))

    def kernel_of_power(k: int) -> Subspace:
        if k <= 0:
            return Subspace.zero(dim)
        if k > d:
            return Subspace.full(dim)
        return Subspace.from_vectors(linalg.kernel_basis(powers[k]), dim)

    def image_of_power(k: int) -> Subspace:
        if k <= 0:
            return Subspace.full(dim)
        if k > d:
            return Subspace.zero(dim)
        return Subspace.from_vectors(linalg.transpose(powers[k]), dim)

    steps = []
    for level in range(-d, d + 1):
        acc = Subspace.zero(dim)
        for i in range(0, d + 1):
            piece = kernel_of_power(i + level + 1).intersect(image_of_power(i))
            acc = acc.add(piece)
        steps.append(acc)
    filt = IncFiltration(dim, -d, steps)

    for level in range(-d, d + 1):
        image = filt.piece(level).apply(n_matrix)
        if not filt.piece(level - 2).contains(image):
            raise RuntimeError("weight filtration failed N W_l <= W_{l-2}")
    for level in range(0, d + 1):
        top = filt.piece(level)
        bot_prev = filt.piece(-level - 1)
        mapped = top.apply(linalg.mat_pow(n_matrix, level)).add(bot_prev)
        dim_gr_top = top.dim - filt.piece(level - 1).dim
        dim_gr_bot = filt.piece(-level).dim - bot_prev.dim
        if dim_gr_top != dim_gr_bot or mapped.dim - bot_prev.dim != dim_gr_bot:
            raise RuntimeError("weight filtration failed the gr isomorphism check")

    return filt.shift(center) if center else filt


# ---------------------------------------------------------------------------
# Pairings


def q_from_b(bform: Matrix, degrees: list[int]) -> Matrix:
    """Q(v_a, v_b) = (-1)^p B(v_a, v_b) for v_a of degree 2p.

    ``degrees`` lists the half-degree p of each basis vector.  B must be
    graded-orthogonal (nonzero entries only between complementary blocks).
    """
    n = len(bform)
    out = linalg.zeros(n, n)
    for a in range(n):
        for b in range(n):
            if bform[a][b] == 0:
                continue
            if degrees[a] + degrees[b] != WEIGHT:
                raise ValueError(
                    f"pairing couples degrees 2*{degrees[a]} and 2*{degrees[b]}")
            out[a][b] = bform[a][b] * ((-1) ** degrees[a])
    return out


def b_from_q(q_matrix: Matrix, degrees: list[int]) -> Matrix:
    return q_from_b(q_matrix, degrees)


def is_infinitesimal_isometry(n_matrix: Matrix, q_matrix: Matrix) -> bool:
    """Q(Nu, v) + Q(u, Nv) = 0, i.e. N^T Q + Q N = 0."""
    lhs = linalg.mat_add(
        linalg.mat_mul(linalg.transpose(n_matrix), q_matrix),
        linalg.mat_mul(q_matrix, n_matrix))
    return linalg.is_zero_matrix(lhs)


# ---------------------------------------------------------------------------
# Bigradings


class Bigrading:
    """The split bigrading of a Hodge-Tate mixed structure: pieces I^{p,p}."""

    def __init__(self, ambient: int, pieces: list[Subspace]):
        self.ambient = ambient
        self.pieces = pieces  # index p = 0..WEIGHT

    def piece(self, p: int) -> Subspace:
        if 0 <= p < len(self.pieces):
            return self.pieces[p]
        return Subspace.zero(self.ambient)

    def frame(self) -> Matrix:
        """Basis matrix with columns grouped by descending p (degree order)."""
        columns = []
        for p in range(WEIGHT, -1, -1):
            columns.extend(self.pieces[p].basis_vectors())
        return linalg.transpose(columns)

    def projections(self) -> list[Matrix]:
        """Projections onto I^{p,p} along the complementary pieces."""
        frame = self.frame()
        inv = linalg.inverse(frame)
        sizes = [self.pieces[p].dim for p in range(WEIGHT, -1, -1)]
        offsets = [0]
        for size in sizes:
            offsets.append(offsets[-1] + size)
        projs = [None] * (WEIGHT + 1)
        n = self.ambient
        for slot, p in enumerate(range(WEIGHT, -1, -1)):
            sel = linalg.zeros(n, n)
            for i in range(offsets[slot], offsets[slot + 1]):
                sel[i][i] = Fraction(1)
            projs[p] = linalg.mat_mul(frame, linalg.mat_mul(sel, inv))
        return projs


def hodge_tate_bigrading(w_filt: IncFiltration, flag: Flag) -> Bigrading:
    """I^{p,p} = F^p ^ W_{2p}, demanding an actual direct-sum splitting.

    Raises NotHodgeTateError when the dimension accounting fails or when
    the rebuilt filtrations do not reproduce the inputs.
    """
    n = flag.ambient
    pieces = [flag.piece(p).intersect(w_filt.piece(2 * p))
              for p in range(WEIGHT + 1)]
    total = sum(piece.dim for piece in pieces)
    if total != n:
        raise NotHodgeTateError(
            f"bigrading pieces have total dimension {total}, ambient is {n}")
    stacked = []
    for piece in pieces:
        stacked.extend(piece.basis_vectors())
    if linalg.rank(stacked) != n:
        raise NotHodgeTateError("bigrading pieces are not independent")
    for level in range(w_filt.lo, w_filt.hi + 1):
        rebuilt = Subspace.zero(n)
        for p in range(WEIGHT + 1):
            if 2 * p <= level:
                rebuilt = rebuilt.add(pieces[p])
        if rebuilt != w_filt.piece(level):
            raise NotHodgeTateError(f"weight filtration not recovered at level {level}")
    for a in range(WEIGHT + 1):
        rebuilt = Subspace.zero(n)
        for p in range(a, WEIGHT + 1):
            rebuilt = rebuilt.add(pieces[p])
        if rebuilt != flag.piece(a):
            raise NotHodgeTateError(f"Hodge filtration not recovered at F^{a}")
    return Bigrading(n, pieces)


# ---------------------------------------------------------------------------
# Polarized mixed structures


def check_pmhs(w_filt: IncFiltration, flag: Flag, n_matrix: Matrix,
               q_matrix: Matrix, weight: int = WEIGHT) -> ValidationReport:
    """The four defining conditions of a polarized mixed structure.

    (1) N^(k+1) = 0; (2) W = W(N)[-k]; (3) Q(F^a, F^(k-a+1)) = 0;
    (4) positive definiteness of Q(. , N^l .) on each primitive piece of
    the split bigrading, decided by exact elimination pivots.
    """
    report = ValidationReport()
    n = len(n_matrix)

    power = linalg.mat_pow(n_matrix, weight + 1)
    report.record("nilpotency", linalg.is_zero_matrix(power),
                  None if linalg.is_zero_matrix(power) else
                  {"power": weight + 1})

    try:
        wn = weight_filtration(n_matrix, center=weight)
        match = w_filt.equals(wn)
        witness = None
        if not match:
            for level in range(-1, 2 * weight + 1):
                if w_filt.piece(level) != wn.piece(level):
                    witness = {"level": level,
                               "dim_given": w_filt.piece(level).dim,
                               "dim_computed": wn.piece(level).dim}
                    break
        report.record("weight_filtration", match, witness)
    except NotNilpotentError:
        report.record("weight_filtration", False, {"error": "not nilpotent"})

    witness = None
    for a in range(weight + 2):
        fa = flag.piece(a).basis_vectors()
        fb = flag.piece(weight - a + 1).basis_vectors()
        for u in fa:
            qu = linalg.mat_vec(q_matrix, u)
            for v in fb:
                val = sum((x * y for x, y in zip(qu, v)), Fraction(0))
                if val != 0:
                    witness = {"a": a, "b": weight - a + 1,
                               "value": rat_to_str(val)}
                    break
            if witness:
                break
        if witness:
            break
    report.record("isotropy", witness is None, witness)

    try:
        bigr = hodge_tate_bigrading(w_filt, flag)
    except NotHodgeTateError as exc:
        report.record("positivity", False, {"error": str(exc)})
        return report
    witness = None
    for p in range(WEIGHT + 1):
        image = bigr.piece(p).apply(n_matrix)
        if not bigr.piece(p - 1).contains(image):
            witness = {"error": f"N does not lower the bigrading at p={p}"}
            break
    if witness is None:
        for level in range(0, weight + 1):
            if (weight + level) % 2:
                continue
            p = (weight + level) // 2
            piece = bigr.piece(p)
            if piece.dim == 0:
                continue
            basis = piece.basis_vectors()
            n_power = linalg.mat_pow(n_matrix, level + 1)
            # primitive part: kernel of N^(l+1) restricted to the piece
            images = linalg.transpose([linalg.mat_vec(n_power, v) for v in basis])
            primitive = []
            for kvec in linalg.kernel_basis(images):
                primitive.append([
                    sum(basis[j][i] * kvec[j] for j in range(len(basis)))
                    for i in range(n)])
            if not primitive:
                continue
            n_l = linalg.mat_pow(n_matrix, level)
            gram = [[sum((u[i] * x for i, x in
                          enumerate(linalg.mat_vec(q_matrix,
                                                   linalg.mat_vec(n_l, v)))),
                         Fraction(0))
                     for v in primitive] for u in primitive]
            sym = all(gram[i][j] == gram[j][i]
                      for i in range(len(gram)) for j in range(len(gram)))
            if not sym:
                witness = {"level": level, "error": "induced form not symmetric"}
                break
            ok, pivot_witness = linalg.is_positive_definite(gram)
            if not ok:
                witness = {"level": level, "pivot_index": pivot_witness[0],
                           "pivot": rat_to_str(pivot_witness[1])}
                break
    report.record("positivity", witness is None, witness)
    return report


# ---------------------------------------------------------------------------
# Nilpotent orbit data


@dataclass
class NilpotentOrbitData:
    """Commuting nilpotents, a limiting flag and a pairing (weight 4)."""

    dimension: int
    nilpotents: list
    flag: Flag
    pairing: Matrix

    def __post_init__(self):
        n = self.dimension
        for mat in self.nilpotents:
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError("nilpotent matrix has the wrong shape")
        if self.flag.ambient != n or len(self.pairing) != n:
            raise ValueError("flag or pairing dimension mismatch")

    @property
    def rank(self) -> int:
        return len(self.nilpotents)

    def barycenter(self) -> Matrix:
        acc = linalg.zeros(self.dimension, self.dimension)
        for mat in self.nilpotents:
            acc = linalg.mat_add(acc, mat)
        return acc

    def combination(self, lam) -> Matrix:
        acc = linalg.zeros(self.dimension, self.dimension)
        for coeff, mat in zip(lam, self.nilpotents):
            acc = linalg.mat_add(acc, linalg.mat_scale(mat, coeff))
        return acc

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        witness = None
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                comm = linalg.mat_sub(
                    linalg.mat_mul(self.nilpotents[i], self.nilpotents[j]),
                    linalg.mat_mul(self.nilpotents[j], self.nilpotents[i]))
                if not linalg.is_zero_matrix(comm):
                    witness = {"i": i + 1, "j": j + 1}
                    break
            if witness:
                break
        report.record("commuting", witness is None, witness)

        witness = None
        for j, mat in enumerate(self.nilpotents, start=1):
            if not linalg.is_zero_matrix(linalg.mat_pow(mat, WEIGHT + 1)):
                witness = {"j": j}
                break
        report.record("nilpotency", witness is None, witness)

        sym = all(self.pairing[a][b] == self.pairing[b][a]
                  for a in range(self.dimension) for b in range(self.dimension))
        report.record("pairing_symmetric", sym)
        nondeg = linalg.rank(self.pairing) == self.dimension
        report.record("pairing_nondegenerate", nondeg)

        witness = None
        for j, mat in enumerate(self.nilpotents, start=1):
            if not is_infinitesimal_isometry(mat, self.pairing):
                witness = {"j": j}
                break
        report.record("pairing_skew", witness is None, witness)
        return report


def cone_independence(orbit: NilpotentOrbitData, samples=()) -> tuple:
    """Whether the weight filtration is constant over the sampled cone.

    Compares every generator direction and every supplied positive sample
    against the barycenter.  Sample entries must be positive rationals.
    """
    for lam in samples:
        if len(lam) != orbit.rank or any(rat(x) <= 0 for x in lam):
            raise ValueError("cone samples must be positive and of length r")
    reference = weight_filtration(orbit.barycenter())
    for j, mat in enumerate(orbit.nilpotents, start=1):
        if not weight_filtration(mat).equals(reference):
            return False, {"generator": j}
    for idx, lam in enumerate(samples):
        if not weight_filtration(orbit.combination(lam)).equals(reference):
            return False, {"sample_index": idx,
                           "sample": [rat_to_str(rat(x)) for x in lam]}
    return True, None


def limiting_filtration(orbit: NilpotentOrbitData) -> IncFiltration:
    return weight_filtration(orbit.barycenter(), center=WEIGHT)


def limiting_bigrading(orbit: NilpotentOrbitData) -> Bigrading:
    return hodge_tate_bigrading(limiting_filtration(orbit), orbit.flag)


def random_cone_samples(rank: int, count: int, seed: int) -> list:
    """Deterministic positive rational sample points in the open cone."""
    rng = random.Random(seed)
    samples = []
    for _ in range(count):
        samples.append([Fraction(rng.randint(1, 12), rng.randint(1, 12))
                        for _ in range(rank)])
    return samples


def check_nilpotent_orbit(orbit: NilpotentOrbitData, samples=None,
                          sample_count: int = 2, seed: int = 0):
    """Certify the orbit property: cone independence plus polarization.

    The polarization conditions are verified for every generator, for the
    barycenter and for each sampled interior point, always against the
    limiting weight filtration of the cone.
    """
    report = ValidationReport()
    structural = orbit.validate()
    for item in structural.items:
        report.items.append(item)
    if not structural.passed:
        return False, report

    if samples is None:
        samples = random_cone_samples(orbit.rank, sample_count, seed)
    try:
        independent, witness = cone_independence(orbit, samples)
    except NotNilpotentError as exc:
        report.record("cone_independence", False, {"error": str(exc)})
        return False, report
    report.record("cone_independence", independent, witness)
    if not independent:
        return False, report

    w_limit = limiting_filtration(orbit)
    candidates = [(f"generator_{j}", mat)
                  for j, mat in enumerate(orbit.nilpotents, start=1)]
    candidates.append(("barycenter", orbit.barycenter()))
    for idx, lam in enumerate(samples):
        candidates.append((f"sample_{idx}", orbit.combination(lam)))
    for label, mat in candidates:
        sub = check_pmhs(w_limit, orbit.flag, mat, orbit.pairing)
        failing = [item.name for item in sub.failures()]
        report.record(f"pmhs_{label}", sub.passed,
                      None if sub.passed else
                      {"conditions": failing,
                       "details": [item.witness for item in sub.failures()]})
    return report.passed, report


def check_max_unipotent(orbit: NilpotentOrbitData):
    """Maximal unipotency of the boundary point.

    dim I^{4,4} = 1, dim I^{3,3} = r, and the N_j images of I^{4,4} span
    I^{3,3}; the split bigrading takes care of the vanishing conditions.
    """
    try:
        bigr = limiting_bigrading(orbit)
    except (NotHodgeTateError, NotNilpotentError) as exc:
        return False, {"error": str(exc)}
    top = bigr.piece(WEIGHT)
    if top.dim != 1:
        return False, {"error": f"dim I^(4,4) = {top.dim}, expected 1"}
    next_piece = bigr.piece(WEIGHT - 1)
    if next_piece.dim != orbit.rank:
        return False, {"error": f"dim I^(3,3) = {next_piece.dim}, expected r = {orbit.rank}"}
    generator = top.basis_vectors()[0]
    images = [linalg.mat_vec(mat, generator) for mat in orbit.nilpotents]
    span = Subspace.from_vectors(images, orbit.dimension)
    if span != next_piece:
        return False, {"error": "N_j images of I^(4,4) do not span I^(3,3)",
                       "span_dim": span.dim}
    return True, None


# ---------------------------------------------------------------------------
# Orbits from algebras and back


def orbit_from_algebra(alg: FrobeniusAlgebra) -> NilpotentOrbitData:
    """The orbit attached to an algebra: N_j = L_{T_j}, the grading flag,
    and the sign-twisted pairing."""
    basis = alg.basis
    n = basis.dim
    nilpotents = [alg.mult_matrix(j) for j in basis.v2_indices()]
    pairing = q_from_b(alg.bform, basis.degrees())
    return NilpotentOrbitData(n, nilpotents, grading_flag(basis), pairing)


def grading_flag(basis: GradedBasisSpec) -> Flag:
    """F^p = span of the basis vectors of degree at most 8 - 2p."""
    n = basis.dim
    steps = []
    for p in range(WEIGHT + 2):
        vectors = [unit_vector(n, a) for a in range(n)
                   if basis.degree(a) <= 8 - 2 * p]
        steps.append(Subspace.from_vectors(vectors, n))
    return Flag(n, steps)


def grading_weight_filtration(basis: GradedBasisSpec) -> IncFiltration:
    """W_l = span of the basis vectors of degree at least 8 - l (center 4)."""
    n = basis.dim
    steps = []
    for level in range(0, 2 * WEIGHT + 1):
        vectors = [unit_vector(n, a) for a in range(n)
                   if basis.degree(a) >= 8 - level]
        steps.append(Subspace.from_vectors(vectors, n))
    return IncFiltration(n, 0, steps)


def polarizes(alg: FrobeniusAlgebra, w) -> ValidationReport:
    """Whether multiplication by the degree-2 vector w polarizes the algebra's
    split structure."""
    orbit = orbit_from_algebra(alg)
    n_matrix = alg.mult_operator(list(w))
    return check_pmhs(grading_weight_filtration(alg.basis), orbit.flag,
                      n_matrix, orbit.pairing)


def product_from_orbit(orbit: NilpotentOrbitData, e0):
    """Rebuild the graded algebra from a maximally unipotent split orbit.

    The product is pinned down by two rules: N_j(e0) * v = N_j(v), and
    u * v = B(u, v) e0* on the middle piece, where Q(e0, e0*) = 1.  The
    returned pair is (algebra, frame) with the frame columns expressing the
    adapted basis in the ambient coordinates.
    """
    ok, why = check_max_unipotent(orbit)
    if not ok:
        raise OrbitStructureError(f"orbit is not maximally unipotent: {why}")
    bigr = limiting_bigrading(orbit)
    n = orbit.dimension
    e0 = [rat(x) for x in e0]
    if all(x == 0 for x in e0) or not bigr.piece(WEIGHT).contains_vector(e0):
        raise OrbitStructureError("e0 must be a nonzero vector in I^(4,4)")

    r = bigr.piece(3).dim
    s = bigr.piece(2).dim
    basis_spec = GradedBasisSpec(r, s)

    # degree-2 frame: T_j = N_j(e0)
    t2 = [linalg.mat_vec(mat, e0) for mat in orbit.nilpotents]

    # e0*: the unique vector of I^(0,0) with Q(e0, e0*) = 1
    bottom = bigr.piece(0).basis_vectors()[0]
    pairing_value = sum((x * y for x, y in
                         zip(linalg.mat_vec(orbit.pairing, e0), bottom)),
                        Fraction(0))
    if pairing_value == 0:
        raise OrbitStructureError("Q(e0, I^(0,0)) vanishes; no dual unit exists")
    e0_star = [x / pairing_value for x in bottom]

    # middle block: orthonormalize B = Q on I^(2,2)
    mid_basis = bigr.piece(2).basis_vectors()
    gram = [[sum((x * y for x, y in zip(linalg.mat_vec(orbit.pairing, u), v)),
                 Fraction(0)) for v in mid_basis] for u in mid_basis]
    try:
        u_change = orthonormalize_gram(gram)
    except ValueError as exc:
        raise OrbitStructureError(
            f"degree-4 block cannot be orthonormalized over the rationals: {exc}")
    t4 = [[sum(mid_basis[i][c] * u_change[i][a] for i in range(s))
           for c in range(n)] for a in range(s)]

    # degree-6 frame: B-duals of the T_j inside I^(1,1); B = -Q there
    deg6_basis = bigr.piece(1).basis_vectors()
    pair_matrix = [[-sum((x * y for x, y in
                          zip(linalg.mat_vec(orbit.pairing, t2[j]), u)),
                         Fraction(0)) for u in deg6_basis]
                   for j in range(r)]
    coeffs = linalg.inverse(pair_matrix)
    t6 = [[sum(deg6_basis[k][c] * coeffs[k][l] for k in range(r))
           for c in range(n)] for l in range(r)]

    frame_rows = [e0] + t2 + t4 + t6 + [e0_star]
    frame = linalg.transpose(frame_rows)
    frame_inv = linalg.inverse(frame)

    def to_frame(vec):
        return linalg.mat_vec(frame_inv, vec)

    def q_value(u, v):
        return sum((x * y for x, y in zip(linalg.mat_vec(orbit.pairing, u), v)),
                   Fraction(0))

    dim = basis_spec.dim
    mult = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    frame_vectors = frame_rows

    def set_product(a, b, vec_ambient):
        coords = to_frame(vec_ambient)
        mult[a][b] = coords
        mult[b][a] = coords[:]

    for b in range(dim):
        set_product(0, b, frame_vectors[b])
    for j in range(1, r + 1):
        nj = orbit.nilpotents[j - 1]
        for b in range(1, dim):
            set_product(j, b, linalg.mat_vec(nj, frame_vectors[b]))
    for a in range(r + 1, r + s + 1):
        for b in range(a, r + s + 1):
            value = q_value(frame_vectors[a], frame_vectors[b])
            set_product(a, b, [x * value for x in e0_star])
        for b in range(r + s + 1, dim):
            set_product(a, b, [Fraction(0)] * n)
    for a in range(r + s + 1, dim):
        for b in range(a, dim):
            set_product(a, b, [Fraction(0)] * n)

    algebra = FrobeniusAlgebra(basis_spec, mult, adapted_bform(basis_spec))
    return algebra, frame
