"""Weight-four graded Frobenius algebras and their cubic potentials.

The graded pieces have dimensions (1, r, s, r, 1) in degrees 0, 2, 4, 6, 8.
An *adapted* basis T_0..T_m (m = 2r + s + 1) consists of the unit, a basis
of the degree-2 part, a degree-4 basis orthonormal for the pairing B, and
the B-duals of the degree-2 basis and of the unit.  The cubic form

    phi_0(z) = (1/6) B(T_0, gamma^3),   gamma = sum_a z_a T_a,

encodes the product: its third partials recover both B and the structure
constants, and associativity becomes a quadratic relation on those partials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import Matrix
from .series import rat, rat_to_str, rat_from_str
from .validation import ValidationReport


@dataclass(frozen=True)
class GradedBasisSpec:
    """Index bookkeeping for an adapted weight-four basis."""

    r: int
    s: int

    def __post_init__(self):
        if self.r < 1 or self.s < 1:
            raise ValueError("need r >= 1 and s >= 1")

    @property
    def m(self) -> int:
        return 2 * self.r + self.s + 1

    @property
    def dim(self) -> int:
        return self.m + 1

    def degree(self, a: int) -> int:
        r, s, m = self.r, self.s, self.m
        if a == 0:
            return 0
        if 1 <= a <= r:
            return 2
        if r < a <= r + s:
            return 4
        if r + s < a < m:
            return 6
        if a == m:
            return 8
        raise IndexError(f"basis index {a} out of range 0..{m}")

    def block(self, a: int) -> int:
        """Half the degree: the p with T_a in the degree-2p piece."""
        return self.degree(a) // 2

    def degrees(self) -> list[int]:
        return [self.block(a) for a in range(self.dim)]

    def v2_indices(self) -> range:
        return range(1, self.r + 1)

    def v4_indices(self) -> range:
        return range(self.r + 1, self.r + self.s + 1)

    def v6_indices(self) -> range:
        return range(self.r + self.s + 1, self.m)

    def label(self, a: int) -> str:
        return f"T{a}"


def adapted_bform(basis: GradedBasisSpec) -> Matrix:
    """The pairing matrix forced by adaptedness."""
    n = basis.dim
    b = linalg.zeros(n, n)
    b[0][basis.m] = Fraction(1)
    b[basis.m][0] = Fraction(1)
    for j in basis.v2_indices():
        dual = basis.r + basis.s + j
        b[j][dual] = Fraction(1)
        b[dual][j] = Fraction(1)
    for a in basis.v4_indices():
        b[a][a] = Fraction(1)
    return b


class FrobeniusAlgebra:
    """Structure constants and pairing of a weight-four algebra.

    ``mult[a][b]`` is the coordinate vector of T_a * T_b.  The constructor
    enforces only the adapted shape of B and dimensional consistency; the
    algebra axioms are checked by :func:`validate_frobenius`, which reports
    failures with witnesses instead of raising.
    """

    def __init__(self, basis: GradedBasisSpec, mult, bform: Matrix):
        n = basis.dim
        if len(mult) != n or any(len(row) != n for row in mult):
            raise ValueError("multiplication table has the wrong shape")
        for row in mult:
            for vec in row:
                if len(vec) != n:
                    raise ValueError("product vectors have the wrong length")
        if len(bform) != n or any(len(row) != n for row in bform):
            raise ValueError("pairing matrix has the wrong shape")
        if bform != adapted_bform(basis):
            raise ValueError(
                "pairing is not in the adapted normal form; orthonormalize "
                "the degree-4 block and use B-dual degree-6/8 vectors")
        self.basis = basis
        self.mult = [[[rat(x) for x in vec] for vec in row] for row in mult]
        self.bform = bform
        # the adapted pairing has one nonzero entry per row
        self._b_pairs = [(a, b, bform[a][b]) for a in range(n)
                         for b in range(n) if bform[a][b] != 0]

    # -- product helpers ------------------------------------------------------

    def product_basis(self, a: int, b: int) -> list[Fraction]:
        return self.mult[a][b]

    def product(self, u, v) -> list[Fraction]:
        n = self.basis.dim
        out = [Fraction(0)] * n
        for a in range(n):
            if u[a] == 0:
                continue
            for b in range(n):
                if v[b] == 0:
                    continue
                f = u[a] * v[b]
                vec = self.mult[a][b]
                for c in range(n):
                    if vec[c]:
                        out[c] += f * vec[c]
        return out

    def mult_matrix(self, a: int) -> Matrix:
        """Matrix of multiplication by T_a (columns are T_a * T_b)."""
        n = self.basis.dim
        return [[self.mult[a][b][c] for b in range(n)] for c in range(n)]

    def mult_operator(self, w) -> Matrix:
        n = self.basis.dim
        out = linalg.zeros(n, n)
        for a in range(n):
            if w[a]:
                m = self.mult_matrix(a)
                for i in range(n):
                    for j in range(n):
                        if m[i][j]:
                            out[i][j] += w[a] * m[i][j]
        return out

    def b_value(self, u, v) -> Fraction:
        return sum((u[a] * val * v[b] for a, b, val in self._b_pairs
                    if u[a] and v[b]), Fraction(0))

    def __eq__(self, other):
        return (isinstance(other, FrobeniusAlgebra)
                and self.basis == other.basis
                and self.mult == other.mult
                and self.bform == other.bform)


def validate_frobenius(alg: FrobeniusAlgebra) -> ValidationReport:
    """Check the algebra axioms, one report item per invariant."""
    report = ValidationReport()
    basis = alg.basis
    n = basis.dim

    witness = None
    for a in range(n):
        for b in range(a + 1, n):
            if alg.mult[a][b] != alg.mult[b][a]:
                witness = {"a": a, "b": b}
                break
        if witness:
            break
    report.record("commutativity", witness is None, witness)

    witness = None
    for b in range(n):
        expected = [Fraction(1) if c == b else Fraction(0) for c in range(n)]
        if alg.mult[0][b] != expected:
            witness = {"b": b}
            break
    report.record("unit", witness is None, witness)

    witness = None
    for a in range(n):
        for b in range(n):
            target = basis.degree(a) + basis.degree(b)
            for c in range(n):
                if alg.mult[a][b][c] != 0 and basis.degree(c) != target:
                    witness = {"a": a, "b": b, "c": c,
                               "degree": basis.degree(c), "expected": target}
                    break
            if witness:
                break
        if witness:
            break
    report.record("grading", witness is None, witness)

    witness = None
    for a in range(n):
        for b in range(n):
            if alg.bform[a][b] != 0 and basis.degree(a) + basis.degree(b) != 8:
                witness = {"a": a, "b": b}
                break
        if witness:
            break
    report.record("pairing_graded_orthogonality", witness is None, witness)

    nondegenerate = linalg.rank(alg.bform) == n
    report.record("pairing_nondegenerate", nondegenerate,
                  None if nondegenerate else {"rank": linalg.rank(alg.bform)})

    witness = None
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = alg.b_value(alg.mult[a][b], unit_vector(n, c))
                rhs = alg.b_value(unit_vector(n, a), alg.mult[b][c])
                if lhs != rhs:
                    witness = {"a": a, "b": b, "c": c,
                               "lhs": rat_to_str(lhs), "rhs": rat_to_str(rhs)}
                    break
            if witness:
                break
        if witness:
            break
    report.record("pairing_compatibility", witness is None, witness)

    witness = None
    for a in range(n):
        for b in range(n):
            ab = alg.mult[a][b]
            ab_support = [f for f in range(n) if ab[f]]
            for c in range(n):
                bc = alg.mult[b][c]
                left = [Fraction(0)] * n
                for f in ab_support:
                    vec = alg.mult[f][c]
                    coeff = ab[f]
                    for d in range(n):
                        if vec[d]:
                            left[d] += coeff * vec[d]
                right = [Fraction(0)] * n
                for f in range(n):
                    if bc[f]:
                        vec = alg.mult[a][f]
                        coeff = bc[f]
                        for d in range(n):
                            if vec[d]:
                                right[d] += coeff * vec[d]
                if left != right:
                    witness = {"a": a, "b": b, "c": c}
                    break
            if witness:
                break
        if witness:
            break
    report.record("associativity", witness is None, witness)

    return report


def unit_vector(n: int, index: int) -> list[Fraction]:
    return [Fraction(1) if i == index else Fraction(0) for i in range(n)]


# ---------------------------------------------------------------------------
# Cubic potentials


class CubicPotential:
    """A cubic form in z_0..z_m, stored as a sparse exponent map."""

    def __init__(self, basis: GradedBasisSpec, monomials):
        self.basis = basis
        degs = [basis.degree(a) for a in range(basis.dim)]
        clean = {}
        for exps, coeff in monomials.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != basis.dim:
                raise ValueError("monomial exponent length mismatch")
            if sum(exps) != 3:
                raise ValueError(f"monomial {exps} is not cubic")
            c = rat(coeff)
            if c == 0:
                continue
            if sum(e * d for e, d in zip(exps, degs)) != 8:
                raise ValueError(
                    f"monomial {exps} has weighted degree != 8")
            clean[exps] = c
        self.monomials = clean

    def weighted_degree_ok(self) -> bool:
        """Quasi-homogeneity: every monomial has weighted degree 8."""
        degs = [self.basis.degree(a) for a in range(self.basis.dim)]
        return all(sum(e * d for e, d in zip(exps, degs)) == 8
                   for exps in self.monomials)

    def third_partial(self, a: int, b: int, c: int) -> Fraction:
        """d^3 phi / dz_a dz_b dz_c (a constant, since phi is cubic)."""
        total = Fraction(0)
        for exps, coeff in self.monomials.items():
            e = list(exps)
            factor = coeff
            ok = True
            for idx in (a, b, c):
                if e[idx] == 0:
                    ok = False
                    break
                factor *= e[idx]
                e[idx] -= 1
            if ok:
                total += factor
        return total

    def partial(self, a: int) -> dict:
        """Exponent map of d phi / dz_a (a quadratic)."""
        out = {}
        for exps, coeff in self.monomials.items():
            if exps[a] == 0:
                continue
            e = list(exps)
            factor = coeff * e[a]
            e[a] -= 1
            key = tuple(e)
            out[key] = out.get(key, Fraction(0)) + factor
        return {k: v for k, v in out.items() if v != 0}

    def euler_defect(self):
        """sum_a deg(z_a) z_a dphi/dz_a - 8 phi, as an exponent map."""
        out = {exps: -8 * coeff for exps, coeff in self.monomials.items()}
        for a in range(self.basis.dim):
            d = self.basis.degree(a)
            if d == 0:
                continue
            for exps, coeff in self.monomials.items():
                if exps[a]:
                    out[exps] = out.get(exps, Fraction(0)) + d * exps[a] * coeff
        return {k: v for k, v in out.items() if v != 0}

    def pa_matrices(self) -> list[Matrix]:
        """Extract the degree-2 coupling blocks P^a_{jk} = d^3 phi/dz_j dz_k dz_{r+a}."""
        r, s = self.basis.r, self.basis.s
        out = []
        for a in range(1, s + 1):
            out.append([[self.third_partial(j, k, r + a)
                         for k in range(1, r + 1)] for j in range(1, r + 1)])
        return out

    def __eq__(self, other):
        return (isinstance(other, CubicPotential)
                and self.basis == other.basis
                and self.monomials == other.monomials)

    def to_payload(self) -> list[dict]:
        items = sorted(self.monomials.items())
        return [{"exps": list(exps), "coeff": rat_to_str(coeff)}
                for exps, coeff in items]

    @classmethod
    def from_payload(cls, basis: GradedBasisSpec, payload) -> "CubicPotential":
        monomials = {}
        for item in payload:
            exps = tuple(int(e) for e in item["exps"])
            coeff = rat_from_str(str(item["coeff"]))
            monomials[exps] = monomials.get(exps, Fraction(0)) + coeff
        return cls(basis, monomials)


class InvalidAlgebraError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        names = ", ".join(item.name for item in report.failures())
        super().__init__(f"algebra fails validation: {names}")


class DegeneratePairingError(ValueError):
    pass


class AssociativityError(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"cubic form violates the associativity relation at {witness}")


def classical_potential(alg: FrobeniusAlgebra) -> CubicPotential:
    """phi_0 = (1/6) B(T_0, gamma^3) for a validating algebra."""
    report = validate_frobenius(alg)
    if not report.passed:
        raise InvalidAlgebraError(report)
    n = alg.basis.dim
    monomials = {}
    for a in range(n):
        for b in range(a, n):
            ab = alg.mult[a][b]
            for c in range(b, n):
                t = alg.b_value(ab, unit_vector(n, c))
                if t == 0:
                    continue
                if a == b == c:
                    coeff = t / 6
                elif a == b or b == c:
                    coeff = t / 2
                else:
                    coeff = t
                exps = [0] * n
                for idx in (a, b, c):
                    exps[idx] += 1
                monomials[tuple(exps)] = coeff
    return CubicPotential(alg.basis, monomials)


def algebra_from_potential(pot: CubicPotential) -> FrobeniusAlgebra:
    """Invert the classical-potential map.

    The pairing is read from the z_0 partials and must come out in the
    adapted normal form; the product is the B-dual contraction of the third
    partials.  The quadratic associativity relation is verified before the
    algebra is returned.
    """
    basis = pot.basis
    n = basis.dim
    if not pot.weighted_degree_ok():
        raise ValueError("potential is not quasi-homogeneous of weighted degree 8")
    bform = [[pot.third_partial(0, a, b) for b in range(n)] for a in range(n)]
    if linalg.rank(bform) != n:
        raise DegeneratePairingError(
            "third partials through z_0 give a degenerate pairing")
    ok, witnesses = _associativity_relation(pot, bform)
    if not ok:
        raise AssociativityError(witnesses[0])
    h = linalg.inverse(bform)
    mult = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            t = [pot.third_partial(a, b, c) for c in range(n)]
            vec = linalg.mat_vec(h, t)
            mult[a][b] = vec
            mult[b][a] = vec[:]
    return FrobeniusAlgebra(basis, mult, bform)


def _associativity_relation(pot: CubicPotential, bform: Matrix):
    """The quadratic relation on third partials equivalent to associativity.

    M(a,b,c,g) = sum_{d,f} phi_{abd} h_{df} phi_{fcg} must be symmetric under
    swapping a and c.
    """
    n = pot.basis.dim
    h = linalg.inverse(bform)
    t = [[[pot.third_partial(a, b, c) for c in range(n)] for b in range(n)]
         for a in range(n)]
    # ht[a][b] = h-contracted product row: sum_d h_{?d} phi_{abd}
    ht = [[linalg.mat_vec(h, t[a][b]) for b in range(n)] for a in range(n)]
    support = [[[f for f in range(n) if ht[a][b][f]] for b in range(n)]
               for a in range(n)]
    witnesses = []
    for a in range(n):
        for b in range(n):
            for c in range(a + 1, n):
                for g in range(n):
                    lhs = sum((ht[a][b][f] * t[f][c][g]
                               for f in support[a][b]), Fraction(0))
                    rhs = sum((ht[c][b][f] * t[f][a][g]
                               for f in support[c][b]), Fraction(0))
                    if lhs != rhs:
                        witnesses.append({"a": a, "b": b, "c": c, "g": g,
                                          "lhs": rat_to_str(lhs),
                                          "rhs": rat_to_str(rhs)})
                        if len(witnesses) >= 5:
                            return False, witnesses
    return not witnesses, witnesses


def check_classical_wdvv(pot: CubicPotential):
    """Associativity of the constant product, phrased on the potential.

    Returns (verdict, witnesses); requires the z_0-pairing to be invertible.
    """
    basis = pot.basis
    n = basis.dim
    bform = [[pot.third_partial(0, a, b) for b in range(n)] for a in range(n)]
    if linalg.rank(bform) != n:
        raise DegeneratePairingError("pairing extracted from the potential is degenerate")
    return _associativity_relation(pot, bform)


def pa_coefficients(alg: FrobeniusAlgebra) -> list[Matrix]:
    """P^a_{jk} = B(T_{r+a}, T_j * T_k), one symmetric r x r matrix per a."""
    basis = alg.basis
    n = basis.dim
    out = []
    for a in basis.v4_indices():
        ea = unit_vector(n, a)
        out.append([[alg.b_value(ea, alg.mult[j][k])
                     for k in basis.v2_indices()] for j in basis.v2_indices()])
    return out


def algebra_from_couplings(basis: GradedBasisSpec, pa) -> FrobeniusAlgebra:
    """The adapted algebra with prescribed P^a_{jk} = B(T_{r+a}, T_j * T_k).

    Every other product is forced by the unit, the grading and B-duality.
    The caller is responsible for the quadratic relation on the couplings
    that makes the result associative; :func:`validate_frobenius` reports a
    witness when it fails.
    """
    r, s = basis.r, basis.s
    n = basis.dim
    zero = [Fraction(0)] * n
    mult = [[zero[:] for _ in range(n)] for _ in range(n)]

    def put(a, b, vec):
        mult[a][b] = vec
        mult[b][a] = vec[:]

    for b in range(n):
        put(0, b, unit_vector(n, b))
    for j in range(1, r + 1):
        for k in range(j, r + 1):
            vec = zero[:]
            for a in range(s):
                vec[r + 1 + a] = rat(pa[a][j - 1][k - 1])
            put(j, k, vec)
        for a in range(r + 1, r + s + 1):
            vec = zero[:]
            for k in range(1, r + 1):
                vec[r + s + k] = rat(pa[a - r - 1][j - 1][k - 1])
            put(j, a, vec)
        for l in range(r + s + 1, basis.m):
            vec = zero[:]
            if l - r - s == j:
                vec[basis.m] = Fraction(1)
            put(j, l, vec)
        put(j, basis.m, zero[:])
    for a in range(r + 1, r + s + 1):
        for b in range(a, r + s + 1):
            vec = zero[:]
            if a == b:
                vec[basis.m] = Fraction(1)
            put(a, b, vec)
        for b in range(r + s + 1, n):
            put(a, b, zero[:])
    for a in range(r + s + 1, n):
        for b in range(a, n):
            put(a, b, zero[:])
    return FrobeniusAlgebra(basis, mult, adapted_bform(basis))


def orthonormalize_gram(gram: Matrix) -> Matrix:
    """A rational U with U^T G U = I, when one exists.

    Works when G is positive definite and the diagonal pivots of its LDL
    factorization are rational squares; otherwise raises with a diagnostic
    naming the offending pivot.
    """
    n = len(gram)
    ok, witness = linalg.is_positive_definite(gram)
    if not ok:
        raise ValueError(
            f"Gram matrix is not positive definite (pivot {witness[1]} at "
            f"index {witness[0]}); no real orthonormal basis exists")
    # LDL^T: L lower unitriangular, D the pivots, G = L D L^T.
    a = linalg.mat_copy(gram)
    l = linalg.identity(n)
    d = []
    for i in range(n):
        pivot = a[i][i]
        d.append(pivot)
        for j in range(i + 1, n):
            l[j][i] = a[j][i] / pivot
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= l[j][i] * pivot * l[k][i]
    roots = []
    for i, pivot in enumerate(d):
        root = linalg.rational_sqrt(pivot)
        if root is None:
            raise ValueError(
                f"Gram pivot {rat_to_str(pivot)} at index {i} is not a rational "
                f"square; rescale the degree-4 block")
        roots.append(root)
    l_inv_t = linalg.transpose(linalg.inverse(l))
    return [[l_inv_t[i][j] / roots[j] for j in range(n)] for i in range(n)]
