"""The command layer shared by the CLI and the HTTP service.

Each handler takes plain parsed JSON (dicts and lists), runs the relevant
checks, and returns a deterministic :class:`~qhodge.reports.Report`.
Domain failures (a non-integrable tail, a degenerate pairing, ...) become
failing checks with witnesses; only malformed documents raise
:class:`~qhodge.documents.SchemaError`.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import asymptotics, documents, hodge, quantum
from . import frobenius as frobenius_errors
from .asymptotics import SolveError
from .forms import ClosednessError
from .frobenius import check_classical_wdvv, classical_potential, validate_frobenius
from .quantum import PotentialShapeError
from .reports import Report


@dataclass
class JobOptions:
    order: int = 6
    seed: int = 0
    cone_samples: int = 2

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("truncation order must be >= 1")


def run_check_frobenius(doc, options: JobOptions) -> Report:
    report = Report("check-frobenius", options.order, options.seed)
    alg = documents.parse_algebra(doc)
    validation = validate_frobenius(alg)
    report.extend(validation.items)
    if validation.passed:
        ok, witnesses = check_classical_wdvv(classical_potential(alg))
        report.record("classical_wdvv", ok, witnesses[0] if witnesses else None)
    else:
        report.record("classical_wdvv", False,
                      {"error": "algebra axioms fail; see items above"})
    return report


def run_check_wdvv(doc, options: JobOptions) -> Report:
    report = Report("check-wdvv", options.order, options.seed)
    pot = documents.parse_potential(doc, default_order=options.order)
    ok_wdvv, witnesses = quantum.check_wdvv(pot)
    report.record("wdvv", ok_wdvv, witnesses[0] if witnesses else None)
    conn = quantum.build_connection(pot)
    ok_flat, wit_flat = quantum.check_flatness(conn)
    report.record("connection_flatness", ok_flat, wit_flat)
    ok_xi, wit_xi = quantum.xi_check(pot)
    report.record("xi_compact_form", ok_xi, wit_xi)
    report.record("equivalence_agreement",
                  ok_wdvv == ok_flat == ok_xi,
                  None if ok_wdvv == ok_flat == ok_xi else
                  {"wdvv": ok_wdvv, "flatness": ok_flat, "xi": ok_xi})
    return report


def run_build_vhs(doc, options: JobOptions) -> Report:
    """Build the period data of a potential and verify its defining identities."""
    report = Report("build-vhs", options.order, options.seed)
    pot = documents.parse_potential(doc, default_order=options.order)
    conn = quantum.build_connection(pot)
    orbit = hodge.orbit_from_algebra(pot.algebra())

    ok_wdvv, wit = quantum.check_wdvv(pot)
    report.record("wdvv", ok_wdvv, wit[0] if wit else None)
    ok_flat, wit_flat = quantum.check_flatness(conn)
    report.record("connection_flatness", ok_flat, wit_flat)
    ok_q, wit_q = quantum.check_q_flatness(conn, orbit.pairing)
    report.record("pairing_flatness", ok_q, wit_q)
    ok_t, wit_t = quantum.check_transversality(conn)
    report.record("transversality", ok_t, wit_t)

    residue_ok = True
    alg = pot.algebra()
    for j, mat in enumerate(quantum.residues(conn), start=1):
        if mat != alg.mult_matrix(j):
            residue_ok = False
            report.record("residues", False, {"direction": j})
            break
    if residue_ok:
        report.record("residues", True)

    samples = hodge.random_cone_samples(orbit.rank, options.cone_samples,
                                        options.seed)
    try:
        ok_cone, wit_cone = hodge.cone_independence(orbit, samples)
    except hodge.NotNilpotentError as exc:
        ok_cone, wit_cone = False, {"error": str(exc)}
    report.record("cone_independence", ok_cone, wit_cone)

    ok_mu, wit_mu = hodge.check_max_unipotent(orbit)
    report.record("max_unipotent", ok_mu, wit_mu)

    if ok_wdvv and ok_mu:
        try:
            asym = quantum.asymptotic_data_from_potential(pot)
            gd = quantum.gamma_from_potential(pot)
            dict_ok = (asym.c_block() == gd.c_block
                       and asym.d_block() == gd.d_block)
            report.record("tail_dictionary", dict_ok)
            report.outputs["orbit"] = documents.orbit_payload(orbit)
            report.outputs["Gamma"] = documents.series_matrix_payload(asym.gamma)
            report.outputs["C"] = documents.series_matrix_payload(gd.c_block)
            report.outputs["D"] = [series.to_payload() for series in gd.d_block]
            report.outputs["order"] = pot.order
        except SolveError as exc:
            report.record("tail_dictionary", False,
                          {"error": str(exc), "witness": exc.witness})
    else:
        report.record("tail_dictionary", False,
                      {"error": "skipped: WDVV or maximal unipotency failed"})
    return report


def _parse_asymptotic(doc, options: JobOptions, path: str = "input"):
    orbit = documents.parse_orbit(documents.require(doc, "orbit", path),
                                  f"{path}.orbit")
    order = doc.get("order", options.order)
    order = documents.parse_int(order, f"{path}.order")
    if "Gamma" in doc:
        gamma = documents.parse_series_matrix(doc["Gamma"], f"{path}.Gamma")
        if gamma.rows != orbit.dimension or gamma.cols != orbit.dimension:
            raise documents.SchemaError(f"{path}.Gamma", "shape mismatch with orbit")
        asym = asymptotics.asymptotic_data_from_gamma(orbit, gamma.truncate(order))
        return orbit, asym, None
    if "R" in doc:
        r_matrix = documents.parse_series_matrix(doc["R"], f"{path}.R")
        if r_matrix.rows != orbit.dimension or r_matrix.cols != orbit.dimension:
            raise documents.SchemaError(f"{path}.R", "shape mismatch with orbit")
        return orbit, None, r_matrix.truncate(order)
    raise documents.SchemaError(path, "expected a Gamma or R series matrix")


def run_solve_gamma(doc, options: JobOptions) -> Report:
    report = Report("solve-gamma", options.order, options.seed)
    orbit, asym, r_matrix = _parse_asymptotic(doc, options)
    if r_matrix is None:
        raise documents.SchemaError("input.R", "solve-gamma needs the R block")
    ok, witness = asymptotics.check_integrability(orbit, r_matrix)
    report.record("integrability", ok, witness)
    if not ok:
        return report
    try:
        solved = asymptotics.solve_gamma(orbit, r_matrix)
    except SolveError as exc:
        report.record("solve", False, {"error": str(exc), "level": exc.level,
                                       "witness": exc.witness})
        return report
    report.record("solve", True)
    report.record("grade_minus1_block",
                  solved.gamma_minus1() == r_matrix)
    report.outputs["Gamma"] = documents.series_matrix_payload(solved.gamma)
    report.outputs["residual_max_degree_checked"] = solved.order
    return report


def run_recover_potential(doc, options: JobOptions,
                          reference_doc=None) -> Report:
    report = Report("recover-potential", options.order, options.seed)
    orbit, asym, r_matrix = _parse_asymptotic(doc, options)
    if asym is None:
        solved = asymptotics.solve_gamma(orbit, r_matrix)
        asym = solved
    ok_mu, wit_mu = hodge.check_max_unipotent(orbit)
    report.record("max_unipotent", ok_mu, wit_mu)
    if not ok_mu:
        return report
    if "e0" in doc:
        e0 = documents.parse_vector(doc["e0"], orbit.dimension, "input.e0")
    else:
        e0 = asym.bigrading.piece(hodge.WEIGHT).basis_vectors()[0]
    try:
        algebra, _frame = hodge.product_from_orbit(orbit, e0)
    except hodge.OrbitStructureError as exc:
        report.record("product_reconstruction", False, {"error": str(exc)})
        return report
    report.record("product_reconstruction", True)
    try:
        pot = quantum.potential_from_gamma(asym, algebra)
    except (PotentialShapeError, SolveError) as exc:
        report.record("potential_recovery", False, {"error": str(exc)})
        return report
    report.record("potential_recovery", True)
    report.outputs["potential"] = documents.potential_payload(pot)
    if reference_doc is None and "reference_potential" in doc:
        reference_doc = doc["reference_potential"]
    if reference_doc is not None:
        reference = documents.parse_potential(reference_doc, "reference_potential",
                                              default_order=options.order)
        match = (reference.pa == pot.pa
                 and all(a.equal_to_order(b, min(pot.order, reference.order))
                         for a, b in zip(reference.psi, pot.psi)))
        report.record("roundtrip_match", match)
    return report


def run_canonical_coords(doc, options: JobOptions) -> Report:
    report = Report("canonical-coords", options.order, options.seed)
    orbit, asym, r_matrix = _parse_asymptotic(doc, options)
    if asym is None:
        asym = asymptotics.solve_gamma(orbit, r_matrix)
    ok_mu, wit_mu = hodge.check_max_unipotent(orbit)
    report.record("max_unipotent", ok_mu, wit_mu)
    if not ok_mu:
        return report
    try:
        change, moved = asymptotics.canonical_coordinates(asym)
    except SolveError as exc:
        report.record("canonical_change", False, {"error": str(exc)})
        return report
    report.record("canonical_change", True)
    residual = asymptotics.rho_component(moved)
    report.record("restricted_tail_vanishes",
                  all(g.is_zero() for g in residual))
    change2, _ = asymptotics.canonical_coordinates(moved)
    report.record("idempotent", change2.is_identity())
    report.outputs["change"] = {
        "factors": [f.to_payload() for f in change.factors],
        "order": asym.order}
    report.outputs["Gamma"] = documents.series_matrix_payload(moved.gamma)
    return report


HANDLERS = {
    "check-frobenius": run_check_frobenius,
    "check-wdvv": run_check_wdvv,
    "build-vhs": run_build_vhs,
    "solve-gamma": run_solve_gamma,
    "recover-potential": run_recover_potential,
    "canonical-coords": run_canonical_coords,
}

DOMAIN_ERRORS = (
    SolveError,
    PotentialShapeError,
    hodge.OrbitStructureError,
    hodge.NotHodgeTateError,
    hodge.NotNilpotentError,
    frobenius_errors.InvalidAlgebraError,
    frobenius_errors.DegeneratePairingError,
    frobenius_errors.AssociativityError,
    ClosednessError,
)


def run_command(command: str, doc, options: JobOptions,
                reference_doc=None) -> Report:
    """Dispatch with domain errors folded into a failing report.

    Schema errors propagate to the caller (usage exit code); everything the
    checkers can legitimately reject shows up as a failed verdict.
    """
    if command not in HANDLERS:
        raise documents.SchemaError("command", f"unknown command {command!r}")
    try:
        if command == "recover-potential":
            return run_recover_potential(doc, options, reference_doc)
        return HANDLERS[command](doc, options)
    except DOMAIN_ERRORS as exc:
        report = Report(command, options.order, options.seed)
        report.error = str(exc)
        report.record("precondition", False, {"error": str(exc)})
        return report
