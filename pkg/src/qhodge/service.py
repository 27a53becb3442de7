"""HTTP front end: one endpoint per command, documents in, reports out.

All endpoints are POST with a JSON body of the shape
``{"document": ..., "options": {"order": 6, "seed": 0, "cone_samples": 2}}``
and return the same report payload the CLI emits.  Verdict failures are
HTTP 200 with ``"passed": false``; malformed documents are HTTP 400.

Run with ``uvicorn qhodge.service:app``.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .documents import SchemaError
from .handlers import JobOptions, run_command
from .reports import CONVENTIONS, CONVENTIONS_HASH


class Options(BaseModel):
    order: int = Field(default=6, ge=1, le=24)
    seed: int = 0
    cone_samples: int = Field(default=2, ge=0, le=64)


class SeriesTerm(BaseModel):
    alpha: list[int]
    coeff: str | int


class ProductEntry(BaseModel):
    a: int
    b: int
    coeffs: list[str | int]


class AlgebraDocument(BaseModel):
    r: int
    s: int
    B: list[list[str | int]]
    product: list[ProductEntry]


class ClassicalBlock(BaseModel):
    monomials: list[dict]


class PotentialDocument(BaseModel):
    r: int
    s: int
    classical: ClassicalBlock
    psi: list[list[SeriesTerm]]
    order: int | None = None


class SeriesMatrixDocument(BaseModel):
    num_vars: int
    order: int
    entries: list[list[list[SeriesTerm]]]


class OrbitDocument(BaseModel):
    n: int
    N: list[list[list[str | int]]]
    F0: list[list[list[str | int]]]
    Q: list[list[str | int]]


class AsymptoticDocument(BaseModel):
    orbit: OrbitDocument
    Gamma: SeriesMatrixDocument | None = None
    R: SeriesMatrixDocument | None = None
    order: int | None = None
    e0: list[str | int] | None = None
    reference_potential: PotentialDocument | None = None


class CheckModel(BaseModel):
    name: str
    passed: bool
    witness: dict | None = None


class ReportModel(BaseModel):
    command: str
    order: int
    seed: int
    passed: bool
    checks: list[CheckModel]
    conventions: str
    outputs: dict | None = None
    error: str | None = None


class AlgebraRequest(BaseModel):
    document: AlgebraDocument
    options: Options = Options()


class PotentialRequest(BaseModel):
    document: PotentialDocument
    options: Options = Options()


class AsymptoticRequest(BaseModel):
    document: AsymptoticDocument
    options: Options = Options()


app = FastAPI(
    title="qhodge",
    version=__version__,
    description="Exact verification of quantum potentials against the "
                "asymptotic data of their period maps (weight four).")


def _run(command: str, document: BaseModel, options: Options) -> ReportModel:
    job = JobOptions(order=options.order, seed=options.seed,
                     cone_samples=options.cone_samples)
    doc = document.model_dump(exclude_none=True)
    try:
        report = run_command(command, doc, job)
    except SchemaError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return ReportModel(**report.to_payload())


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__,
            "conventions": CONVENTIONS_HASH}


@app.get("/conventions")
def conventions():
    return {"hash": CONVENTIONS_HASH, "table": CONVENTIONS}


@app.post("/check-frobenius", response_model=ReportModel,
          response_model_exclude_none=True)
def check_frobenius(request: AlgebraRequest):
    return _run("check-frobenius", request.document, request.options)


@app.post("/check-wdvv", response_model=ReportModel,
          response_model_exclude_none=True)
def check_wdvv(request: PotentialRequest):
    return _run("check-wdvv", request.document, request.options)


@app.post("/build-vhs", response_model=ReportModel,
          response_model_exclude_none=True)
def build_vhs(request: PotentialRequest):
    return _run("build-vhs", request.document, request.options)


@app.post("/solve-gamma", response_model=ReportModel,
          response_model_exclude_none=True)
def solve_gamma(request: AsymptoticRequest):
    return _run("solve-gamma", request.document, request.options)


@app.post("/recover-potential", response_model=ReportModel,
          response_model_exclude_none=True)
def recover_potential(request: AsymptoticRequest):
    return _run("recover-potential", request.document, request.options)


@app.post("/canonical-coords", response_model=ReportModel,
          response_model_exclude_none=True)
def canonical_coords(request: AsymptoticRequest):
    return _run("canonical-coords", request.document, request.options)
