import json

import pytest
from fastapi.testclient import TestClient

from qhodge import documents, quantum
from qhodge.fixtures import hyperplane_algebra
from qhodge.reports import CONVENTIONS_HASH
from qhodge.series import QSeries
from qhodge.service import app

from conftest import random_passing_potential, random_violating_potential


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


@pytest.fixture(scope="module")
def hyperplane_potential_doc():
    alg = hyperplane_algebra()
    pot = quantum.QuantumPotential.from_algebra(
        alg, [QSeries.variable(1, 6, 1)], 6)
    return documents.potential_payload(pot)


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"
    assert body["conventions"] == CONVENTIONS_HASH


def test_conventions_table(client):
    body = client.get("/conventions").json()
    assert body["hash"] == CONVENTIONS_HASH
    assert "coordinates" in body["table"]


def test_check_frobenius_endpoint(client):
    doc = documents.algebra_payload(hyperplane_algebra())
    resp = client.post("/check-frobenius", json={"document": doc})
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] is True
    assert {c["name"] for c in body["checks"]} >= {"associativity",
                                                   "classical_wdvv"}


def test_check_wdvv_verdicts(client, rng):
    passing = documents.potential_payload(random_passing_potential(rng))
    failing = documents.potential_payload(random_violating_potential(rng))
    ok = client.post("/check-wdvv", json={"document": passing}).json()
    bad = client.post("/check-wdvv", json={"document": failing}).json()
    assert ok["passed"] is True
    assert bad["passed"] is False
    wdvv = next(c for c in bad["checks"] if c["name"] == "wdvv")
    assert wdvv["witness"]["part"] in ("classical", "quantum")
    agree = next(c for c in bad["checks"] if c["name"] == "equivalence_agreement")
    assert agree["passed"] is True


def test_build_then_recover(client, hyperplane_potential_doc):
    built = client.post("/build-vhs",
                        json={"document": hyperplane_potential_doc}).json()
    assert built["passed"] is True
    asym_doc = {"orbit": built["outputs"]["orbit"],
                "Gamma": built["outputs"]["Gamma"],
                "order": built["outputs"]["order"],
                "reference_potential": hyperplane_potential_doc}
    recovered = client.post("/recover-potential",
                            json={"document": asym_doc}).json()
    assert recovered["passed"] is True
    roundtrip = next(c for c in recovered["checks"]
                     if c["name"] == "roundtrip_match")
    assert roundtrip["passed"] is True


def test_solve_gamma_endpoint(client, hyperplane_potential_doc):
    built = client.post("/build-vhs",
                        json={"document": hyperplane_potential_doc}).json()
    pot = documents.parse_potential(hyperplane_potential_doc)
    r_doc = documents.series_matrix_payload(
        quantum.gamma_from_potential(pot).gamma_minus1())
    body = client.post("/solve-gamma",
                       json={"document": {"orbit": built["outputs"]["orbit"],
                                          "R": r_doc}}).json()
    assert body["passed"] is True
    assert body["outputs"]["Gamma"] == built["outputs"]["Gamma"]
    assert body["outputs"]["residual_max_degree_checked"] == 6


def test_malformed_document_is_400(client):
    doc = documents.algebra_payload(hyperplane_algebra())
    doc["B"][0][4] = "1/0"
    resp = client.post("/check-frobenius", json={"document": doc})
    assert resp.status_code == 400
    assert "zero denominator" in resp.json()["detail"]


def test_deterministic_payloads(client, hyperplane_potential_doc):
    first = client.post("/build-vhs",
                        json={"document": hyperplane_potential_doc}).json()
    second = client.post("/build-vhs",
                         json={"document": hyperplane_potential_doc}).json()
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)
