import pytest
from fastapi.testclient import TestClient

from kummerlab.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_suites_listing(client):
    r = client.get("/suites")
    assert r.status_code == 200
    assert "kummer-identity" in r.json()["suites"]


def test_cartan_endpoint(client):
    r = client.post("/cartan", json={"prime": 5, "level": 1, "gamma": 0,
                                     "delta": 2, "normaliser": True})
    assert r.status_code == 200
    body = r.json()
    assert body["order"] == 24
    assert body["normaliser_order"] == 48
    assert body["abelian"] is True
    assert body["descriptor"]["modulus"] == 5


def test_cartan_endpoint_invalid(client):
    r = client.post("/cartan", json={"prime": 5, "gamma": 1, "delta": 2})
    assert r.status_code == 400
    assert r.json()["detail"]["code"] == 64


def test_h1_endpoint(client):
    r = client.post("/h1", json={
        "group": {"modulus": 3, "generators": [[1, 1, 0, 1]]}})
    assert r.status_code == 200
    body = r.json()
    assert body["invariant_factors"] == [3]
    assert body["module"] == "(Z/3^1)^2"


def test_h1_endpoint_cap(client):
    r = client.post("/h1", json={
        "group": {"modulus": 5, "generators": [[1, 1, 0, 1], [1, 0, 1, 1]]},
        "cap": 10})
    assert r.status_code == 413
    assert r.json()["detail"]["code"] == 2


def test_kummer_endpoint(client):
    r = client.post("/kummer", json={
        "modulus": 12, "generators": [{"t": [1, 0], "m": [5, 0, 0, 5]}]})
    assert r.status_code == 200
    body = r.json()
    assert body["identity_holds"] is True
    assert body["total_failure"] == 72


def test_kummer_endpoint_noninvertible(client):
    r = client.post("/kummer", json={
        "modulus": 4, "generators": [{"t": [0, 0], "m": [2, 0, 0, 1]}]})
    assert r.status_code == 422
    assert r.json()["detail"]["code"] == 4


def test_verify_endpoint(client):
    r = client.post("/verify", json={"suite": "sl2-squares", "seed": 1})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True and body["instances"] == 4


def test_verify_endpoint_unknown(client):
    r = client.post("/verify", json={"suite": "nope"})
    assert r.status_code == 400
    assert r.json()["detail"]["code"] == 64


def test_verify_endpoint_deterministic(client):
    a = client.post("/verify", json={"suite": "kummer-identity",
                                     "seed": 5, "instances": 3}).json()
    b = client.post("/verify", json={"suite": "kummer-identity",
                                     "seed": 5, "instances": 3}).json()
    assert a == b
