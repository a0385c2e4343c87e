"""
Tests for the HTTP service: run submission, background execution and polling.
"""
import pytest
from fastapi.testclient import TestClient

from agt_simulator.main import RUNS, app


@pytest.fixture
def client():
    RUNS.clear()
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_teleport_run_completes(client, load_scenario):
    response = client.post("/v1/runs", json=load_scenario("scenario1_teleport.json"))
    assert response.status_code == 202
    body = response.json()
    assert body["status"] == "Run accepted"
    assert body["runId"].startswith("run-teleport-plus-")

    report = client.get(f"/v1/runs/{body['runId']}").json()
    assert report["status"] == "done"
    assert report["fidelity"] > 0.99
    assert report["protocol"] == "teleport"


def test_unsupported_gate_is_stored_as_failure(client, load_scenario):
    response = client.post("/v1/runs", json=load_scenario("scenario2_agp_unsupported.json"))
    assert response.status_code == 202

    report = client.get(f"/v1/runs/{response.json()['runId']}").json()
    assert report["status"] == "failed"
    assert report["error"] == "UnsupportedGateError"


def test_negative_time_is_rejected(client, load_scenario):
    response = client.post("/v1/runs", json=load_scenario("scenario3_negative_time.json"))
    assert response.status_code == 422
    assert response.json()["error"] == "DomainError"
    assert not RUNS


def test_unknown_protocol_is_rejected(client):
    response = client.post("/v1/runs", json={"protocol": "swap"})
    assert response.status_code == 422


def test_unknown_run(client):
    assert client.get("/v1/runs/run-missing").status_code == 404
