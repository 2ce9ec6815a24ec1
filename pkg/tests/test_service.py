import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from netinform.report import check_report, render
from netinform.model import load
from netinform.service import MAX_BODY, create_app

NETWORKS = Path(__file__).resolve().parent.parent / "networks"


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def six_doc():
    return json.loads((NETWORKS / "six_node.json").read_text())


def test_health(client):
    assert client.get("/v1/health").json() == {"ok": True}


def test_validate_endpoint(client, six_doc):
    r = client.post("/v1/validate", json={"network": six_doc})
    assert r.status_code == 200
    assert r.json()["validation"]["ok"]


def test_check_endpoint_satisfied(client, six_doc):
    r = client.post("/v1/check", json={"network": six_doc,
                                       "options": {"mode": "generic"}})
    assert r.status_code == 200
    body = r.json()
    assert body["verdicts"]["generic"]["result"] == "Satisfied"
    assert body["exit_code"] == 0


def test_cli_service_parity(client, six_doc):
    # identical inputs produce byte-identical report payloads
    r = client.post("/v1/check", json={"network": six_doc,
                                       "options": {"mode": "generic",
                                                   "grid": 96}})
    service_payload = {k: v for k, v in r.json().items() if k != "exit_code"}
    net, pred = load(json.dumps(six_doc))
    rep, _ = check_report(net, pred, mode="generic", grid=96)
    assert render(service_payload) == render(json.loads(render(rep)))


def test_malformed_body_400(client):
    r = client.post("/v1/check", content=b"{not json",
                    headers={"content-type": "application/json"})
    assert r.status_code == 400
    assert "error" in r.json()


def test_schema_error_has_pointer(client):
    r = client.post("/v1/validate",
                    json={"network": {"nodes": 2, "modules": [{"from": 9,
                                                               "to": 1}]}})
    assert r.status_code == 400
    assert r.json()["pointer"].startswith("/modules/0")


def test_oversize_body_413(client, six_doc):
    doc = dict(six_doc)
    doc["padding"] = "x" * (MAX_BODY + 100)
    r = client.post("/v1/check", json={"network": doc})
    assert r.status_code == 413


def test_sets_endpoint(client, six_doc):
    r = client.post("/v1/sets", json={"network": six_doc})
    assert r.status_code == 200
    assert r.json()["sets"]["sets"]["D_c"]["members"] == ["w3"]


def test_probe_endpoint(client, six_doc):
    r = client.post("/v1/probe", json={"network": six_doc,
                                       "options": {"trials": 5, "seed": 1}})
    assert r.status_code == 200
    assert r.json()["probe"]["trials"] == 5


def test_experiment_cap_422(client, six_doc):
    r = client.post("/v1/experiment",
                    json={"network": six_doc,
                          "options": {"N_grid": [1 << 17], "runs": 2}})
    assert r.status_code == 422
    assert "capped" in r.json()["error"]
    r = client.post("/v1/experiment",
                    json={"network": six_doc,
                          "options": {"N_grid": [2048], "runs": 50}})
    assert r.status_code == 422


def test_experiment_stream(client, six_doc):
    with client.stream("POST", "/v1/experiment",
                       json={"network": six_doc,
                             "options": {"N_grid": [2048], "runs": 2,
                                         "seed": 1}}) as r:
        assert r.status_code == 200
        lines = [json.loads(l) for l in r.iter_lines() if l]
    assert lines[-1]["event"] == "done"
    med = lines[-1]["report"]["experiment"]["medians"]
    assert len(med) == 1
    progress = [l for l in lines if l["event"] == "progress"]
    assert progress and progress[-1]["done"] == 2


def test_statelessness_identical_requests(client, six_doc):
    payload = {"network": six_doc, "options": {"mode": "generic"}}
    a = client.post("/v1/check", json=payload).text
    b = client.post("/v1/check", json=payload).text
    assert a == b
