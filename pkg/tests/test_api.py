import json
import time

import pytest
from fastapi.testclient import TestClient

from samplab.api import create_app


FAST_MODEL = {"search_iterations": 2, "cv_folds": 3,
              "n_estimators_range": [10, 25], "max_depth_range": [2, 3], "seed": 0}


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    app = create_app(data_dir=str(tmp_path_factory.mktemp("apidata")))
    with TestClient(app) as c:
        yield c


@pytest.fixture(scope="module")
def iris_id(client):
    with open("data/iris.csv", "rb") as fh:
        r = client.post("/datasets", files={"file": ("iris.csv", fh, "text/csv")},
                        data={"label_column": "species"})
    assert r.status_code == 201, r.text
    body = r.json()
    assert body["class_counts"] == [50, 50, 50]
    return body["dataset_id"]


@pytest.fixture(scope="module")
def session_id(client, iris_id):
    r = client.post("/sessions", json={"dataset_id": iris_id, "model": FAST_MODEL})
    assert r.status_code == 201, r.text
    body = r.json()
    assert "balanced_accuracy" in body["report"]
    return body["session_id"]


def wait_job(client, job_id, timeout=120.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        r = client.get(f"/jobs/{job_id}")
        assert r.status_code == 200
        body = r.json()
        if body["status"] in ("done", "failed"):
            return body
        time.sleep(0.05)
    raise TimeoutError("job did not finish")


class TestDatasets:
    def test_unknown_dataset_404(self, client):
        r = client.post("/sessions", json={"dataset_id": "feedbeef"})
        assert r.status_code == 404
        assert r.json()["code"] == "not_found"

    def test_bad_csv_maps_to_400(self, client, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,label\n1,x\noops,y\nbad,x\n")
        p.write_text("a,label\nnope,x\n2,y\n")
        with open(p, "rb") as fh:
            r = client.post("/datasets", files={"file": ("bad.csv", fh, "text/csv")},
                            data={"label_column": "label"})
        assert r.status_code == 400
        assert r.json()["code"] == "dataset_load"


class TestSessionFlow:
    def test_types_endpoint(self, client, session_id):
        r = client.get(f"/sessions/{session_id}/types")
        assert r.status_code == 200
        body = r.json()
        assert body["active_k"] == 5
        assert len(body["assignments"]) == 113
        assert sum(body["distribution"]["per_type"].values()) == 113

    def test_projection_listing_and_selection(self, client, session_id):
        r = client.get(f"/sessions/{session_id}/projections")
        assert r.status_code == 200
        cands = r.json()["candidates"]
        assert [c["n_neighbors"] for c in cands] == list(range(5, 14))
        r = client.post(f"/sessions/{session_id}/projection", json={"n_neighbors": 13})
        assert r.status_code == 200
        assert r.json()["active_k"] == 13
        r = client.post(f"/sessions/{session_id}/projection", json={"n_neighbors": 3})
        assert r.status_code == 404

    def test_propose_empty_scope_maps_400(self, client, session_id):
        r = client.post(f"/sessions/{session_id}/propose", json={
            "algorithm": "ncr", "params": {"threshold": 0.5},
            "scope": {"class_scope": "all", "included_types": ["outlier"]},
        })
        # the fixture may legitimately have outliers; only the error contract
        # is asserted when it does not
        if r.status_code != 200:
            assert r.status_code == 400
            assert r.json()["code"] == "empty_scope"

    def test_propose_confirm_roundtrip(self, client, session_id):
        r = client.post(f"/sessions/{session_id}/propose", json={
            "algorithm": "ncr", "params": {"threshold": 0.5},
            "scope": {"class_scope": "all"},
        })
        assert r.status_code == 200, r.text
        body = r.json()
        removals = [x["id"] for x in body["suggestion"]["removals"]]
        assert removals
        r = client.post(f"/sessions/{session_id}/confirm", json={
            "suggestion_id": body["suggestion_id"],
            "accepted_ids": removals[:1],
        })
        assert r.status_code == 202
        job = wait_job(client, r.json()["job_id"])
        assert job["status"] == "done", job
        assert job["progress"] == 1.0
        step = job["result"]["step"]
        assert step["kind"] == "undersample"
        assert step["removals"] == removals[:1]

        # confirming the same (now stale) suggestion must 409
        r = client.post(f"/sessions/{session_id}/confirm", json={
            "suggestion_id": body["suggestion_id"], "accepted_ids": []})
        assert r.status_code == 409
        assert r.json()["code"] == "stale_suggestion"

    def test_steps_and_overlay(self, client, session_id):
        r = client.get(f"/sessions/{session_id}/steps")
        assert r.status_code == 200
        body = r.json()
        assert body["steps"][0]["kind"] == "train"
        assert len(body["deltas"]) == len(body["steps"])
        r = client.get(f"/sessions/{session_id}/overlay")
        assert r.status_code == 200
        points = r.json()["points"]
        assert len(points) == 37
        for p in points[:5]:
            assert p["correct"] == (p["true_class"] == p["predicted_class"])

    def test_get_idempotent(self, client, session_id):
        a = client.get(f"/sessions/{session_id}/report").json()
        b = client.get(f"/sessions/{session_id}/report").json()
        assert a == b

    def test_export_import_roundtrip(self, client, session_id):
        blob = client.get(f"/sessions/{session_id}/export").text
        r = client.post(f"/sessions/{session_id}/import", json=json.loads(blob))
        assert r.status_code == 200, r.text
        blob2 = client.get(f"/sessions/{session_id}/export").text
        assert blob2 == blob

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/report").status_code == 404
        assert client.get("/jobs/nope").status_code == 404
