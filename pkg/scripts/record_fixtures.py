"""Record API payloads into frontend/tests/fixtures/ for offline UI tests.

Drives the in-process HTTP app through a clinical-dataset session: select the
k=13 projection view, propose a cleaning run, confirm everything except the
rare bridge cluster, and capture every payload the panels consume.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from samplab.api import create_app

OUT = Path("frontend/tests/fixtures")
FAST_MODEL = {"search_iterations": 2, "cv_folds": 3,
              "n_estimators_range": [10, 25], "max_depth_range": [2, 3], "seed": 0}


def dump(name, payload):
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_text(json.dumps(payload, indent=1, sort_keys=True))
    print(f"wrote {OUT / name}")


def main():
    app = create_app(data_dir="/tmp/samplab-fixtures")
    with TestClient(app) as client:
        with open("data/clinical.csv", "rb") as fh:
            r = client.post("/datasets", files={"file": ("clinical.csv", fh, "text/csv")},
                            data={"label_column": "class"})
        dataset = r.json()
        r = client.post("/sessions", json={"dataset_id": dataset["dataset_id"],
                                           "model": FAST_MODEL})
        created = r.json()
        sid = created["session_id"]
        dump("session_created.json", created)

        client.post(f"/sessions/{sid}/projection", json={"n_neighbors": 13})
        types = client.get(f"/sessions/{sid}/types").json()
        dump("types.json", types)

        r = client.post(f"/sessions/{sid}/propose", json={
            "algorithm": "ncr", "params": {"threshold": 0.5},
            "scope": {"class_scope": "majority"},
        })
        proposed = r.json()
        dump("proposal_ncr.json", proposed)

        # the rare-typed suggestions form the bridge cluster the analyst keeps
        by_id = {a["id"]: a["type"] for a in types["assignments"]}
        removals = [x["id"] for x in proposed["suggestion"]["removals"]]
        bridge = [i for i in removals if by_id[i] == "rare"]
        accepted = [i for i in removals if i not in bridge]
        dump("c2_scenario.json", {"suggestion_id": proposed["suggestion_id"],
                                  "all_removals": removals,
                                  "bridge_cluster": bridge,
                                  "accepted": accepted})

        r = client.post(f"/sessions/{sid}/confirm", json={
            "suggestion_id": proposed["suggestion_id"], "accepted_ids": accepted})
        job_id = r.json()["job_id"]
        import time
        while True:
            job = client.get(f"/jobs/{job_id}").json()
            if job["status"] in ("done", "failed"):
                break
            time.sleep(0.05)
        assert job["status"] == "done", job
        dump("job_done.json", job)

        dump("report.json", client.get(f"/sessions/{sid}/report").json())
        dump("steps.json", client.get(f"/sessions/{sid}/steps").json())
        dump("overlay.json", client.get(f"/sessions/{sid}/overlay").json())

        # projection grid on the smaller iris session keeps the fixture compact;
        # a longer boost saturates the easy class so the polar chart's 100 mark
        # is populated, as it is in interactive use
        strong_model = {"search_iterations": 2, "cv_folds": 3,
                        "n_estimators_range": [80, 100],
                        "learning_rate_range": [0.25, 0.3], "seed": 0}
        with open("data/iris.csv", "rb") as fh:
            r = client.post("/datasets", files={"file": ("iris.csv", fh, "text/csv")},
                            data={"label_column": "species"})
        r = client.post("/sessions", json={"dataset_id": r.json()["dataset_id"],
                                           "model": strong_model})
        iris_sid = r.json()["session_id"]
        dump("projections_iris.json", client.get(f"/sessions/{iris_sid}/projections").json())
        dump("types_iris.json", client.get(f"/sessions/{iris_sid}/types").json())
        dump("report_iris.json", client.get(f"/sessions/{iris_sid}/report").json())


if __name__ == "__main__":
    main()
