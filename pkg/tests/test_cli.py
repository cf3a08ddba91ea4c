import csv
import json
from pathlib import Path

from samplab.cli import main
from samplab.config import ModelConfig, SessionConfig
from samplab.datasets import load_csv
from samplab.sampling import ClassScope, SamplingScope
from samplab.session import start_session

FAST = SessionConfig(model=ModelConfig(search_iterations=2, cv_folds=3,
                                       n_estimators_range=(10, 25), max_depth_range=(2, 3), seed=0))


def export_with_one_step():
    iris = load_csv("data/iris.csv", "species")
    s = start_session(iris, FAST)
    sug = s.propose("ncr", {"threshold": 0.5}, SamplingScope(ClassScope.ALL))
    s.confirm(sug, accepted=sorted(sug.removals)[:1])
    return s.export_json()


class TestRun:
    def test_replay_reproduces_export_bytes(self, tmp_path):
        blob = export_with_one_step()
        script = tmp_path / "script.json"
        script.write_text(blob)
        out = tmp_path / "out"
        code = main(["run", "--script", str(script), "--out", str(out),
                     "--dataset", "data/iris.csv", "--label-column", "species"])
        assert code == 0
        assert (out / "session.json").read_text() == blob

    def test_artifacts_written(self, tmp_path):
        blob = export_with_one_step()
        script = tmp_path / "script.json"
        script.write_text(blob)
        out = tmp_path / "out"
        main(["run", "--script", str(script), "--out", str(out),
              "--dataset", "data/iris.csv", "--label-column", "species"])
        with open(out / "metrics.csv") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "step"
        assert len(rows) - 1 == len(json.loads(blob)["steps"])
        sankey = json.loads((out / "sankey.json").read_text())
        assert "flows" in sankey

    def test_empty_script_baseline_only(self, tmp_path):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "schema_version": 1,
            "dataset": {"path": "data/iris.csv", "label_column": "species"},
            "config": {"model": {"search_iterations": 2, "cv_folds": 3,
                                 "n_estimators_range": [10, 25]}},
            "steps": [],
        }))
        out = tmp_path / "out"
        code = main(["run", "--script", str(script), "--out", str(out)])
        assert code == 0
        with open(out / "metrics.csv") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 2  # header + baseline row
        assert rows[1][1] == "train"

    def test_dataset_mismatch_exit(self, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "schema_version": 1,
            "dataset": {"path": "data/iris.csv", "label_column": "species",
                        "hash": "0" * 64},
            "config": {},
            "steps": [],
        }))
        code = main(["run", "--script", str(script), "--out", str(tmp_path / "out")])
        assert code == 1
        assert "dataset_mismatch" in capsys.readouterr().err

    def test_failing_step_index_reported(self, tmp_path, capsys):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "schema_version": 1,
            "dataset": {"path": "data/iris.csv", "label_column": "species"},
            "config": {"model": {"search_iterations": 2, "cv_folds": 3,
                                 "n_estimators_range": [10, 25]}},
            "steps": [{"index": 1, "kind": "undersample", "algorithm": "manual",
                       "params": {}, "removals": [999999], "additions": []}],
        }))
        code = main(["run", "--script", str(script), "--out", str(tmp_path / "out")])
        assert code == 1
        err = capsys.readouterr().err
        assert "step 1" in err

    def test_seed_override_changes_model_seed(self, tmp_path):
        script = tmp_path / "script.json"
        script.write_text(json.dumps({
            "schema_version": 1,
            "dataset": {"path": "data/iris.csv", "label_column": "species"},
            "config": {"model": {"search_iterations": 2, "cv_folds": 3,
                                 "n_estimators_range": [10, 25]}},
            "steps": [],
        }))
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["run", "--script", str(script), "--out", str(out1)])
        main(["run", "--script", str(script), "--out", str(out2), "--seed-override", "9"])
        s1 = json.loads((out1 / "session.json").read_text())
        s2 = json.loads((out2 / "session.json").read_text())
        assert s1["config"]["model"]["seed"] == 0
        assert s2["config"]["model"]["seed"] == 9
