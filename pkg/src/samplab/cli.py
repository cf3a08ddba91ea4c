"""Command-line entry points: serve the HTTP API, or replay a session script.

``samplab run`` executes a session script (an export, or the same schema with
the computed fields omitted) headlessly and writes the final session JSON, a
per-step metrics CSV, and the Sankey flow JSON into the output directory.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .datasets import load_csv
from .errors import SamplabError
from .session import import_session


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(data_dir=args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _write_metrics_csv(path, session):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "kind", "algorithm",
                    "balanced_accuracy_train", "f1_train",
                    "balanced_accuracy_test", "f1_test",
                    "delta_balanced_accuracy_test", "delta_f1_test"])
        for s in session.steps:
            after = s.metrics_after
            w.writerow([
                s.index, s.kind, s.algorithm or "",
                repr(after["train"]["balanced_accuracy"]), repr(after["train"]["f1_macro"]),
                repr(after["test"]["balanced_accuracy"]), repr(after["test"]["f1_macro"]),
                repr(after["test"]["balanced_accuracy"] - s.metrics_before["test"]["balanced_accuracy"]),
                repr(after["test"]["f1_macro"] - s.metrics_before["test"]["f1_macro"]),
            ])


def cmd_run(args) -> int:
    script_path = Path(args.script)
    try:
        payload = json.loads(script_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: cannot read script: {e}", file=sys.stderr)
        return 2

    dataset_path = args.dataset or payload.get("dataset", {}).get("path")
    if not dataset_path:
        print("error: no dataset path (give --dataset or dataset.path in the script)",
              file=sys.stderr)
        return 2
    label_column = payload.get("dataset", {}).get("label_column") or args.label_column

    if args.seed_override is not None:
        payload.setdefault("config", {}).setdefault("model", {})["seed"] = args.seed_override

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        ds = load_csv(dataset_path, label_column)
        session = import_session(payload, ds)
    except SamplabError as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return 1

    (out / "session.json").write_text(session.export_json(), encoding="utf-8")
    _write_metrics_csv(out / "metrics.csv", session)
    (out / "sankey.json").write_text(
        json.dumps({"flows": [f.to_payload() for f in session.flows]},
                   sort_keys=True, separators=(",", ":")),
        encoding="utf-8")
    final = session.steps[-1].metrics_after["test"]
    print(f"replayed {len(session.steps)} steps; "
          f"test balanced accuracy {final['balanced_accuracy']:.4f}, "
          f"f1 {final['f1_macro']:.4f}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="samplab",
                                     description="hardness-aware sampling workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--host", default=os.environ.get("SAMPLAB_HOST", "127.0.0.1"))
    serve.add_argument("--port", type=int,
                       default=int(os.environ.get("SAMPLAB_PORT", "8837")))
    serve.add_argument("--data-dir",
                       default=os.environ.get("SAMPLAB_DATA_DIR", "samplab-data"))
    serve.set_defaults(func=cmd_serve)

    run = sub.add_parser("run", help="replay a session script headlessly")
    run.add_argument("--script", required=True, help="session script / export JSON")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--dataset", help="dataset CSV (overrides dataset.path)")
    run.add_argument("--label-column", default="class",
                     help="label column when the script does not name one")
    run.add_argument("--seed-override", type=int, default=None,
                     help="replace the model seed before replay")
    run.set_defaults(func=cmd_run)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
