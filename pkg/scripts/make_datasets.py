"""Write the three CSV fixtures under data/.

The iris table comes from scikit-learn (install the dev extra); the clinical
and vehicle-silhouette stand-ins are deterministic synthetic datasets from
samplab.synth. Running this script twice produces byte-identical files.
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from samplab.synth import make_clinical, make_silhouettes, write_csv

IRIS_FEATURES = ("sepal_l", "sepal_w", "petal_l", "petal_w")
IRIS_CLASSES = ("setosa", "versicolor", "virginica")


def write_iris(path):
    from sklearn.datasets import load_iris

    iris = load_iris()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(list(IRIS_FEATURES) + ["species"])
        for row, label in zip(iris.data, iris.target):
            w.writerow([format(v, "g") for v in row] + [IRIS_CLASSES[int(label)]])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data", help="output directory")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    write_iris(out / "iris.csv")
    X, y, features, classes = make_clinical()
    write_csv(out / "clinical.csv", X, y, features, classes)
    X, y, features, classes = make_silhouettes()
    write_csv(out / "silhouettes.csv", X, y, features, classes)
    for name in ("iris.csv", "clinical.csv", "silhouettes.csv"):
        rows = sum(1 for _ in open(out / name)) - 1
        print(f"wrote {out / name} ({rows} rows)")


if __name__ == "__main__":
    main()
