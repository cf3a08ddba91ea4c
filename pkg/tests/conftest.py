import numpy as np
import pytest

from samplab.datasets import LabeledDataset


def make_dataset(X, y, class_names=None, feature_names=None):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n_classes = int(y.max()) + 1 if class_names is None else len(class_names)
    return LabeledDataset(
        feature_names=tuple(feature_names or (f"f{i}" for i in range(X.shape[1]))),
        class_names=tuple(class_names or (f"c{i}" for i in range(n_classes))),
        instances=X,
        labels=y,
        instance_ids=np.arange(len(y), dtype=np.int64),
        origin=np.zeros(len(y), dtype=np.int8),
    )


def random_blobs(rng, n_classes=2, n_per_class=30, d=2, spread=1.0, sep=4.0, sizes=None):
    """Gaussian blobs on well-separated centers; generic sampling fixture."""
    if sizes is None:
        sizes = [n_per_class] * n_classes
    centers = rng.normal(scale=sep, size=(len(sizes), d))
    X, y = [], []
    for c, size in enumerate(sizes):
        X.append(centers[c] + rng.normal(scale=spread, size=(size, d)))
        y.append(np.full(size, c))
    return np.vstack(X), np.concatenate(y)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
