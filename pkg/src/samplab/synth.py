"""Deterministic synthetic datasets mirroring the shipped CSV fixtures.

Two generators reproduce the class counts, dimensionality, and neighborhood
character of the clinical and vehicle-silhouette benchmarks used in the docs
and acceptance suite: a two-class 699x9 integer-grid dataset with a
rare/outlier bridge between the classes, and a three-class 846x18 dataset
whose large class overlaps both smaller ones. Regenerate the CSVs with
``scripts/make_datasets.py``.
"""

from __future__ import annotations

import csv

import numpy as np

CLINICAL_FEATURES = (
    "clump", "size_un", "shape_un", "adhesion", "epi_size",
    "bare_nuc", "chromatin", "norm_nuc", "mitoses",
)

SILHOUETTE_FEATURES = (
    "Compactness", "Circularity", "DistCircularity", "RadiusRat",
    "PrAxisAspRat", "MaxLensAspRat", "ScatterRat", "Elongatedness",
    "PrAxisRect", "MaxLensRect", "ScVarMajor", "ScVarMinor",
    "ScRadGyration", "SkewMajor", "SkewMinor", "KurtMinor",
    "KurtMajor", "HollowsRat",
)


def _grid(values: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(values), 1, 10)


def _noise_from(rng, shape, sigma, informative, spread):
    base = rng.normal(0.0, 1.0, size=shape) * sigma
    tail_mask = (rng.random(shape) < 0.02) & ~informative
    base[tail_mask] = rng.normal(0.0, 4.0 * spread, size=int(tail_mask.sum()))
    return base


def make_clinical(seed: int = 7):
    """699 instances, 9 integer-grade features, 458 benign / 241 malignant.

    size_un, shape_un, and bare_nuc carry most of the signal. A small mixed
    bridge sits between the class cores: borderline malignant cases with
    lowered grades plus a handful of benign cases deep in malignant territory.
    """
    rng = np.random.default_rng(seed)
    rows, labels = [], []

    n_benign, n_malignant = 458, 241
    informative = [1, 2, 5]  # size_un, shape_un, bare_nuc
    n_bridge, n_inside = 24, 7

    n_core = n_benign - n_bridge - n_inside
    base = rng.normal(1.8, 0.9, size=(n_core, 9))
    base[:, informative] = rng.normal(1.6, 0.8, size=(n_core, 3))
    tail = rng.random(n_core) < 0.10
    base[tail] += rng.normal(1.5, 0.8, size=(tail.sum(), 9))

    def spaced_anchors(count, draw, min_dist):
        out = []
        tries = 0
        while len(out) < count:
            cand = draw()
            tries += 1
            if tries > 5000:
                min_dist *= 0.9  # loosen rather than spin on unlucky streams
                tries = 0
            if all(np.linalg.norm(cand - a) >= min_dist for a in out):
                out.append(cand)
        return out

    # bridge: small well-separated clumps of benign cases between the class
    # cores; elevated size/shape grades but below the malignant range
    def bridge_anchor():
        a = rng.normal(2.8, 0.6, size=9)
        a[informative] = rng.normal(4.0, 0.4, size=3)
        return a

    bridge = []
    for anchor in spaced_anchors((n_bridge + 1) // 2, bridge_anchor, 4.0):
        for _ in range(min(int(rng.integers(2, 4)), n_bridge - len(bridge))):
            bridge.append(anchor + rng.normal(0.0, 0.4, size=9))
    while len(bridge) < n_bridge:
        bridge.append(bridge_anchor())
    bridge = np.asarray(bridge[:n_bridge])

    # isolated benign cases deep in malignant territory (what a cleaning rule
    # should drop first); forced apart so each sits alone among malignants
    def inside_anchor():
        a = rng.normal(6.8, 1.2, size=9)
        a[informative] = rng.normal(6.5, 1.0, size=3)
        return a

    inside = np.asarray(spaced_anchors(n_inside, inside_anchor, 4.5))

    rows.append(_grid(np.vstack([base, bridge, inside])))
    labels += [0] * n_benign

    mal = rng.normal(5.5, 2.0, size=(n_malignant, 9))
    mal[:, informative] = rng.normal(7.0, 1.8, size=(n_malignant, 3))
    # malignant cases with reduced grades contest the bridge zone
    lean = rng.choice(n_malignant, size=20, replace=False)
    mal[np.ix_(lean, informative)] = rng.normal(4.6, 0.5, size=(20, 3))
    rows.append(_grid(mal))
    labels += [1] * n_malignant

    X = np.vstack(rows)
    y = np.asarray(labels)
    order = rng.permutation(len(y))
    return X[order], y[order], CLINICAL_FEATURES, ("benign", "malignant")


def make_silhouettes(seed: int = 82, core_shift: float = 4.8, pocket_frac: float = 0.40,
                     satellite_frac: float = 0.06, spread: float = 1.0,
                     pocket_sigma: float = 1.5, small_clump_frac: float = 0.25):
    """846 instances, 18 features, 199 vans / 218 buses / 429 cars.

    Three structural layers per class: a clean core, mixed boundary pockets
    between the large car class and each smaller class (borderline cases),
    and tiny same-class satellite groups dropped inside foreign cores (rare
    cases and outliers).
    """
    rng = np.random.default_rng(seed)
    rng_pocket = np.random.default_rng(seed + 7001)
    rng_sat = np.random.default_rng(seed + 7002)
    d = 18
    sizes = (199, 218, 429)  # vans, buses, cars

    van_dir = np.zeros(d)
    van_dir[[5, 17]] = (1.2, -1.0)     # MaxLensAspRat up, HollowsRat down
    van_dir[[0, 7]] = (0.6, 0.5)
    bus_dir = np.zeros(d)
    bus_dir[[1, 6]] = (1.1, 1.0)
    bus_dir[[11, 13]] = (-0.7, 0.5)
    centers = [core_shift * van_dir / np.linalg.norm(van_dir),
               core_shift * bus_dir / np.linalg.norm(bus_dir),
               np.zeros(d)]
    # anisotropic noise: silhouette measurements are strongly correlated, so
    # most variance lives in the few informative directions; the uninformative
    # dims keep a sparse wide tail so their min-max range still stretches
    informative = np.zeros(d, dtype=bool)
    informative[[0, 1, 5, 6, 7, 11, 13, 17]] = True
    sigma = np.where(informative, spread, 0.2 * spread)

    def noise(shape):
        return _noise_from(rng, shape, sigma, informative, spread)

    X_parts, y_parts = [], []
    for c, n in enumerate(sizes):
        n_sat = int(round(n * satellite_frac))
        n_pocket = int(round(n * pocket_frac))
        n_core = n - n_sat - n_pocket

        core = centers[c] + noise((n_core, d))

        # boundary clumps: tight same-class groups seeded in the overlap zone
        # between this core and the car core (cars split theirs between both
        # boundaries); clump members share a mixed 13-neighborhood without
        # confusing a 1-NN rule
        if c < 2:
            mids = [(centers[c] + centers[2]) / 2.0]
        else:
            mids = [(centers[2] + centers[0]) / 2.0, (centers[2] + centers[1]) / 2.0]
        pocket = []
        g = 0
        while len(pocket) < n_pocket:
            mid = mids[g % len(mids)]
            g += 1
            anchor = mid + _noise_from(rng_pocket, (d,), sigma, informative, spread) * pocket_sigma
            if rng_pocket.random() < small_clump_frac:
                size = int(rng_pocket.integers(3, 5))   # members type as rare
            else:
                size = int(rng_pocket.integers(5, 9))   # members type as borderline
            for _ in range(min(size, n_pocket - len(pocket))):
                pocket.append(anchor + rng_pocket.normal(0.0, 0.3, size=d) * sigma)
        pocket = np.asarray(pocket).reshape(n_pocket, d)

        # satellites: isolated singles or pairs inside a foreign core, spread
        # wide enough that separate groups rarely merge
        sats = []
        while len(sats) < n_sat:
            group = int(rng_sat.integers(1, 3))
            host = int(rng_sat.choice([k for k in range(3) if k != c]))
            anchor = centers[host] + rng_sat.normal(0.0, 1.3, size=d) * sigma
            for _ in range(min(group, n_sat - len(sats))):
                sats.append(anchor + rng_sat.normal(0.0, 0.2, size=d) * sigma)
        sats = np.asarray(sats).reshape(n_sat, d)

        X_parts.append(np.vstack([core, pocket, sats]))
        y_parts.append(np.full(n, c, dtype=int))

    X = np.vstack(X_parts)
    y = np.concatenate(y_parts)
    X = np.round(X * 20.0 + 100.0, 1)  # plausible positive measurement scale
    order = rng.permutation(len(y))
    return X[order], y[order], SILHOUETTE_FEATURES, ("vans", "buses", "cars")


def write_csv(path, X, y, feature_names, class_names, label_column="class"):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(list(feature_names) + [label_column])
        for row, label in zip(X, y):
            w.writerow([format(v, "g") for v in row] + [class_names[int(label)]])
