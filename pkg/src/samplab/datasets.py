"""Tabular dataset ingestion, stratified splitting, and versioned mutation.

A :class:`LabeledDataset` is an immutable value; sampling steps produce new
versions via :func:`apply_step`. The test partition is never touched by any
operation in the package.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DATASET_SOFT_CAP
from .errors import (
    DatasetLoadError,
    StratificationError,
    TestSetViolationError,
    UnknownInstanceError,
    InvalidParameterError,
)

log = logging.getLogger(__name__)

ORIGIN_ORIGINAL = 0
ORIGIN_SYNTHETIC = 1


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix plus class labels, identified by stable instance ids.

    Rows cover the full dataset (train and test alike); partition membership
    lives in :class:`SplitAssignment`. ``origin`` flags synthetic rows added
    by oversampling steps.
    """

    feature_names: tuple[str, ...]
    class_names: tuple[str, ...]
    instances: np.ndarray
    labels: np.ndarray
    instance_ids: np.ndarray
    origin: np.ndarray
    _id_to_row: dict[int, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        n = self.instances.shape[0]
        if not (n == self.labels.shape[0] == self.instance_ids.shape[0] == self.origin.shape[0]):
            raise InvalidParameterError("row count mismatch between matrix, labels, and ids")
        if len(np.unique(self.instance_ids)) != n:
            raise InvalidParameterError("instance ids must be unique")
        if len(self.class_names) < 2:
            raise DatasetLoadError("dataset must have at least 2 classes")
        if n and (self.labels.min() < 0 or self.labels.max() >= len(self.class_names)):
            raise InvalidParameterError("label index out of range")
        if not np.all(np.isfinite(self.instances)):
            raise DatasetLoadError("all feature values must be finite")
        for a in (self.instances, self.labels, self.instance_ids, self.origin):
            _frozen(a)
        object.__setattr__(self, "_id_to_row",
                           {int(i): r for r, i in enumerate(self.instance_ids)})

    @property
    def n_instances(self) -> int:
        return self.instances.shape[0]

    @property
    def n_features(self) -> int:
        return self.instances.shape[1]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=len(self.class_names))

    def rows_for_ids(self, ids) -> np.ndarray:
        try:
            return np.array([self._id_to_row[int(i)] for i in ids], dtype=np.intp)
        except KeyError as e:
            raise UnknownInstanceError(f"unknown instance id {e.args[0]}") from None

    def has_id(self, instance_id: int) -> bool:
        return int(instance_id) in self._id_to_row

    def next_id(self) -> int:
        return int(self.instance_ids.max()) + 1 if self.n_instances else 0

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update("\x1f".join(self.feature_names).encode())
        h.update("\x1f".join(self.class_names).encode())
        h.update(np.ascontiguousarray(self.instances, dtype=np.float64).tobytes())
        h.update(np.ascontiguousarray(self.labels, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.instance_ids, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.origin, dtype=np.int8).tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class SplitAssignment:
    train_ids: frozenset[int]
    test_ids: frozenset[int]
    seed: int
    train_fraction: float

    def __post_init__(self):
        if self.train_ids & self.test_ids:
            raise InvalidParameterError("train and test sets overlap")


@dataclass(frozen=True)
class SyntheticRow:
    """One synthetic instance awaiting insertion into a new dataset version."""

    features: np.ndarray
    class_index: int


@dataclass(frozen=True)
class NormalizationStats:
    """Per-feature train-partition min/max; constant features map to 0."""

    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        if np.any(self.minimum > self.maximum):
            raise InvalidParameterError("per-feature min must not exceed max")
        _frozen(self.minimum)
        _frozen(self.maximum)

    @property
    def spread(self) -> np.ndarray:
        return self.maximum - self.minimum

    def transform(self, x: np.ndarray) -> np.ndarray:
        span = self.spread
        safe = np.where(span > 0, span, 1.0)
        out = (x - self.minimum) / safe
        return np.where(span > 0, out, 0.0)

    def inverse(self, x: np.ndarray) -> np.ndarray:
        return x * self.spread + self.minimum


def load_csv(path, label_column: str) -> LabeledDataset:
    """Parse a UTF-8 header CSV into a dataset.

    Classes are indexed in order of first appearance; instance ids are the
    0-based data row numbers. Missing or non-numeric feature cells are
    rejected with the offending row and column named.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise DatasetLoadError(f"file not found: {path}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetLoadError(f"empty file: {path}") from None
        if label_column not in header:
            raise DatasetLoadError(f"label column {label_column!r} not in header {header}")
        label_idx = header.index(label_column)
        feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)

        rows, label_names = [], []
        class_index: dict[str, int] = {}
        labels = []
        for line_no, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise DatasetLoadError(f"row at line {line_no} has {len(rec)} cells, expected {len(header)}")
            vals = []
            for i, cell in enumerate(rec):
                if i == label_idx:
                    continue
                text = cell.strip()
                if not text:
                    raise DatasetLoadError(
                        f"missing value at line {line_no}, column {header[i]!r}")
                try:
                    v = float(text)
                except ValueError:
                    raise DatasetLoadError(
                        f"non-numeric value {cell!r} at line {line_no}, column {header[i]!r}") from None
                if not math.isfinite(v):
                    raise DatasetLoadError(
                        f"non-finite value {cell!r} at line {line_no}, column {header[i]!r}")
                vals.append(v)
            name = rec[label_idx].strip()
            if name not in class_index:
                class_index[name] = len(class_index)
                label_names.append(name)
            labels.append(class_index[name])
            rows.append(vals)

    if not rows:
        raise DatasetLoadError(f"no data rows in {path}")
    if len(label_names) < 2:
        raise DatasetLoadError(f"need at least 2 classes, found {len(label_names)}")
    if len(rows) > DATASET_SOFT_CAP:
        log.warning("dataset has %d instances (> soft cap of %d); expect slow interactions",
                    len(rows), DATASET_SOFT_CAP)
    n = len(rows)
    return LabeledDataset(
        feature_names=feature_names,
        class_names=tuple(label_names),
        instances=np.asarray(rows, dtype=np.float64),
        labels=np.asarray(labels, dtype=np.int64),
        instance_ids=np.arange(n, dtype=np.int64),
        origin=np.zeros(n, dtype=np.int8),
    )


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def per_class_allocation(counts, train_fraction: float) -> list[int]:
    """Train-row quota per class: round-half-up, then move single instances
    until the global quota (round-half-up of the total) matches.

    Each adjustment goes to the class where it distorts the exact per-class
    share least, ties to the larger class then the lower index, keeping every
    class within one instance of its exact share.
    """
    counts = [int(c) for c in counts]
    exact = [c * train_fraction for c in counts]
    alloc = [min(max(_round_half_up(e), 1), c - 1) for e, c in zip(exact, counts)]
    total_target = _round_half_up(sum(counts) * train_fraction)
    total_target = min(max(total_target, len(counts)), sum(counts) - len(counts))
    while sum(alloc) != total_target:
        step = 1 if total_target > sum(alloc) else -1
        best, best_key = None, None
        for i, (a, e, c) in enumerate(zip(alloc, exact, counts)):
            if not 1 <= a + step <= c - 1:
                continue
            key = (-abs(a + step - e), c, -i)
            if best is None or key > best_key:
                best, best_key = i, key
        if best is None:
            break
        alloc[best] += step
    return alloc


def stratified_split(ds: LabeledDataset, train_fraction: float, seed: int) -> SplitAssignment:
    """Deterministic per-class split keeping each class's train share within
    one instance of the global fraction."""
    if not 0 < train_fraction < 1:
        raise InvalidParameterError(f"train_fraction must be in (0,1), got {train_fraction}")
    counts = ds.class_counts()
    for c, cnt in enumerate(counts):
        if cnt < 2:
            raise StratificationError(
                f"class {ds.class_names[c]!r} has {cnt} instance(s); cannot stratify")
    alloc = per_class_allocation(counts, train_fraction)
    rng = np.random.default_rng(seed)
    train: set[int] = set()
    for c in range(len(ds.class_names)):
        ids = np.sort(ds.instance_ids[ds.labels == c])
        picked = rng.permutation(len(ids))[: alloc[c]]
        train.update(int(i) for i in ids[picked])
    test = set(int(i) for i in ds.instance_ids) - train
    return SplitAssignment(frozenset(train), frozenset(test), seed, train_fraction)


def train_ids_of(ds: LabeledDataset, split: SplitAssignment) -> list[int]:
    """Current training ids: surviving original train rows plus all synthetic
    rows, ascending."""
    ids = [i for i in split.train_ids if ds.has_id(i)]
    ids += [int(i) for i in ds.instance_ids[ds.origin == ORIGIN_SYNTHETIC]]
    return sorted(set(ids))


def normalize_minmax(ds: LabeledDataset, split: SplitAssignment) -> NormalizationStats:
    """Min/max over the current training rows only."""
    train_ids = train_ids_of(ds, split)
    if not train_ids:
        raise InvalidParameterError("train partition is empty")
    sub = ds.instances[ds.rows_for_ids(train_ids)]
    return NormalizationStats(sub.min(axis=0).copy(), sub.max(axis=0).copy())


def apply_step(ds: LabeledDataset, split: SplitAssignment,
               removals, additions) -> LabeledDataset:
    """Produce the next dataset version: drop confirmed train rows, append
    synthetic rows with fresh ids. Test rows are untouchable."""
    removals = {int(r) for r in removals}
    for r in removals:
        if r in split.test_ids:
            raise TestSetViolationError(f"instance {r} is in the test set")
        if not ds.has_id(r):
            raise UnknownInstanceError(f"unknown instance id {r}")
        if r not in split.train_ids and ds.origin[ds._id_to_row[r]] != ORIGIN_SYNTHETIC:
            raise UnknownInstanceError(f"instance {r} is not a training row")
    for add in additions:
        if not 0 <= add.class_index < len(ds.class_names):
            raise InvalidParameterError(f"synthetic row has invalid class index {add.class_index}")
        if len(add.features) != ds.n_features:
            raise InvalidParameterError("synthetic row feature count mismatch")

    keep = np.array([int(i) not in removals for i in ds.instance_ids], dtype=bool)
    instances = ds.instances[keep]
    labels = ds.labels[keep]
    ids = ds.instance_ids[keep]
    origin = ds.origin[keep]
    if additions:
        start = ds.next_id()
        new_x = np.asarray([np.asarray(a.features, dtype=np.float64) for a in additions])
        instances = np.vstack([instances, new_x])
        labels = np.concatenate([labels, np.asarray([a.class_index for a in additions], dtype=np.int64)])
        ids = np.concatenate([ids, np.arange(start, start + len(additions), dtype=np.int64)])
        origin = np.concatenate([origin, np.full(len(additions), ORIGIN_SYNTHETIC, dtype=np.int8)])
    return LabeledDataset(ds.feature_names, ds.class_names,
                          instances.copy(), labels.copy(), ids.copy(), origin.copy())
