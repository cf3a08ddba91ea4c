"""Safe/Borderline/Rare/Outlier labeling from k-nearest-neighbor class agreement."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .config import BAND_DEN, K_MAX, K_MIN, RARE_BAND_NUM, SAFE_BAND_NUM
from .errors import InvalidParameterError
from .neighbors import NeighborIndex


class InstanceType(enum.Enum):
    SAFE = "safe"
    BORDERLINE = "borderline"
    RARE = "rare"
    OUTLIER = "outlier"

    @property
    def rank(self) -> int:
        # hardness ordering: outlier < rare < borderline < safe
        return _RANK[self]


_RANK = {InstanceType.OUTLIER: 0, InstanceType.RARE: 1,
         InstanceType.BORDERLINE: 2, InstanceType.SAFE: 3}

TYPE_ORDER = (InstanceType.SAFE, InstanceType.BORDERLINE,
              InstanceType.RARE, InstanceType.OUTLIER)


@dataclass(frozen=True)
class TypeAssignment:
    instance_id: int
    k: int
    same_class_count: int
    type: InstanceType


@dataclass(frozen=True)
class TypeDistribution:
    """Counts and training-set percentages per (class, type) and per type."""

    per_class: dict
    per_type: dict
    total: int

    def percentage(self, class_index: int, t: InstanceType) -> float:
        return 100.0 * self.per_class[(class_index, t)] / self.total


def type_from_count(same_class_count: int, k: int) -> InstanceType:
    """Band rule on the same-class ratio, in exact integer arithmetic:
    0 -> outlier, (0, 0.3] -> rare, (0.3, 0.7] -> borderline, else safe."""
    if not 0 <= same_class_count <= k:
        raise InvalidParameterError(f"same_class_count {same_class_count} outside [0, {k}]")
    scaled = BAND_DEN * same_class_count
    if same_class_count == 0:
        return InstanceType.OUTLIER
    if scaled <= RARE_BAND_NUM * k:
        return InstanceType.RARE
    if scaled <= SAFE_BAND_NUM * k:
        return InstanceType.BORDERLINE
    return InstanceType.SAFE


def classify_types(index: NeighborIndex, labels: np.ndarray, k: int) -> list[TypeAssignment]:
    """Type every indexed training instance from its k nearest neighbors.

    ``labels`` aligns with the index rows. k is restricted to the UI range.
    """
    if not K_MIN <= k <= K_MAX:
        raise InvalidParameterError(f"k must be in [{K_MIN}, {K_MAX}], got {k}")
    if k >= index.n:
        raise InvalidParameterError(f"k={k} must be smaller than the train size {index.n}")
    labels = np.asarray(labels)
    neigh = index.kneighbors(k)
    same = (labels[neigh] == labels[:, None]).sum(axis=1)
    return [
        TypeAssignment(int(index.ids[r]), k, int(same[r]), type_from_count(int(same[r]), k))
        for r in range(index.n)
    ]


def assignments_by_id(assignments) -> dict[int, InstanceType]:
    return {a.instance_id: a.type for a in assignments}


def type_distribution(assignments, labels: np.ndarray, n_classes: int) -> TypeDistribution:
    """Aggregate assignments into per-class and overall counts; ``labels``
    aligns with ``assignments`` order."""
    labels = np.asarray(labels)
    if len(assignments) != len(labels):
        raise InvalidParameterError("assignments and labels must align")
    per_class = {(c, t): 0 for c in range(n_classes) for t in InstanceType}
    per_type = {t: 0 for t in InstanceType}
    for a, c in zip(assignments, labels):
        per_class[(int(c), a.type)] += 1
        per_type[a.type] += 1
    return TypeDistribution(per_class=per_class, per_type=per_type, total=len(assignments))
