"""Exact euclidean k-nearest-neighbor index.

Brute force over the full matrix: datasets here are desk-scale, and the
sampling algorithms depend on exact neighbor sets with a documented
tie-break (equal distances resolve to the lower instance id).
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError

_CHUNK = 512


class NeighborIndex:
    """k-NN queries over a fixed matrix whose rows are sorted by instance id.

    Query points themselves are excluded by row position, not by distance, so
    duplicate coordinates still count as neighbors of each other.
    """

    def __init__(self, matrix: np.ndarray, ids):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] < 2:
            raise InvalidParameterError("neighbor index needs a 2-D matrix with >= 2 rows")
        ids = np.asarray(ids, dtype=np.int64)
        if ids.shape[0] != matrix.shape[0]:
            raise InvalidParameterError("ids must align with matrix rows")
        if np.any(np.diff(ids) <= 0):
            order = np.argsort(ids, kind="stable")
            ids, matrix = ids[order], matrix[order]
        self.matrix = matrix
        self.ids = ids
        self._row_of = {int(i): r for r, i in enumerate(ids)}

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def row_of(self, instance_id: int) -> int:
        return self._row_of[int(instance_id)]

    def _distances_from(self, q: np.ndarray) -> np.ndarray:
        diff = self.matrix[None, :, :] - q[:, None, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))

    def kneighbors(self, k: int) -> np.ndarray:
        """Row positions of the k nearest neighbors of every indexed point,
        nearest first; ties resolve to the lower id (rows are id-ordered, so
        a stable sort suffices)."""
        if not 1 <= k <= self.n - 1:
            raise InvalidParameterError(f"k must be in [1, {self.n - 1}], got {k}")
        out = np.empty((self.n, k), dtype=np.intp)
        for start in range(0, self.n, _CHUNK):
            stop = min(start + _CHUNK, self.n)
            d = self._distances_from(self.matrix[start:stop])
            rows = np.arange(start, stop)
            d[np.arange(stop - start), rows] = np.inf
            order = np.argsort(d, axis=1, kind="stable")
            out[start:stop] = order[:, :k]
        return out

    def kneighbors_of(self, points: np.ndarray, k: int, exclude_rows=None) -> np.ndarray:
        """Row positions of the k nearest indexed points to external queries."""
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if not 1 <= k <= self.n:
            raise InvalidParameterError(f"k must be in [1, {self.n}], got {k}")
        out = np.empty((points.shape[0], k), dtype=np.intp)
        for start in range(0, points.shape[0], _CHUNK):
            stop = min(start + _CHUNK, points.shape[0])
            d = self._distances_from(points[start:stop])
            if exclude_rows is not None:
                for qi, ex in enumerate(exclude_rows[start:stop]):
                    if ex is not None:
                        d[qi, ex] = np.inf
            order = np.argsort(d, axis=1, kind="stable")
            out[start:stop] = order[:, :k]
        return out

    def neighbor_ids(self, k: int) -> np.ndarray:
        return self.ids[self.kneighbors(k)]


def nearest_among(matrix: np.ndarray, ids: np.ndarray, query: np.ndarray) -> int:
    """Row position of the nearest candidate to one query point, lower id on
    ties. ``ids`` must align with ``matrix`` rows."""
    d = np.sqrt(((matrix - query) ** 2).sum(axis=1))
    cand = np.flatnonzero(d == d.min())
    return int(cand[np.argmin(ids[cand])])
