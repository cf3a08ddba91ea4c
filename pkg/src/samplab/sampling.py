"""Undersampling and oversampling restricted to instance types and class scopes.

All algorithms run against an immutable train view and return suggestions; a
human confirms any subset, and only then does the dataset change. Neighbor
math happens in normalized feature space; synthetic feature vectors are
interpolated in raw space (the two are affinely equivalent).
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .config import ADASYN_JITTER
from .errors import (
    DegenerateClassError,
    EmptyScopeError,
    InvalidParameterError,
    UnknownInstanceError,
)
from .instance_types import InstanceType
from .neighbors import NeighborIndex, nearest_among

log = logging.getLogger(__name__)


class ClassScope(enum.Enum):
    MAJORITY = "majority"
    NOT_MINORITY = "not_minority"
    NOT_MAJORITY = "not_majority"
    ALL = "all"


class OversampleExclusion(enum.Enum):
    """How deactivated types shrink the oversampling pool.

    GLOBAL_TYPE_REMOVAL drops excluded-type instances everywhere, so they also
    stop influencing density estimates; PER_CLASS_EXCLUSION drops them only
    within the classes being oversampled.
    """

    GLOBAL_TYPE_REMOVAL = "global_type_removal"
    PER_CLASS_EXCLUSION = "per_class_exclusion"


class RemovalReason(enum.Enum):
    TOMEK_LINK = "tomek_link"
    REDUNDANT_CNN = "redundant_cnn"
    NOISY_ENN = "noisy_enn"


ALL_TYPES = frozenset(InstanceType)


@dataclass(frozen=True)
class SamplingScope:
    class_scope: ClassScope
    included_types: frozenset = ALL_TYPES
    exclusion: OversampleExclusion = OversampleExclusion.PER_CLASS_EXCLUSION

    def __post_init__(self):
        if not self.included_types:
            raise InvalidParameterError("included_types must not be empty")


@dataclass(frozen=True)
class TrainView:
    """Aligned per-train-instance arrays shared by every sampler.

    ``index`` holds normalized features in ascending-id row order; ``raw``
    and ``labels`` align with those rows. ``spread`` is the per-feature raw
    range used to scale normalized-space jitter back to raw units.
    """

    index: NeighborIndex
    raw: np.ndarray
    labels: np.ndarray
    types: dict[int, InstanceType]
    spread: np.ndarray

    @property
    def ids(self) -> np.ndarray:
        return self.index.ids

    def class_counts(self, n_classes=None) -> np.ndarray:
        n = n_classes or (int(self.labels.max()) + 1)
        return np.bincount(self.labels, minlength=n)


@dataclass(frozen=True)
class ScopeResolution:
    eligible_ids: tuple
    pool_ids: tuple
    scope_classes: tuple
    per_class_eligible: dict


@dataclass(frozen=True)
class UndersampleSuggestion:
    algorithm: str
    params: dict
    removals: dict  # id -> RemovalReason
    dataset_hash: str = ""

    def removal_ids(self) -> list[int]:
        return sorted(self.removals)

    def to_payload(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "params": dict(sorted(self.params.items())),
            "removals": [{"id": i, "reason": self.removals[i].value}
                         for i in sorted(self.removals)],
            "additions": [],
            "dataset_hash": self.dataset_hash,
        }


@dataclass(frozen=True)
class SyntheticPoint:
    features: np.ndarray  # raw feature space
    class_index: int
    parent_id: int
    neighbor_id: int
    lam: float

    def to_payload(self) -> dict:
        return {
            "vector": [float(v) for v in self.features],
            "class": self.class_index,
            "parent": self.parent_id,
            "neighbor": self.neighbor_id,
            "lambda": self.lam,
        }


@dataclass(frozen=True)
class OversampleSuggestion:
    algorithm: str
    params: dict
    points: tuple
    dataset_hash: str = ""

    def to_payload(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "params": dict(sorted(self.params.items())),
            "removals": [],
            "additions": [p.to_payload() for p in self.points],
            "dataset_hash": self.dataset_hash,
        }


def majority_class(counts: np.ndarray) -> int:
    return int(np.argmax(counts))


def minority_class(counts: np.ndarray) -> int:
    present = np.where(counts > 0, counts, np.iinfo(np.int64).max)
    return int(np.argmin(present))


def resolve_scope(view: TrainView, scope: SamplingScope, mode: str) -> ScopeResolution:
    """Resolve class scope and type filter against current train counts.

    ``mode`` is "under" or "over". For undersampling the type filter narrows
    removal candidates only; the full class-scope pool still drives the
    algorithms. For oversampling it shapes the working pool according to the
    exclusion semantics.
    """
    if mode not in ("under", "over"):
        raise InvalidParameterError(f"mode must be 'under' or 'over', got {mode!r}")
    counts = view.class_counts()
    present = [c for c in range(len(counts)) if counts[c] > 0]
    if scope.class_scope is ClassScope.MAJORITY:
        classes = [majority_class(counts)]
    elif scope.class_scope is ClassScope.NOT_MINORITY:
        classes = [c for c in present if c != minority_class(counts)]
    elif scope.class_scope is ClassScope.NOT_MAJORITY:
        classes = [c for c in present if c != majority_class(counts)]
    else:
        classes = present
    class_set = set(classes)

    ids = view.ids
    in_scope = np.isin(view.labels, classes)
    included = np.array([view.types[int(i)] in scope.included_types for i in ids])

    if mode == "under":
        pool = ids[in_scope]
        eligible = ids[in_scope & included]
    else:
        if scope.exclusion is OversampleExclusion.GLOBAL_TYPE_REMOVAL:
            pool = ids[included]
        else:
            pool = ids[~in_scope | included]
        eligible = ids[in_scope & included]
    if len(eligible) == 0:
        raise EmptyScopeError("nothing to sample: scope and type filter exclude everything")
    per_class = {c: int((view.labels[np.isin(ids, eligible)] == c).sum()) for c in classes}
    return ScopeResolution(
        eligible_ids=tuple(int(i) for i in eligible),
        pool_ids=tuple(int(i) for i in pool),
        scope_classes=tuple(classes),
        per_class_eligible=per_class,
    )


def tomek_links(index: NeighborIndex, labels: np.ndarray, eligible=None) -> frozenset:
    """Mutual 1-nearest-neighbor pairs with differing labels, as (low, high)
    id tuples; optionally only pairs touching the eligible set."""
    labels = np.asarray(labels)
    nn = index.kneighbors(1).ravel()
    pairs = set()
    for r in range(index.n):
        s = nn[r]
        if nn[s] == r and labels[r] != labels[s]:
            a, b = int(index.ids[r]), int(index.ids[s])
            pairs.add((min(a, b), max(a, b)))
    if eligible is not None:
        el = set(int(i) for i in eligible)
        pairs = {p for p in pairs if p[0] in el or p[1] in el}
    return frozenset(pairs)


def condensed_nn(view: TrainView, seeds: int, resolution: ScopeResolution,
                 rng_seed: int) -> frozenset:
    """Ids of in-scope points that a 1-NN rule never needed to retain.

    The retained set starts as every out-of-scope point plus ``seeds`` random
    in-scope points; remaining in-scope points are swept in id order and moved
    in when misclassified, until a full sweep moves nothing.
    """
    if seeds < 1:
        raise InvalidParameterError(f"seeds must be >= 1, got {seeds}")
    pool = set(resolution.pool_ids)
    pool_rows = [view.index.row_of(i) for i in sorted(pool)]
    if seeds > len(pool_rows):
        log.warning("seeds=%d exceeds eligible pool of %d; clamping", seeds, len(pool_rows))
        seeds = len(pool_rows)
    rng = np.random.default_rng(rng_seed)
    seeded = rng.choice(len(pool_rows), size=seeds, replace=False)
    retained = {r for r in range(view.index.n) if int(view.ids[r]) not in pool}
    retained.update(pool_rows[int(s)] for s in seeded)
    remaining = [r for r in pool_rows if r not in retained]

    matrix, ids, labels = view.index.matrix, view.ids, view.labels
    while True:
        moved = False
        still = []
        s_rows = np.fromiter(sorted(retained), dtype=np.intp)
        s_matrix, s_ids = matrix[s_rows], ids[s_rows]
        for r in remaining:
            pos = nearest_among(s_matrix, s_ids, matrix[r])
            if labels[s_rows[pos]] != labels[r]:
                retained.add(r)
                s_rows = np.fromiter(sorted(retained), dtype=np.intp)
                s_matrix, s_ids = matrix[s_rows], ids[s_rows]
                moved = True
            else:
                still.append(r)
        remaining = still
        if not moved:
            break
    return frozenset(int(ids[r]) for r in remaining)


def _vote_disagrees(neighbor_labels: np.ndarray, own: int) -> bool:
    # flagged unless the own label is the strict plurality winner
    counts = np.bincount(neighbor_labels)
    own_count = counts[own] if own < len(counts) else 0
    counts = counts.copy()
    if own < len(counts):
        counts[own] = -1
    return own_count <= counts.max()


def edited_nn(view: TrainView, k: int, resolution: ScopeResolution) -> frozenset:
    """In-scope ids whose k-neighbor vote disagrees with their own label
    (ties count as disagreement)."""
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    k = min(k, view.index.n - 1)
    neigh = view.index.kneighbors(k)
    flagged = []
    scope = set(resolution.pool_ids)
    for r in range(view.index.n):
        i = int(view.ids[r])
        if i not in scope:
            continue
        if _vote_disagrees(view.labels[neigh[r]], int(view.labels[r])):
            flagged.append(i)
    return frozenset(flagged)


def oss(view: TrainView, scope: SamplingScope, seeds: int, rng_seed: int,
        dataset_hash: str = "") -> UndersampleSuggestion:
    """One-sided selection: boundary pairs plus 1-NN-redundant interior points."""
    res = resolve_scope(view, scope, "under")
    eligible = set(res.eligible_ids)
    removals = {}
    redundant = condensed_nn(view, seeds, res, rng_seed)
    for i in redundant & eligible:
        removals[i] = RemovalReason.REDUNDANT_CNN
    for a, b in tomek_links(view.index, view.labels):
        for member in (a, b):
            if member in eligible:
                removals[member] = RemovalReason.TOMEK_LINK
    return UndersampleSuggestion("oss", {"seeds": seeds, "rng_seed": rng_seed},
                                 removals, dataset_hash)


def ncr(view: TrainView, scope: SamplingScope, k: int, threshold: float,
        dataset_hash: str = "") -> UndersampleSuggestion:
    """Neighborhood cleaning: k-NN-vote noise in scope, plus in-scope
    neighbors that misclassify protected-class instances, gated by relative
    class size."""
    if not 0 < threshold <= 1:
        raise InvalidParameterError(f"threshold must be in (0, 1], got {threshold}")
    res = resolve_scope(view, scope, "under")
    noisy = set(edited_nn(view, k, res))

    counts = view.class_counts()
    largest = counts.max()
    scope_set = set(res.scope_classes)
    k_eff = min(k, view.index.n - 1)
    neigh = view.index.kneighbors(k_eff)
    for r in range(view.index.n):
        own = int(view.labels[r])
        if own in scope_set:
            continue
        if not _vote_disagrees(view.labels[neigh[r]], own):
            continue
        for nb in neigh[r]:
            nb_class = int(view.labels[nb])
            if nb_class == own or nb_class not in scope_set:
                continue
            if counts[nb_class] >= threshold * largest - 1e-12:
                noisy.add(int(view.ids[nb]))

    eligible = set(res.eligible_ids)
    removals = {i: RemovalReason.NOISY_ENN for i in noisy & eligible}
    return UndersampleSuggestion("ncr", {"k": k, "threshold": threshold},
                                 removals, dataset_hash)


def largest_remainder(weights: np.ndarray, total: int) -> np.ndarray:
    """Integer allocation proportional to weights, summing exactly to total;
    leftover units go to the largest fractional parts (ties to lower index)."""
    weights = np.asarray(weights, dtype=np.float64)
    if weights.sum() <= 0:
        raise InvalidParameterError("weights must have positive sum")
    quota = weights * (total / weights.sum())
    base = np.floor(quota).astype(np.int64)
    short = total - int(base.sum())
    if short > 0:
        frac = quota - base
        order = np.lexsort((np.arange(len(weights)), -frac))
        base[order[:short]] += 1
    return base


def _same_class_neighbor_table(view: TrainView, parent_ids, k: int):
    """k nearest same-class eligible neighbors for each parent, as id lists."""
    rows = [view.index.row_of(i) for i in parent_ids]
    sub = NeighborIndex(view.index.matrix[rows], np.asarray(parent_ids))
    k_eff = min(k, sub.n - 1)
    return sub.ids[sub.kneighbors(k_eff)]


def smote(view: TrainView, scope: SamplingScope, k: int, targets: dict,
          rng_seed: int, dataset_hash: str = "") -> OversampleSuggestion:
    """Interpolated synthetic points: parents round-robin over the eligible
    pool, neighbor uniform among each parent's k same-class eligible
    neighbors, blend factor uniform in [0, 1]."""
    res = resolve_scope(view, scope, "over")
    rng = np.random.default_rng(rng_seed)
    points = []
    eligible = set(res.eligible_ids)
    for c in sorted(targets):
        need = int(targets[c])
        if need == 0:
            continue
        if c not in res.scope_classes:
            raise InvalidParameterError(f"class {c} is outside the sampling scope")
        parents = sorted(i for i in eligible if view.labels[view.index.row_of(i)] == c)
        if len(parents) < 2:
            raise DegenerateClassError(
                f"class {c} has {len(parents)} eligible parent(s); need at least 2",
                class_name=str(c))
        table = _same_class_neighbor_table(view, parents, k)
        for t in range(need):
            row = t % len(parents)
            parent = parents[row]
            nb = int(table[row][rng.integers(0, table.shape[1])])
            lam = float(rng.random())
            p_raw = view.raw[view.index.row_of(parent)]
            n_raw = view.raw[view.index.row_of(nb)]
            feats = p_raw + lam * (n_raw - p_raw)
            points.append(SyntheticPoint(feats, c, parent, nb, lam))
    return OversampleSuggestion("smote", {"k": k, "targets": {int(c): int(v) for c, v in targets.items()},
                                          "rng_seed": rng_seed},
                                tuple(points), dataset_hash)


def adasyn(view: TrainView, scope: SamplingScope, k: int, total: int,
           rng_seed: int, dataset_hash: str = "",
           jitter: float = ADASYN_JITTER) -> OversampleSuggestion:
    """Density-weighted synthetic points: parents with more other-class
    neighbors generate more, then a small uniform jitter is added per
    coordinate (scaled from normalized units)."""
    if total <= 0:
        raise InvalidParameterError(f"total must be positive, got {total}")
    res = resolve_scope(view, scope, "over")
    eligible = set(res.eligible_ids)

    pool = sorted(res.pool_ids)
    pool_rows = [view.index.row_of(i) for i in pool]
    pool_index = NeighborIndex(view.index.matrix[pool_rows], np.asarray(pool))
    pool_labels = view.labels[pool_rows]
    k_pool = min(k, pool_index.n - 1)
    pool_neigh = pool_index.kneighbors(k_pool)

    pool_row = {p: r for r, p in enumerate(pool)}
    parents = sorted(eligible)
    ratios = np.zeros(len(parents))
    for j, p in enumerate(parents):
        r = pool_row[p]
        own = pool_labels[r]
        ratios[j] = float((pool_labels[pool_neigh[r]] != own).sum()) / k_pool
    if ratios.sum() == 0:
        ratios = np.ones(len(parents))
    counts = largest_remainder(ratios, total)

    tables = {}
    for c in sorted({int(view.labels[view.index.row_of(p)]) for p in parents}):
        class_parents = [p for p in parents if view.labels[view.index.row_of(p)] == c]
        if len(class_parents) < 2:
            if any(counts[parents.index(p)] > 0 for p in class_parents):
                raise DegenerateClassError(
                    f"class {c} has {len(class_parents)} eligible parent(s); need at least 2",
                    class_name=str(c))
            continue
        rows = {p: r for r, p in enumerate(class_parents)}
        tables[c] = (rows, _same_class_neighbor_table(view, class_parents, k))

    rng = np.random.default_rng(rng_seed)
    points = []
    for j, p in enumerate(parents):
        g = int(counts[j])
        if g == 0:
            continue
        c = int(view.labels[view.index.row_of(p)])
        rows, table = tables[c]
        row = rows[p]
        for _ in range(g):
            nb = int(table[row][rng.integers(0, table.shape[1])])
            lam = float(rng.random())
            p_raw = view.raw[view.index.row_of(p)]
            n_raw = view.raw[view.index.row_of(nb)]
            base = p_raw + lam * (n_raw - p_raw)
            feats = base + rng.uniform(-jitter, jitter, size=len(base)) * view.spread
            points.append(SyntheticPoint(feats, c, p, nb, lam))
    return OversampleSuggestion("adasyn", {"k": k, "total": int(total), "rng_seed": rng_seed,
                                           "jitter": jitter},
                                tuple(points), dataset_hash)


def filter_suggestion(suggestion, accepted):
    """Keep only the accepted removals or synthetic-point indices."""
    if isinstance(suggestion, UndersampleSuggestion):
        accepted = {int(a) for a in accepted}
        unknown = accepted - set(suggestion.removals)
        if unknown:
            raise UnknownInstanceError(f"accepted ids not in suggestion: {sorted(unknown)}")
        rejected = len(suggestion.removals) - len(accepted)
        if rejected:
            log.info("rejected %d of %d removal suggestions", rejected, len(suggestion.removals))
        kept = {i: r for i, r in suggestion.removals.items() if i in accepted}
        return UndersampleSuggestion(suggestion.algorithm, suggestion.params,
                                     kept, suggestion.dataset_hash)
    accepted = sorted({int(a) for a in accepted})
    if accepted and (accepted[0] < 0 or accepted[-1] >= len(suggestion.points)):
        raise UnknownInstanceError("accepted point index out of range")
    rejected = len(suggestion.points) - len(accepted)
    if rejected:
        log.info("rejected %d of %d synthetic points", rejected, len(suggestion.points))
    return OversampleSuggestion(suggestion.algorithm, suggestion.params,
                                tuple(suggestion.points[i] for i in accepted),
                                suggestion.dataset_hash)
