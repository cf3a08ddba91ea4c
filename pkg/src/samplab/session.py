"""Mutable workflow state: typing, proposals, confirmations, and history.

A session owns the only mutable view of a curation run. Dataset versions are
immutable; every confirmed suggestion appends a step with metrics before and
after retraining, plus Sankey flows recording where removed instances came
from and where synthetic ones landed. Exports are canonical JSON and replays
are bit-deterministic given the recorded seeds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_K, K_MAX, K_MIN, SCHEMA_VERSION, ModelConfig, SessionConfig
from .datasets import (
    LabeledDataset,
    SplitAssignment,
    SyntheticRow,
    apply_step,
    normalize_minmax,
    stratified_split,
    train_ids_of,
)
from .errors import (
    InvalidParameterError,
    NotFoundError,
    SamplabError,
    SessionImportError,
    StaleSuggestionError,
)
from .instance_types import (
    InstanceType,
    assignments_by_id,
    classify_types,
    type_distribution,
)
from .model import train
from .neighbors import NeighborIndex
from .projection import auto_min_dist, embed, projection_grid
from .sampling import (
    ClassScope,
    OversampleExclusion,
    OversampleSuggestion,
    SamplingScope,
    SyntheticPoint,
    TrainView,
    UndersampleSuggestion,
    adasyn,
    filter_suggestion,
    ncr,
    oss,
    smote,
)

US_BIN = "us_bin"
OS_BIN = "os_bin"

STEP_KINDS = ("train", "select_projection", "undersample", "oversample", "toggle_types")


@dataclass(frozen=True)
class SessionStep:
    index: int
    kind: str
    algorithm: str | None
    params: dict
    removals: tuple
    additions: tuple  # synthetic point payload dicts
    metrics_before: dict
    metrics_after: dict

    def to_payload(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "algorithm": self.algorithm,
            "params": self.params,
            "removals": list(self.removals),
            "additions": [dict(a) for a in self.additions],
            "metrics_before": self.metrics_before,
            "metrics_after": self.metrics_after,
        }


@dataclass(frozen=True)
class SankeyFlow:
    source: str   # instance type the instances held before the step
    target: str   # us_bin / os_bin
    count: int
    step_index: int

    def to_payload(self) -> dict:
        return {"source": self.source, "target": self.target,
                "count": self.count, "step_index": self.step_index}


@dataclass(frozen=True)
class TestConfusionOverlay:
    ids: tuple
    positions: np.ndarray
    true_classes: tuple
    predicted_classes: tuple

    @property
    def correct(self) -> tuple:
        return tuple(t == p for t, p in zip(self.true_classes, self.predicted_classes))

    def to_payload(self) -> dict:
        return {
            "points": [
                {"id": i, "x": float(x), "y": float(y), "true_class": t,
                 "predicted_class": p, "correct": t == p}
                for i, (x, y), t, p in zip(self.ids, self.positions,
                                           self.true_classes, self.predicted_classes)
            ]
        }


def _metrics(report) -> dict:
    return report.metrics()


class Session:
    """Single-writer curation workflow over one dataset."""

    def __init__(self, dataset: LabeledDataset, config: SessionConfig):
        self.config = config
        self.dataset0 = dataset
        self.split: SplitAssignment = stratified_split(
            dataset, config.train_fraction, config.split_seed)
        self.versions: list[LabeledDataset] = [dataset]
        self.active_k = DEFAULT_K
        self.included_types = frozenset(InstanceType)
        self.steps: list[SessionStep] = []
        self.flows: list[SankeyFlow] = []
        self._grid = None
        self._embedding_cache: dict = {}
        self._min_dist_cache: dict = {}
        self.progress_callback = None
        self._refresh()
        report = self._train()
        self._append_step("train", None, {"seed": config.model.seed}, (), (),
                          _metrics(report), _metrics(report))

    # -- state ------------------------------------------------------------

    @property
    def current(self) -> LabeledDataset:
        return self.versions[-1]

    @property
    def version_hash(self) -> str:
        return self.current.content_hash()

    def train_ids(self) -> list[int]:
        return train_ids_of(self.current, self.split)

    def _refresh(self):
        ds = self.current
        self.stats = normalize_minmax(ds, self.split)
        tids = self.train_ids()
        rows = ds.rows_for_ids(tids)
        self.train_matrix = self.stats.transform(ds.instances[rows])
        self.train_labels = ds.labels[rows]
        self.index = NeighborIndex(self.train_matrix, np.asarray(tids))
        self.assignments = classify_types(self.index, self.train_labels, self.active_k)
        self.types = assignments_by_id(self.assignments)
        self.view = TrainView(index=self.index, raw=ds.instances[rows],
                              labels=self.train_labels, types=self.types,
                              spread=self.stats.spread)

    def _train(self):
        ds = self.current
        tids = self.train_ids()
        teids = sorted(self.split.test_ids)
        tr = ds.rows_for_ids(tids)
        te = ds.rows_for_ids(teids)
        self.model, self.report = train(
            ds.instances[tr], ds.labels[tr], tids,
            ds.instances[te], ds.labels[te], teids,
            ds.class_names, self.config.model,
            progress=self.progress_callback)
        return self.report

    def _append_step(self, kind, algorithm, params, removals, additions,
                     before, after):
        step = SessionStep(len(self.steps), kind, algorithm, params,
                           tuple(removals), tuple(additions), before, after)
        self.steps.append(step)
        return step

    # -- projections -------------------------------------------------------

    @property
    def projections(self):
        """Lazy 9-candidate grid over the initial training matrix."""
        if self._grid is None:
            ds = self.dataset0
            tids = [i for i in sorted(self.split.train_ids)]
            stats0 = normalize_minmax(ds, self.split)
            matrix = stats0.transform(ds.instances[ds.rows_for_ids(tids)])
            self._grid = projection_grid(matrix, self.config.projection_seed)
        return self._grid

    def select_projection(self, n_neighbors: int):
        """Adopt a grid candidate: its neighborhood size becomes the global k
        for typing and sampler defaults. The grid holds exactly one candidate
        per k in the legal range, so membership equals the range check and
        coordinates stay lazily derived."""
        if not K_MIN <= n_neighbors <= K_MAX or n_neighbors >= self.index.n:
            raise NotFoundError(f"no projection candidate with n_neighbors={n_neighbors}")
        self.active_k = n_neighbors
        self._refresh()
        m = _metrics(self.report)
        return self._append_step("select_projection", None,
                                 {"n_neighbors": n_neighbors}, (), (), m, m)

    def toggle_types(self, included) -> SessionStep:
        included = frozenset(included)
        if not included:
            raise InvalidParameterError("at least one instance type must stay active")
        self.included_types = included
        m = _metrics(self.report)
        return self._append_step("toggle_types", None,
                                 {"included": sorted(t.value for t in included)},
                                 (), (), m, m)

    def active_min_dist(self) -> float:
        key = (len(self.versions) - 1, self.active_k)
        if key not in self._min_dist_cache:
            md, _ = auto_min_dist(self.train_matrix, self.active_k,
                                  self.config.projection_seed)
            self._min_dist_cache[key] = md
        return self._min_dist_cache[key]

    def active_embedding(self) -> np.ndarray:
        key = (len(self.versions) - 1, self.active_k)
        if key not in self._embedding_cache:
            self._embedding_cache[key] = embed(
                self.train_matrix, self.active_k, self.active_min_dist(),
                self.config.projection_seed)
        return self._embedding_cache[key]

    # -- proposals ----------------------------------------------------------

    def _scope(self, class_scope, included_types=None, exclusion=None) -> SamplingScope:
        return SamplingScope(
            ClassScope(class_scope),
            frozenset(included_types) if included_types else self.included_types,
            OversampleExclusion(exclusion) if exclusion
            else OversampleExclusion.PER_CLASS_EXCLUSION,
        )

    def balance_targets(self, scope: SamplingScope) -> dict:
        """Default oversampling targets: bring every in-scope class up to the
        largest class's current count."""
        from .sampling import resolve_scope
        res = resolve_scope(self.view, scope, "over")
        counts = self.view.class_counts(len(self.current.class_names))
        top = counts.max()
        return {c: int(top - counts[c]) for c in res.scope_classes if counts[c] < top}

    def propose(self, algorithm: str, params: dict, scope: SamplingScope):
        algorithm = algorithm.lower()
        h = self.version_hash
        k = params.get("k", self.active_k)
        if algorithm == "oss":
            return oss(self.view, scope, int(params.get("seeds", 1)),
                       int(params.get("rng_seed", 0)), dataset_hash=h)
        if algorithm == "ncr":
            return ncr(self.view, scope, int(k), float(params.get("threshold", 0.5)),
                       dataset_hash=h)
        if algorithm == "smote":
            targets = params.get("targets") or self.balance_targets(scope)
            targets = {int(c): int(v) for c, v in targets.items() if int(v) > 0}
            if not targets:
                raise InvalidParameterError("oversampling targets are empty; classes already balanced")
            return smote(self.view, scope, int(k), targets,
                         int(params.get("rng_seed", 0)), dataset_hash=h)
        if algorithm == "adasyn":
            total = params.get("total")
            if total is None:
                total = sum(self.balance_targets(scope).values())
            if int(total) <= 0:
                raise InvalidParameterError("oversampling total is zero; classes already balanced")
            return adasyn(self.view, scope, int(k), int(total),
                          int(params.get("rng_seed", 0)), dataset_hash=h)
        raise InvalidParameterError(f"unknown algorithm {algorithm!r}")

    # -- confirmation --------------------------------------------------------

    def confirm(self, suggestion, accepted=None) -> SessionStep:
        """Apply the accepted subset of a suggestion: new dataset version,
        retyping, retraining, and provenance flows."""
        if suggestion.dataset_hash and suggestion.dataset_hash != self.version_hash:
            raise StaleSuggestionError(
                "suggestion was generated against an older dataset version",
                current_version=self.version_hash)
        if accepted is not None:
            suggestion = filter_suggestion(suggestion, accepted)

        before = _metrics(self.report)
        if isinstance(suggestion, UndersampleSuggestion):
            kind = "undersample"
            removal_ids = suggestion.removal_ids()
            additions = []
        else:
            kind = "oversample"
            removal_ids = []
            additions = list(suggestion.points)

        new_ds = apply_step(self.current, self.split, set(removal_ids),
                            [SyntheticRow(np.asarray(p.features, dtype=np.float64),
                                          p.class_index) for p in additions])
        pre_types = {i: self.types[i].value for i in removal_ids}
        prev_ids = set(self.current.instance_ids.tolist())
        self.versions.append(new_ds)
        try:
            self._refresh()
            after = _metrics(self._train())
        except SamplabError:
            self.versions.pop()
            self._refresh()
            raise

        step_index = len(self.steps)
        if removal_ids:
            counts: dict[str, int] = {}
            for i in removal_ids:
                counts[pre_types[i]] = counts.get(pre_types[i], 0) + 1
            for t in sorted(counts):
                self.flows.append(SankeyFlow(t, US_BIN, counts[t], step_index))
        if additions:
            new_ids = [int(i) for i in new_ds.instance_ids if int(i) not in prev_ids]
            counts = {}
            for i in new_ids:
                t = self.types[i].value
                counts[t] = counts.get(t, 0) + 1
            for t in sorted(counts):
                self.flows.append(SankeyFlow(t, OS_BIN, counts[t], step_index))

        payload_additions = tuple(p.to_payload() for p in additions)
        return self._append_step(kind, suggestion.algorithm, dict(suggestion.params),
                                 tuple(removal_ids), payload_additions, before, after)

    # -- derived views --------------------------------------------------------

    def distribution(self):
        return type_distribution(self.assignments, self.train_labels,
                                 len(self.current.class_names))

    def deltas(self) -> list[dict]:
        out = []
        for s in self.steps:
            out.append({
                "step_index": s.index,
                "delta_balanced_accuracy": s.metrics_after["test"]["balanced_accuracy"]
                - s.metrics_before["test"]["balanced_accuracy"],
                "delta_f1": s.metrics_after["test"]["f1_macro"]
                - s.metrics_before["test"]["f1_macro"],
            })
        return out

    def sankey_conservation_ok(self) -> bool:
        us = sum(f.count for f in self.flows if f.target == US_BIN)
        os_ = sum(f.count for f in self.flows if f.target == OS_BIN)
        original = len(self.split.train_ids)
        return original - us + os_ == len(self.train_ids())

    def overlay_test(self) -> TestConfusionOverlay:
        """Anchor each test instance at the inverse-distance-weighted centroid
        of its 3 nearest training points in the current embedding."""
        coords = self.active_embedding()
        ds = self.current
        teids = sorted(self.split.test_ids)
        test_norm = self.stats.transform(ds.instances[ds.rows_for_ids(teids)])
        k = min(3, self.index.n)
        neigh = self.index.kneighbors_of(test_norm, k)
        positions = np.zeros((len(teids), 2))
        for q in range(len(teids)):
            anchors = neigh[q]
            d = np.sqrt(((self.train_matrix[anchors] - test_norm[q]) ** 2).sum(axis=1))
            if d.min() == 0.0:
                hit = anchors[d == 0.0]
                positions[q] = coords[hit].mean(axis=0)
            else:
                w = 1.0 / (d + 1e-9)
                positions[q] = (coords[anchors] * w[:, None]).sum(axis=0) / w.sum()
        probs = self.report.per_instance_probs
        predicted = tuple(int(np.argmax(probs[i])) for i in teids)
        true = tuple(int(ds.labels[ds.rows_for_ids([i])[0]]) for i in teids)
        return TestConfusionOverlay(tuple(teids), positions, true, predicted)

    # -- persistence ------------------------------------------------------------

    def export_payload(self) -> dict:
        cfg = self.config
        return {
            "schema_version": SCHEMA_VERSION,
            "dataset": {
                "hash": self.dataset0.content_hash(),
                "n_instances": self.dataset0.n_instances,
                "n_features": self.dataset0.n_features,
                "class_names": list(self.dataset0.class_names),
            },
            "config": {
                "train_fraction": cfg.train_fraction,
                "split_seed": cfg.split_seed,
                "projection_seed": cfg.projection_seed,
                "model": {
                    "search_iterations": cfg.model.search_iterations,
                    "cv_folds": cfg.model.cv_folds,
                    "n_estimators_range": list(cfg.model.n_estimators_range),
                    "max_depth_range": list(cfg.model.max_depth_range),
                    "learning_rate_range": list(cfg.model.learning_rate_range),
                    "subsample_range": list(cfg.model.subsample_range),
                    "reg_lambda": cfg.model.reg_lambda,
                    "seed": cfg.model.seed,
                },
            },
            "active_k": self.active_k,
            "included_types": sorted(t.value for t in self.included_types),
            "steps": [s.to_payload() for s in self.steps],
            "flows": [f.to_payload() for f in self.flows],
            "final_metrics": _metrics(self.report),
        }

    def export_json(self) -> str:
        return canonical_json(self.export_payload())


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def start_session(dataset: LabeledDataset, config: SessionConfig | None = None,
                  **overrides) -> Session:
    if config is None:
        model = overrides.pop("model", None) or ModelConfig()
        config = SessionConfig(model=model, **overrides)
    return Session(dataset, config)


def parse_model_config(payload: dict) -> ModelConfig:
    return ModelConfig(
        search_iterations=int(payload.get("search_iterations", 25)),
        cv_folds=int(payload.get("cv_folds", 5)),
        n_estimators_range=tuple(payload.get("n_estimators_range", (20, 120))),
        max_depth_range=tuple(payload.get("max_depth_range", (2, 5))),
        learning_rate_range=tuple(payload.get("learning_rate_range", (0.05, 0.3))),
        subsample_range=tuple(payload.get("subsample_range", (0.7, 1.0))),
        reg_lambda=float(payload.get("reg_lambda", 1.0)),
        seed=int(payload.get("seed", 0)),
    )


def _parse_config(payload: dict) -> SessionConfig:
    return SessionConfig(
        train_fraction=float(payload.get("train_fraction", 0.75)),
        split_seed=int(payload.get("split_seed", 0)),
        projection_seed=int(payload.get("projection_seed", 0)),
        model=parse_model_config(payload.get("model", {})),
    )


def import_session(payload, dataset: LabeledDataset) -> Session:
    """Rebuild a session by replaying an export (or a replay script, which is
    the same schema minus the computed fields) against its dataset."""
    if isinstance(payload, str):
        try:
            payload = json.loads(payload)
        except json.JSONDecodeError as e:
            raise SessionImportError(f"invalid JSON: {e}") from None
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SessionImportError(
            f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")
    declared = payload.get("dataset", {}).get("hash")
    if declared and declared != dataset.content_hash():
        from .errors import DatasetMismatchError
        raise DatasetMismatchError(
            f"dataset hash {dataset.content_hash()[:12]}... does not match script {declared[:12]}...")

    steps = payload.get("steps", [])
    for s in steps:
        kind = s.get("kind")
        if kind not in STEP_KINDS:
            raise SessionImportError(f"unknown step kind {kind!r} at index {s.get('index')}")

    session = Session(dataset, _parse_config(payload.get("config", {})))
    for s in steps:
        kind = s["kind"]
        try:
            if kind == "train":
                continue  # baseline happens at construction
            if kind == "select_projection":
                session.select_projection(int(s["params"]["n_neighbors"]))
            elif kind == "toggle_types":
                session.toggle_types(InstanceType(v) for v in s["params"]["included"])
            elif kind == "undersample":
                sug = UndersampleSuggestion(
                    s.get("algorithm") or "manual", dict(s.get("params", {})),
                    {int(i): _reason_of(i, s) for i in s.get("removals", [])},
                    dataset_hash=session.version_hash)
                session.confirm(sug)
            elif kind == "oversample":
                points = tuple(
                    SyntheticPoint(np.asarray(a["vector"], dtype=np.float64),
                                   int(a["class"]), int(a["parent"]),
                                   int(a["neighbor"]), float(a["lambda"]))
                    for a in s.get("additions", []))
                sug = OversampleSuggestion(s.get("algorithm") or "manual",
                                           dict(s.get("params", {})), points,
                                           dataset_hash=session.version_hash)
                session.confirm(sug)
        except SamplabError as e:
            e.args = (f"step {s.get('index')} ({kind}): {e}",) + e.args[1:]
            raise
    return session


def _reason_of(i, step_payload):
    from .sampling import RemovalReason
    for r in step_payload.get("removal_reasons", []):
        if int(r.get("id", -1)) == int(i):
            return RemovalReason(r["reason"])
    return RemovalReason.NOISY_ENN
