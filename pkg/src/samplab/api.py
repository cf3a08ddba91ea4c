"""HTTP/JSON service exposing the session workflow.

Every handler is a thin serialization layer over the session module. Writes
(confirm, import) serialize through a per-session lock; training runs as a
background job polled at /jobs/{id}, and read endpoints serve the last
completed state.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .datasets import LabeledDataset, load_csv
from .errors import NotFoundError, SamplabError
from .instance_types import InstanceType
from .session import Session, SessionConfig, canonical_json, import_session, parse_model_config

STATUS_BY_CODE = {
    "dataset_load": 400,
    "cannot_stratify": 400,
    "unknown_instance": 400,
    "test_set_violation": 400,
    "invalid_parameter": 400,
    "empty_scope": 400,
    "import_schema": 400,
    "dataset_mismatch": 400,
    "not_found": 404,
    "stale_suggestion": 409,
    "job_running": 409,
    "degenerate_training": 422,
    "internal_error": 500,
}


class JobRunningError(SamplabError):
    code = "job_running"


@dataclass
class Job:
    id: str
    status: str = "queued"  # queued | running | done | failed
    progress: float = 0.0
    result: dict | None = None
    error: dict | None = None


@dataclass
class SessionRuntime:
    session: Session
    label_column: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    active_job: str | None = None


class ScopeBody(BaseModel):
    class_scope: str = "all"
    included_types: list[str] | None = None
    exclusion: str = "per_class_exclusion"


class CreateSessionBody(BaseModel):
    dataset_id: str
    train_fraction: float = 0.75
    split_seed: int = 0
    projection_seed: int = 0
    model: dict = {}


class SelectProjectionBody(BaseModel):
    n_neighbors: int


class ProposeBody(BaseModel):
    algorithm: str
    params: dict = {}
    scope: ScopeBody = ScopeBody()


class ConfirmBody(BaseModel):
    suggestion_id: str
    accepted_ids: list[int] | None = None
    accepted_indices: list[int] | None = None


def create_app(data_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="samplab", version="0.1.0")
    datasets: dict[str, tuple[LabeledDataset, str]] = {}
    sessions: dict[str, SessionRuntime] = {}
    jobs: dict[str, Job] = {}
    suggestions: dict[str, object] = {}
    store = Path(data_dir) if data_dir else None
    if store:
        store.mkdir(parents=True, exist_ok=True)

    @app.exception_handler(SamplabError)
    async def _samplab_error(_: Request, exc: SamplabError):
        details = {}
        if getattr(exc, "current_version", None):
            details["current_version"] = exc.current_version
        if getattr(exc, "class_name", None):
            details["class"] = exc.class_name
        return JSONResponse(
            status_code=STATUS_BY_CODE.get(exc.code, 500),
            content={"code": exc.code, "message": str(exc), "details": details},
        )

    def runtime_of(session_id: str) -> SessionRuntime:
        if session_id not in sessions:
            raise NotFoundError(f"unknown session {session_id}")
        return sessions[session_id]

    def report_payload(session: Session) -> dict:
        return session.report.to_payload()

    def types_payload(session: Session) -> dict:
        dist = session.distribution()
        return {
            "active_k": session.active_k,
            "assignments": [
                {"id": a.instance_id, "type": a.type.value,
                 "same_class_count": a.same_class_count,
                 "class": int(session.train_labels[row])}
                for row, a in enumerate(session.assignments)
            ],
            "distribution": {
                "total": dist.total,
                "per_type": {t.value: dist.per_type[t] for t in InstanceType},
                "per_class": [
                    {"class": c, "type": t.value, "count": dist.per_class[(c, t)]}
                    for c in range(len(session.current.class_names))
                    for t in InstanceType
                ],
            },
            "class_names": list(session.current.class_names),
        }

    @app.post("/datasets", status_code=201)
    async def upload_dataset(file: UploadFile = File(...), label_column: str = Form(...)):
        raw = await file.read()
        name = Path(file.filename or "dataset.csv").name
        target = (store / name) if store else Path("/tmp") / f"samplab-{uuid.uuid4().hex}.csv"
        target.write_bytes(raw)
        ds = load_csv(target, label_column)
        h = ds.content_hash()
        datasets[h] = (ds, label_column)
        return {"dataset_id": h,
                "classes": list(ds.class_names),
                "class_counts": ds.class_counts().tolist(),
                "n_features": ds.n_features,
                "n_instances": ds.n_instances}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if body.dataset_id not in datasets:
            raise NotFoundError(f"unknown dataset {body.dataset_id}")
        ds, label_column = datasets[body.dataset_id]
        config = SessionConfig(
            train_fraction=body.train_fraction,
            split_seed=body.split_seed,
            projection_seed=body.projection_seed,
            model=parse_model_config(body.model),
        )
        session = Session(ds, config)
        sid = uuid.uuid4().hex
        sessions[sid] = SessionRuntime(session=session, label_column=label_column)
        return {"session_id": sid,
                "report": report_payload(session),
                "types": types_payload(session)}

    @app.get("/sessions/{session_id}/projections")
    def get_projections(session_id: str):
        rt = runtime_of(session_id)
        with rt.lock:
            grid = rt.session.projections
        return {"candidates": [c.to_payload() for c in grid],
                "active_k": rt.session.active_k}

    @app.post("/sessions/{session_id}/projection")
    def select_projection(session_id: str, body: SelectProjectionBody):
        rt = runtime_of(session_id)
        with rt.lock:
            step = rt.session.select_projection(body.n_neighbors)
        return {"active_k": rt.session.active_k, "step": step.to_payload()}

    @app.get("/sessions/{session_id}/types")
    def get_types(session_id: str):
        return types_payload(runtime_of(session_id).session)

    @app.post("/sessions/{session_id}/propose")
    def propose(session_id: str, body: ProposeBody):
        rt = runtime_of(session_id)
        included = None
        if body.scope.included_types is not None:
            included = {InstanceType(t) for t in body.scope.included_types}
        scope = rt.session._scope(body.scope.class_scope, included, body.scope.exclusion)
        with rt.lock:
            suggestion = rt.session.propose(body.algorithm, body.params, scope)
        sug_id = uuid.uuid4().hex
        suggestions[sug_id] = suggestion
        return {"suggestion_id": sug_id, "suggestion": suggestion.to_payload()}

    @app.post("/sessions/{session_id}/confirm", status_code=202)
    def confirm(session_id: str, body: ConfirmBody):
        rt = runtime_of(session_id)
        if body.suggestion_id not in suggestions:
            raise NotFoundError(f"unknown suggestion {body.suggestion_id}")
        suggestion = suggestions[body.suggestion_id]
        # staleness is checked before the job is queued so the client gets an
        # immediate 409 rather than a failed job
        if suggestion.dataset_hash and suggestion.dataset_hash != rt.session.version_hash:
            from .errors import StaleSuggestionError
            raise StaleSuggestionError("suggestion was generated against an older dataset version",
                                       current_version=rt.session.version_hash)
        if rt.active_job and jobs[rt.active_job].status in ("queued", "running"):
            raise JobRunningError("a training job is already running for this session")

        from .sampling import UndersampleSuggestion
        accepted = body.accepted_ids if isinstance(suggestion, UndersampleSuggestion) \
            else body.accepted_indices
        job = Job(id=uuid.uuid4().hex)
        jobs[job.id] = job
        rt.active_job = job.id

        def work():
            job.status = "running"
            try:
                with rt.lock:
                    rt.session.progress_callback = lambda p: setattr(job, "progress", p)
                    try:
                        step = rt.session.confirm(suggestion, accepted=accepted)
                    finally:
                        rt.session.progress_callback = None
                job.result = {"step": step.to_payload(),
                              "report": report_payload(rt.session)}
                job.progress = 1.0
                job.status = "done"
            except SamplabError as e:
                job.error = {"code": e.code, "message": str(e)}
                job.status = "failed"
            except Exception as e:  # pragma: no cover - defensive
                job.error = {"code": "internal_error", "message": str(e)}
                job.status = "failed"

        threading.Thread(target=work, daemon=True).start()
        return {"job_id": job.id}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        if job_id not in jobs:
            raise NotFoundError(f"unknown job {job_id}")
        job = jobs[job_id]
        out = {"job_id": job.id, "status": job.status, "progress": job.progress}
        if job.result is not None:
            out["result"] = job.result
        if job.error is not None:
            out["error"] = job.error
        return out

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        return report_payload(runtime_of(session_id).session)

    @app.get("/sessions/{session_id}/steps")
    def get_steps(session_id: str):
        s = runtime_of(session_id).session
        return {"steps": [st.to_payload() for st in s.steps],
                "flows": [f.to_payload() for f in s.flows],
                "deltas": s.deltas()}

    @app.get("/sessions/{session_id}/overlay")
    def get_overlay(session_id: str):
        rt = runtime_of(session_id)
        with rt.lock:
            overlay = rt.session.overlay_test()
            coords = rt.session.active_embedding()
        payload = overlay.to_payload()
        payload["train_coords"] = {str(i): [float(a), float(b)]
                                   for i, (a, b) in zip(rt.session.index.ids, coords)}
        return payload

    @app.get("/sessions/{session_id}/export")
    def export_session(session_id: str):
        rt = runtime_of(session_id)
        with rt.lock:
            blob = rt.session.export_json()
        return PlainTextResponse(blob, media_type="application/json")

    @app.post("/sessions/{session_id}/import")
    def import_into(session_id: str, payload: dict):
        rt = runtime_of(session_id)
        declared = payload.get("dataset", {}).get("hash")
        if declared not in datasets:
            raise NotFoundError(f"dataset {declared!r} is not uploaded")
        ds, _ = datasets[declared]
        with rt.lock:
            rt.session = import_session(payload, ds)
        return {"report": report_payload(rt.session),
                "steps": len(rt.session.steps)}

    return app
