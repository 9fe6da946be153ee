"""HTTP JSON API exposing cleaning sessions for the web UI.

Sessions persist on disk under the service's data directory as the raw
CSV plus JSON metadata and, once cleaning finishes, the CleanResult
document, so a restarted server still serves finished sessions.  Cleaning
runs in a background thread per session; a session accepts one job at a
time.  User-defined imputation code is deliberately not accepted over
HTTP; only the built-in methods can be selected.
"""

from __future__ import annotations

import json
import logging
import threading
import uuid
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from pydantic import BaseModel, Field

from .anomaly import AnomalyConfig
from .benchmark import BenchmarkConfig
from .errors import CleaningError, IrreversibleChange, UnknownChangeId
from .imputation import DEFAULT_METHODS, default_registry
from .ingest import coerce_values, read_csv
from .model import (
    CleanResult,
    result_from_json,
    result_to_dict,
    result_to_json,
    revert,
)
from .pipeline import clean, summary_stats
from .report import generate_report
from .timestamps import render_instant
from .windows import parse_interval_spec, split_windows
from .errors import BadSpec

logger = logging.getLogger(__name__)

MAX_UPLOAD_BYTES = 100 * 1024 * 1024
_PREVIEW_ROWS = 10
_STATS_KEYS = ("min", "q1", "median", "mean", "q3", "max")


class CleanRequest(BaseModel):
    date_format: str
    time: Optional[str] = None
    value: Optional[str] = None
    methods: list[str] = Field(default_factory=lambda: list(DEFAULT_METHODS))
    replace_outliers: bool = True
    alpha: float = 0.05
    period: Optional[int] = None
    seed: int = 0
    sim_fraction: float = 0.10
    repetitions: int = 5


class RevertRequest(BaseModel):
    change_ids: list[int]


def _error(status: int, code: str, message: str, stage: str = "service") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "stage": stage},
    )


class SessionStore:
    """Disk-backed session registry; one folder per session."""

    def __init__(self, data_dir: Path):
        self.data_dir = data_dir
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._meta: dict[str, dict] = {}
        self._results: dict[str, CleanResult] = {}
        for meta_path in self.data_dir.glob("*/meta.json"):
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            if meta.get("status") == "cleaning":
                # A restart killed the worker; surface that honestly.
                meta["status"] = "failed"
                meta["error"] = {"code": "interrupted",
                                 "message": "server restarted during cleaning",
                                 "stage": "clean"}
                meta_path.write_text(json.dumps(meta), encoding="utf-8")
            self._meta[meta["id"]] = meta

    def _dir(self, session_id: str) -> Path:
        return self.data_dir / session_id

    def create(self, csv_bytes: bytes) -> dict:
        session_id = uuid.uuid4().hex[:12]
        folder = self._dir(session_id)
        folder.mkdir(parents=True)
        (folder / "raw.csv").write_bytes(csv_bytes)
        table = read_csv(folder / "raw.csv")
        preview = [
            [col[r] for col in table.columns]
            for r in range(min(_PREVIEW_ROWS, table.row_count))
        ]
        summaries = {}
        for name, col in zip(table.column_names, table.columns):
            values, _ = coerce_values(col)
            finite = values[~np.isnan(values)]
            if table.row_count and len(finite) >= table.row_count / 2:
                summaries[name] = dict(zip(_STATS_KEYS, summary_stats(finite)))
        meta = {
            "id": session_id,
            "status": "uploaded",
            "columns": table.column_names,
            "row_count": table.row_count,
            "preview": preview,
            "value_summaries": summaries,
            "config": None,
            "error": None,
        }
        with self._lock:
            self._meta[session_id] = meta
        self._persist_meta(session_id)
        return meta

    def _persist_meta(self, session_id: str) -> None:
        meta = self._meta[session_id]
        (self._dir(session_id) / "meta.json").write_text(
            json.dumps(meta), encoding="utf-8"
        )

    def get(self, session_id: str) -> Optional[dict]:
        return self._meta.get(session_id)

    def try_start_clean(self, session_id: str, config: dict) -> bool:
        with self._lock:
            meta = self._meta[session_id]
            if meta["status"] == "cleaning":
                return False
            meta["status"] = "cleaning"
            meta["config"] = config
            meta["error"] = None
            self._results.pop(session_id, None)
        self._persist_meta(session_id)
        return True

    def finish(self, session_id: str, result: CleanResult) -> None:
        (self._dir(session_id) / "result.json").write_text(
            result_to_json(result), encoding="utf-8"
        )
        with self._lock:
            self._results[session_id] = result
            self._meta[session_id]["status"] = "done"
        self._persist_meta(session_id)

    def fail(self, session_id: str, code: str, message: str, stage: str) -> None:
        result_path = self._dir(session_id) / "result.json"
        if result_path.exists():
            result_path.unlink()
        with self._lock:
            self._results.pop(session_id, None)
            meta = self._meta[session_id]
            meta["status"] = "failed"
            meta["error"] = {"code": code, "message": message, "stage": stage}
        self._persist_meta(session_id)

    def result(self, session_id: str) -> Optional[CleanResult]:
        if session_id in self._results:
            return self._results[session_id]
        path = self._dir(session_id) / "result.json"
        if not path.exists():
            return None
        result = result_from_json(path.read_text(encoding="utf-8"))
        self._results[session_id] = result
        return result

    def update_result(self, session_id: str, result: CleanResult) -> None:
        self.finish(session_id, result)

    def raw_path(self, session_id: str) -> Path:
        return self._dir(session_id) / "raw.csv"


def _run_clean_job(store: SessionStore, session_id: str, req: CleanRequest) -> None:
    try:
        table = read_csv(store.raw_path(session_id))
        cfg = BenchmarkConfig(
            methods=tuple(req.methods), sim_fraction=req.sim_fraction,
            repetitions=req.repetitions, seed=req.seed,
        )
        a_cfg = AnomalyConfig(
            alpha=req.alpha, period=req.period, replace=req.replace_outliers,
        )
        result = clean(
            table, req.date_format, time=req.time, value=req.value,
            replace_outliers=req.replace_outliers,
            benchmark_cfg=cfg, anomaly_cfg=a_cfg,
        )
        store.finish(session_id, result)
    except CleaningError as exc:
        logger.warning("session %s failed: %s", session_id, exc)
        store.fail(session_id, type(exc).__name__, str(exc), "clean")
    except Exception as exc:  # keep the worker from dying silently
        logger.exception("session %s crashed", session_id)
        store.fail(session_id, "internal", str(exc), "clean")


def create_app(
    data_dir: str | Path,
    max_upload_bytes: int = MAX_UPLOAD_BYTES,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service application over a session directory."""
    store = SessionStore(Path(data_dir))
    app = FastAPI(title="tscrub service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    def _session_or_none(session_id: str) -> Optional[dict]:
        return store.get(session_id)

    @app.post("/sessions", status_code=201)
    async def upload(file: UploadFile) -> Response:
        payload = await file.read()
        if len(payload) > max_upload_bytes:
            return _error(413, "too_large",
                          f"upload exceeds {max_upload_bytes} bytes", "upload")
        try:
            meta = store.create(payload)
        except CleaningError as exc:
            return _error(400, type(exc).__name__, str(exc), "upload")
        return JSONResponse(status_code=201, content={
            "id": meta["id"],
            "columns": meta["columns"],
            "row_count": meta["row_count"],
            "preview": meta["preview"],
        })

    @app.get("/sessions/{session_id}")
    def status(session_id: str) -> Response:
        meta = _session_or_none(session_id)
        if meta is None:
            return _error(404, "not_found", f"no session {session_id}")
        return JSONResponse({
            "id": meta["id"],
            "status": meta["status"],
            "columns": meta["columns"],
            "row_count": meta["row_count"],
            "value_summaries": meta["value_summaries"],
            "error": meta["error"],
        })

    @app.post("/sessions/{session_id}/clean", status_code=202)
    def start_clean(session_id: str, req: CleanRequest) -> Response:
        meta = _session_or_none(session_id)
        if meta is None:
            return _error(404, "not_found", f"no session {session_id}")
        allowed = set(default_registry().ids())
        bad = [m for m in req.methods if m not in allowed]
        if bad:
            return _error(400, "unknown_method",
                          f"methods not available over HTTP: {bad}", "clean")
        if not req.methods:
            return _error(400, "no_methods", "select at least one method", "clean")
        if not store.try_start_clean(session_id, req.model_dump()):
            return _error(409, "busy", "a clean job is already running", "clean")
        thread = threading.Thread(
            target=_run_clean_job, args=(store, session_id, req), daemon=True,
        )
        thread.start()
        return JSONResponse(status_code=202,
                            content={"id": session_id, "status": "cleaning"})

    def _done_result(session_id: str) -> tuple[Optional[CleanResult], Optional[Response]]:
        meta = _session_or_none(session_id)
        if meta is None:
            return None, _error(404, "not_found", f"no session {session_id}")
        if meta["status"] != "done":
            return None, _error(
                409, "not_ready",
                f"session is {meta['status']}, not done", "clean",
            )
        return store.result(session_id), None

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str, format: str = "text") -> Response:
        result, err = _done_result(session_id)
        if err:
            return err
        if format == "json":
            return JSONResponse(result_to_dict(result))
        return PlainTextResponse(generate_report(result))

    @app.get("/sessions/{session_id}/windows")
    def windows(session_id: str, interval: str) -> Response:
        result, err = _done_result(session_id)
        if err:
            return err
        try:
            spec = parse_interval_spec(interval)
            wins = split_windows(result, spec)
        except BadSpec as exc:
            return _error(400, "bad_interval", str(exc), "windows")
        data = result.clean_data
        payload = []
        for w in wins:
            points = []
            for i in range(w.start, w.stop):
                v = data.values[i]
                points.append({
                    "time": render_instant(int(data.times[i])),
                    "value": None if v != v else float(v),
                    "missing_type": (None if data.missing_type[i] == "none"
                                     else data.missing_type[i]),
                    "method_used": data.method_used[i],
                    "is_outlier": bool(data.is_outlier[i]),
                })
            summary = w.summary.to_dict()
            summary["stats"] = {k: (None if v != v else v)
                                for k, v in summary["stats"].items()}
            payload.append({
                "index": w.index,
                "time_range": {"start": render_instant(w.time_start),
                               "end": render_instant(w.time_end)},
                "summary": summary,
                "points": points,
            })
        return JSONResponse({"windows": payload})

    @app.post("/sessions/{session_id}/revert")
    def revert_changes(session_id: str, req: RevertRequest) -> Response:
        result, err = _done_result(session_id)
        if err:
            return err
        try:
            updated = revert(result, set(req.change_ids))
        except UnknownChangeId as exc:
            return _error(404, "unknown_change", str(exc), "revert")
        except IrreversibleChange as exc:
            return _error(409, "irreversible", str(exc), "revert")
        store.update_result(session_id, updated)
        return JSONResponse(result_to_dict(updated))

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str) -> Response:
        result, err = _done_result(session_id)
        if err:
            return err
        data = result.clean_data
        rows = ["time,value"]
        for i in range(len(data)):
            v = data.values[i]
            rows.append(
                f"{render_instant(int(data.times[i]))},"
                f"{'' if v != v else repr(float(v))}"
            )
        return PlainTextResponse(
            "\n".join(rows) + "\n",
            media_type="text/csv",
            headers={"Content-Disposition":
                     f'attachment; filename="cleaned_{session_id}.csv"'},
        )

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
