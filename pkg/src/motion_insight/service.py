"""Read-only HTTP API over a precomputed DatasetAnalysis.

Every endpoint is a thin wrapper around a payload builder in analysis;
the service adds transport, error mapping, and optional static hosting
of the dashboard bundle, but no computation of its own.
"""

from __future__ import annotations

import socket
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import analysis as an
from .errors import (
    BindError,
    EmptyScope,
    EmptySlice,
    NoValidFrames,
    UnknownFilter,
)

API_PREFIX = "/api/v1"

_ERROR_CODES = {
    UnknownFilter: ("unknown_filter", 400),
    EmptyScope: ("empty_scope", 400),
    EmptySlice: ("empty_slice", 400),
    NoValidFrames: ("no_valid_frames", 400),
    ValueError: ("bad_request", 400),
    KeyError: ("not_found", 404),
}


def _error_response(code: str, message: str, status: int) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": {"code": code, "message": message}})


def create_app(analysis: an.DatasetAnalysis, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="motion-insight", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    for exc_type, (code, status) in _ERROR_CODES.items():
        def handler(request: Request, exc: Exception, code=code, status=status):
            message = str(exc.args[0]) if exc.args else str(exc)
            return _error_response(code, message, status)
        app.add_exception_handler(exc_type, handler)

    @app.get(API_PREFIX + "/meta")
    def meta():
        return an.payload_meta(analysis)

    @app.get(API_PREFIX + "/actions/summary")
    def actions_summary():
        return an.payload_actions_summary(analysis)

    @app.get(API_PREFIX + "/actions/timeline")
    def actions_timeline():
        return an.payload_timeline(analysis)

    @app.get(API_PREFIX + "/events")
    def events(action: str | None = None,
               filters: list[str] = Query(default=[], alias="filter")):
        return an.payload_events(analysis, action=action, filters=filters)

    @app.get(API_PREFIX + "/events/{event_id}/series")
    def event_series(event_id: str, vars: str | None = None, simplify: bool = True,
                     max_points: int | None = None, scope: str | None = None):
        return an.payload_event_series(analysis, event_id, vars_param=vars,
                                       simplified=simplify, max_points=max_points,
                                       scope=scope)

    @app.get(API_PREFIX + "/events/{event_id}/stats")
    def event_stats(event_id: str):
        return an.payload_event_stats(analysis, event_id)

    @app.get(API_PREFIX + "/events/{event_id}/frames")
    def event_frames(event_id: str, start: int | None = Query(default=None, alias="from"),
                     stop: int | None = Query(default=None, alias="to"),
                     stride: int = 1):
        return an.payload_frames(analysis, event_id, start=start, stop=stop,
                                 stride=stride)

    @app.get(API_PREFIX + "/stats/global")
    def stats_global():
        return an.payload_global_stats(analysis)

    @app.get(API_PREFIX + "/distributions")
    def distributions(vars: str | None = None, action: str | None = None):
        return an.payload_distributions(analysis, vars_param=vars, action=action)

    @app.get(API_PREFIX + "/freezes")
    def freezes(event: str | None = None):
        return an.payload_freezes(analysis, event_id=event)

    if ui_dir is not None:
        ui_path = Path(ui_dir)
        if (ui_path / "index.html").is_file():
            app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")

    return app


def check_port(host: str, port: int) -> None:
    """Fail fast with BindError when the address is unavailable."""
    try:
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
            probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            probe.bind((host, port))
    except OSError as exc:
        raise BindError(f"cannot bind {host}:{port}: {exc}") from exc


def serve(analysis: an.DatasetAnalysis, host: str = "127.0.0.1", port: int = 8000,
          ui_dir: str | Path | None = None) -> None:
    """Run the service until interrupted."""
    import uvicorn

    check_port(host, port)
    app = create_app(analysis, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
