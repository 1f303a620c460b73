"""HTTP protocol: JSON metadata and PNG frames out, gestures in.

Apart from /identify, no endpoint ever serializes table cell values; the
transport carries pixels and view metadata only. Every non-2xx body is a
JSON ApiError {code, message, details?} with codes mapped 1:1 from the
package exception types.
"""

from __future__ import annotations

import json
import math

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import (
    EvalTypeError, FormatError, ParseError, PlotwireError, RangeError,
    SchemaError, SessionError, UnknownNameError, UnsupportedError,
    ValidationError,
)
from .plotspec import capabilities, registry_hash
from .registry import TableRegistry
from .session import SessionManager
from .view import Pan, Rotate, Viewport, Zoom

MAX_DIM = 4096

_ERROR_MAP: tuple[tuple[type, int, str], ...] = (
    (ValidationError, 400, "VALIDATION"),
    (SessionError, 404, "SESSION"),
    (UnknownNameError, 404, "NAME_ERROR"),
    (UnsupportedError, 409, "UNSUPPORTED"),
    (RangeError, 400, "RANGE"),
    (FormatError, 400, "FORMAT"),
    (ParseError, 400, "FORMAT"),
    (SchemaError, 400, "FORMAT"),
    (EvalTypeError, 400, "VALIDATION"),
)


class SpecBody(BaseModel):
    type: str
    options: dict[str, str] = {}


class CreateSessionBody(BaseModel):
    table: str
    spec: SpecBody


class NavBody(BaseModel):
    action: str
    w: int
    h: int
    dx: float = 0.0
    dy: float = 0.0
    factor: float | None = None
    cx: float | None = None
    cy: float | None = None
    yaw: float = 0.0
    pitch: float = 0.0


def _error_response(status: int, code: str, message: str, details=None) -> JSONResponse:
    body: dict = {"code": code, "message": message}
    if details is not None:
        body["details"] = details
    return JSONResponse(status_code=status, content=body)


def _viewport(w: int, h: int) -> Viewport:
    for name, v in (("w", w), ("h", h)):
        if not 8 <= v <= MAX_DIM:
            raise RangeError(f"{name}={v} outside [8, {MAX_DIM}]")
    return Viewport(w, h)


def _view_header(view) -> str:
    return json.dumps(view.to_json_dict(), separators=(",", ":"))


def _json_cell(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None  # NaN/inf are missing as far as clients are concerned
    return value


def create_app(registry: TableRegistry, sessions: SessionManager | None = None, *,
               static_dir=None, cors_origins=("*",)) -> FastAPI:
    sessions = sessions if sessions is not None else SessionManager(registry)
    app = FastAPI(title="plotwire", docs_url=None, redoc_url=None)
    app.state.registry = registry
    app.state.sessions = sessions

    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
            expose_headers=["X-Seq", "X-View", "ETag"],
        )

    @app.exception_handler(PlotwireError)
    async def on_package_error(request: Request, exc: PlotwireError):
        for etype, status, code in _ERROR_MAP:
            if isinstance(exc, etype):
                details = None
                if isinstance(exc, ValidationError):
                    details = [{"option": opt, "message": why} for opt, why in exc.issues]
                return _error_response(status, code, str(exc), details)
        return _error_response(500, "INTERNAL", str(exc))

    @app.exception_handler(RequestValidationError)
    async def on_request_error(request: Request, exc: RequestValidationError):
        details = [
            {"option": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return _error_response(400, "VALIDATION", "malformed request", details)

    @app.exception_handler(Exception)
    async def on_unexpected(request: Request, exc: Exception):
        return _error_response(500, "INTERNAL", "internal server error")

    @app.get("/api/capabilities")
    def get_capabilities() -> Response:
        body = json.dumps(capabilities(), separators=(",", ":"))
        return Response(
            content=body,
            media_type="application/json",
            headers={"ETag": f'"{registry_hash()}"', "Cache-Control": "public, max-age=3600"},
        )

    @app.get("/api/tables")
    def get_tables():
        out = []
        for name in registry.names():
            table = registry.get(name)
            out.append({
                "name": name,
                "rowCount": table.row_count,
                "columns": [{"name": c.name, "kind": c.kind} for c in table.columns],
            })
        return out

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = sessions.create(body.table, body.spec.type, body.spec.options)
        return {
            "sessionId": session.id,
            "seq": session.seq,
            "view": session.view.to_json_dict(),
        }

    @app.get("/api/sessions/{session_id}/frame")
    def get_frame(session_id: str, w: int = 640, h: int = 480, bare: bool = False):
        viewport = _viewport(w, h)
        png, seq, view = sessions.frame(session_id, viewport, bare=bare)
        return Response(
            content=png,
            media_type="image/png",
            headers={"X-Seq": str(seq), "X-View": _view_header(view)},
        )

    @app.post("/api/sessions/{session_id}/nav")
    def post_nav(session_id: str, body: NavBody):
        viewport = _viewport(body.w, body.h)
        if body.action == "pan":
            action = Pan(body.dx, body.dy)
        elif body.action == "zoom":
            if body.factor is None:
                raise ValidationError([("factor", "required for zoom")])
            cx = body.cx if body.cx is not None else viewport.width / 2.0
            cy = body.cy if body.cy is not None else viewport.height / 2.0
            action = Zoom(body.factor, cx, cy)
        elif body.action == "rotate":
            action = Rotate(body.yaw, body.pitch)
        else:
            raise ValidationError([("action", f"unknown action {body.action!r}")])
        session = sessions.navigate(session_id, action, viewport)
        return {"seq": session.seq, "view": session.view.to_json_dict()}

    @app.get("/api/sessions/{session_id}/identify")
    def get_identify(session_id: str, x: float, y: float, r: float = 4.0,
                     w: int = 640, h: int = 480):
        viewport = _viewport(w, h)
        if r < 0:
            raise RangeError(f"r={r} must be >= 0")
        hit = sessions.identify(session_id, viewport, x, y, r)
        if hit is None:
            return {"row": None}
        row, distance = hit
        cells = {name: _json_cell(v) for name, v in row["cells"].items()}
        return {"row": {"index": row["index"], "cells": cells}, "distancePx": distance}

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        sessions.delete(session_id)
        return Response(status_code=204)

    @app.get("/metrics")
    def get_metrics():
        return Response(content=sessions.metrics_text(), media_type="text/plain")

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="static")

    return app
