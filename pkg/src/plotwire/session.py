"""Server-held sessions and the two-level cache: prepared coordinate data
keyed by (table, expressions, filter), encoded frames keyed by the full
view parameters.

Both caches are transparent: any response produced with caches enabled is
byte-identical to one produced with them disabled (budget 0). Frame entries
compute at most once per key even under concurrent requests.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field

from .errors import SessionError
from .identify import identify_row
from .plotspec import ValidatedPlot, validate
from .pngio import encode_png
from .prep import PreparedCoords, auto_range, prepare_coords
from .registry import TableRegistry
from .render import render
from .view import NavAction, ViewState, Viewport, apply_navigation

DEFAULT_COORD_BUDGET = 512 * 1024 * 1024
DEFAULT_FRAME_ENTRIES = 256
DEFAULT_TTL_SECONDS = 30 * 60


@dataclass
class Session:
    id: str
    table_name: str
    plan: ValidatedPlot
    view: ViewState
    seq: int = 0
    last_touched: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class Metrics:
    """Monotone counters rendered as `name value` lines at /metrics."""

    def __init__(self):
        self._lock = threading.Lock()
        self._counts: dict[str, float] = {
            "coord_cache_hits": 0,
            "coord_cache_misses": 0,
            "frame_cache_hits": 0,
            "frame_cache_misses": 0,
            "sessions_created": 0,
            "sessions_expired": 0,
            "renders_total": 0,
            "render_ms_total": 0.0,
        }

    def bump(self, name: str, amount: float = 1):
        with self._lock:
            self._counts[name] = self._counts.get(name, 0) + amount

    def snapshot(self) -> dict[str, float]:
        with self._lock:
            return dict(self._counts)


class CoordCache:
    """LRU cache of PreparedCoords under a total byte budget."""

    def __init__(self, budget_bytes: int, metrics: Metrics):
        self.budget = budget_bytes
        self._entries: OrderedDict[tuple, PreparedCoords] = OrderedDict()
        self._bytes = 0
        self._lock = threading.Lock()
        self._metrics = metrics

    def get_or_compute(self, key: tuple, fn) -> PreparedCoords:
        with self._lock:
            hit = self._entries.get(key)
            if hit is not None:
                self._entries.move_to_end(key)
                self._metrics.bump("coord_cache_hits")
                return hit
        self._metrics.bump("coord_cache_misses")
        value = fn()
        if self.budget > 0:
            with self._lock:
                if key not in self._entries:
                    self._entries[key] = value
                    self._bytes += value.nbytes
                self._entries.move_to_end(key)
                while self._bytes > self.budget and self._entries:
                    _, evicted = self._entries.popitem(last=False)
                    self._bytes -= evicted.nbytes
        return value

    @property
    def retained_bytes(self) -> int:
        with self._lock:
            return self._bytes

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self._bytes = 0


class FrameCache:
    """LRU cache of encoded frames with an entry-count budget.

    get_or_compute deduplicates concurrent renders of the same key: one
    caller computes, the rest wait on its event.
    """

    def __init__(self, max_entries: int, metrics: Metrics):
        self.max_entries = max_entries
        self._entries: OrderedDict[str, bytes] = OrderedDict()
        self._pending: dict[str, threading.Event] = {}
        self._lock = threading.Lock()
        self._metrics = metrics

    def get_or_compute(self, key: str, fn) -> bytes:
        if self.max_entries <= 0:
            self._metrics.bump("frame_cache_misses")
            return fn()
        while True:
            with self._lock:
                hit = self._entries.get(key)
                if hit is not None:
                    self._entries.move_to_end(key)
                    self._metrics.bump("frame_cache_hits")
                    return hit
                waiter = self._pending.get(key)
                if waiter is None:
                    self._pending[key] = threading.Event()
                    break
            waiter.wait()
        self._metrics.bump("frame_cache_misses")
        try:
            value = fn()
            with self._lock:
                self._entries[key] = value
                self._entries.move_to_end(key)
                while len(self._entries) > self.max_entries:
                    self._entries.popitem(last=False)
            return value
        finally:
            with self._lock:
                self._pending.pop(key).set()


class SessionManager:
    """Owns the session map and both caches.

    ``id_factory`` and ``clock`` are injectable so deterministic replay and
    TTL tests can pin them; the defaults are cryptographic randomness and
    the monotonic clock.
    """

    def __init__(self, registry: TableRegistry, *,
                 coord_budget_bytes: int = DEFAULT_COORD_BUDGET,
                 frame_entries: int = DEFAULT_FRAME_ENTRIES,
                 ttl_seconds: float = DEFAULT_TTL_SECONDS,
                 id_factory=None, clock=time.monotonic):
        self.registry = registry
        self.ttl_seconds = ttl_seconds
        self.metrics = Metrics()
        self.coord_cache = CoordCache(coord_budget_bytes, self.metrics)
        self.frame_cache = FrameCache(frame_entries, self.metrics)
        self._id_factory = id_factory or (lambda: secrets.token_hex(16))
        self._clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    # -- lifecycle

    def create(self, table_name: str, plot_type: str, options: dict[str, str]) -> Session:
        table = self.registry.get(table_name)
        plan = validate(plot_type, options, table)
        prep = self._prep(table_name, plan, table)
        view = auto_range(plan, table, prep)
        session = Session(
            id=self._id_factory(), table_name=table_name, plan=plan,
            view=view, seq=0, last_touched=self._clock(),
        )
        with self._lock:
            self._sessions[session.id] = session
        self.metrics.bump("sessions_created")
        return session

    def _get(self, session_id: str, *, touch: bool = True) -> Session:
        now = self._clock()
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None and now - session.last_touched > self.ttl_seconds:
                del self._sessions[session_id]
                self.metrics.bump("sessions_expired")
                session = None
            if session is None:
                raise SessionError(f"no session {session_id!r}")
            if touch:
                session.last_touched = now
            return session

    def get(self, session_id: str) -> Session:
        return self._get(session_id)

    def delete(self, session_id: str) -> None:
        with self._lock:
            if self._sessions.pop(session_id, None) is None:
                raise SessionError(f"no session {session_id!r}")

    def expire_sessions(self, now: float | None = None) -> int:
        """Drop sessions idle longer than the TTL; returns how many."""
        if now is None:
            now = self._clock()
        with self._lock:
            stale = [
                sid for sid, s in self._sessions.items()
                if now - s.last_touched > self.ttl_seconds
            ]
            for sid in stale:
                del self._sessions[sid]
        self.metrics.bump("sessions_expired", len(stale))
        return len(stale)

    @property
    def active_count(self) -> int:
        with self._lock:
            return len(self._sessions)

    # -- operations

    def navigate(self, session_id: str, action: NavAction, viewport: Viewport) -> Session:
        session = self._get(session_id)
        with session.lock:
            session.view = apply_navigation(session.view, action, viewport)
            session.seq += 1
        return session

    def _prep(self, table_name: str, plan: ValidatedPlot, table) -> PreparedCoords:
        key = (table_name, plan.coord_sources, plan.filter_source)
        return self.coord_cache.get_or_compute(
            key, lambda: prepare_coords(plan, table)
        )

    def _frame_key(self, session: Session, viewport: Viewport, bare: bool) -> str:
        payload = json.dumps(
            {
                "table": session.table_name,
                "type": session.plan.plot_type,
                "options": session.plan.options,
                "view": session.view.to_json_dict(),
                "w": viewport.width,
                "h": viewport.height,
                "bare": bare,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def frame(self, session_id: str, viewport: Viewport,
              bare: bool = False) -> tuple[bytes, int, ViewState]:
        session = self._get(session_id)
        with session.lock:
            view = session.view
            seq = session.seq
        table = self.registry.get(session.table_name)

        def render_encode() -> bytes:
            prep = self._prep(session.table_name, session.plan, table)
            t0 = time.perf_counter()
            frame = render(session.plan, table, view, viewport, prep=prep, bare=bare, seq=seq)
            self.metrics.bump("renders_total")
            self.metrics.bump("render_ms_total", (time.perf_counter() - t0) * 1000.0)
            return encode_png(frame.pixels)

        key = self._frame_key(session, viewport, bare)
        png = self.frame_cache.get_or_compute(key, render_encode)
        return png, seq, view

    def identify(self, session_id: str, viewport: Viewport,
                 gx: float, gy: float, radius: float):
        """(row dict, distance px) for the nearest plotted row, or None."""
        session = self._get(session_id)
        with session.lock:
            view = session.view
        table = self.registry.get(session.table_name)
        prep = self._prep(session.table_name, session.plan, table)
        hit = identify_row(session.plan, table, view, viewport, gx, gy, radius, prep=prep)
        if hit is None:
            return None
        index, distance = hit
        return {"index": index, "cells": table.row(index)}, distance

    def metrics_text(self) -> str:
        counts = self.metrics.snapshot()
        counts["active_sessions"] = self.active_count
        lines = [f"{name} {_fmt_metric(value)}" for name, value in sorted(counts.items())]
        return "\n".join(lines) + "\n"


def _fmt_metric(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(value)
