"""Session server exposing the simulator over a small JSON protocol.

One immutable model triple is shared by all sessions; each session owns a
generated program plus simulator state, with inputs serialized per session.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from . import feature_model as fmod
from . import generator as gen
from . import menu_model as mmod
from . import runtime



@dataclass
class Session:
    program: object
    state: runtime.SimState
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionApp:
    """Protocol logic, independent of the HTTP plumbing (and testable
    without a socket)."""

    def __init__(
        self,
        fm: fmod.FeatureModel,
        hm: mmod.HmiModel,
        manifest: gen.HandlerManifest,
    ):
        self.fm = fm
        self.hm = hm
        self.manifest = manifest
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._next_id = 0

    # -- handlers: each returns (status code, json-serializable body)

    def feature_model_payload(self):
        return 200, {
            "name": self.fm.name,
            "root": self.fm.root,
            "features": [
                {
                    "name": f.name,
                    "groups": [
                        {"kind": g.kind, "children": list(g.children)}
                        for g in f.groups
                    ],
                }
                for f in self.fm.features.values()
            ],
            "constraints": [
                {"kind": c.kind, "lhs": c.lhs, "rhs": c.rhs}
                for c in self.fm.constraints
            ],
        }

    def validate(self, body):
        cfg = fmod.Configuration(frozenset(body.get("select", [])))
        verdict = fmod.is_valid_configuration(self.fm, cfg)
        return 200, {
            "valid": verdict.valid,
            "violations": [
                {"code": v.code, "message": v.message} for v in verdict.violations
            ],
        }

    def create_session(self, body):
        cfg = fmod.Configuration(frozenset(body.get("select", [])), name="session")
        result = gen.generate(self.fm, self.hm, self.manifest, cfg)
        if not result.ok:
            return 422, {"diagnostics": _diag_objs(result.diagnostics)}
        state = runtime.init_session(result.program)
        with self._lock:
            self._next_id += 1
            sid = f"s{self._next_id}"
            self.sessions[sid] = Session(result.program, state)
        return 201, {
            "sessionId": sid,
            "view": runtime.render_view(state, result.program),
        }

    def post_input(self, sid, body):
        session = self.sessions.get(sid)
        if session is None:
            return 404, {"error": f"no session '{sid}'"}
        event = body.get("event")
        if event not in runtime.INPUT_EVENTS:
            return 400, {"error": f"unknown input event {event!r}"}
        with session.lock:
            outcome = runtime.step(session.state, event, session.program)
            session.state = outcome.state
            return 200, {
                "view": runtime.render_view(session.state, session.program),
                "effects": [
                    {"statusbox": e.statusbox, "value": e.value}
                    for e in outcome.effects
                ],
                "transition": outcome.transition,
            }

    def get_view(self, sid):
        session = self.sessions.get(sid)
        if session is None:
            return 404, {"error": f"no session '{sid}'"}
        with session.lock:
            return 200, {"view": runtime.render_view(session.state, session.program)}

    def close_session(self, sid):
        with self._lock:
            if self.sessions.pop(sid, None) is None:
                return 404, {"error": f"no session '{sid}'"}
        return 200, {"closed": sid}


def _diag_objs(diags: list):
    out = []
    for d in diags:
        obj = {"severity": d.severity, "code": d.code, "message": d.message}
        if d.span is not None:
            obj["file"] = d.span.file
            obj["line"] = d.span.start_line
            obj["col"] = d.span.start_col
        out.append(obj)
    return out


_SESSION_RE = re.compile(r"^/api/sessions/([A-Za-z0-9_-]+)(/(input|view))?$")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
}


def make_handler(app: SessionApp, ui_dir: Optional[Path]):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            pass

        def _send_json(self, status: int, body):
            data = json.dumps(body).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def _body(self):
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                obj = json.loads(raw.decode("utf-8") or "{}")
            except (json.JSONDecodeError, UnicodeDecodeError):
                return None
            return obj if isinstance(obj, dict) else None

        def do_GET(self):
            if self.path == "/api/featuremodel":
                return self._send_json(*app.feature_model_payload())
            m = _SESSION_RE.match(self.path)
            if m and m.group(3) == "view":
                return self._send_json(*app.get_view(m.group(1)))
            if not self.path.startswith("/api/"):
                return self._serve_static()
            self._send_json(404, {"error": "not found"})

        def do_POST(self):
            body = self._body()
            if body is None:
                return self._send_json(400, {"error": "request body must be a JSON object"})
            if self.path == "/api/validate":
                return self._send_json(*app.validate(body))
            if self.path == "/api/sessions":
                return self._send_json(*app.create_session(body))
            m = _SESSION_RE.match(self.path)
            if m and m.group(3) == "input":
                return self._send_json(*app.post_input(m.group(1), body))
            self._send_json(404, {"error": "not found"})

        def do_DELETE(self):
            m = _SESSION_RE.match(self.path)
            if m and m.group(3) is None:
                return self._send_json(*app.close_session(m.group(1)))
            self._send_json(404, {"error": "not found"})

        def _serve_static(self):
            if ui_dir is None:
                return self._send_json(404, {"error": "no UI bundle installed"})
            rel = self.path.lstrip("/") or "index.html"
            path = (ui_dir / rel).resolve()
            if not str(path).startswith(str(ui_dir.resolve())) or not path.is_file():
                return self._send_json(404, {"error": "not found"})
            data = path.read_bytes()
            self.send_response(200)
            ctype = _CONTENT_TYPES.get(path.suffix, "application/octet-stream")
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

    return Handler


def make_server(
    app: SessionApp, host: str = "127.0.0.1", port: int = 8787, ui_dir=None
) -> ThreadingHTTPServer:
    if ui_dir is not None:
        ui_dir = Path(ui_dir)
        if not ui_dir.is_dir():
            ui_dir = None
    return ThreadingHTTPServer((host, port), make_handler(app, ui_dir))
