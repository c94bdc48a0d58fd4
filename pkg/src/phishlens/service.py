"""Local HTTP verdict service for the browser-extension companion.

Endpoints (JSON over HTTP/1.1, loopback by default):
  POST /predict  {"url": ...}              -> verdict
  POST /history  {"verdict"|"verdict_id", "user_action"} -> ack
  GET  /history?limit=N                    -> entries, newest first
  GET  /health                             -> status + model id
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass, field
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from . import config
from .dataset import FEATURE_NAMES
from .errors import EmptyInput, MalformedUrl
from .history import HistoryStore
from .ml import load_model, predict_values
from .pipeline import ExtractConfig, Extractor
from .urls import parse_url

log = logging.getLogger(__name__)

USER_ACTIONS = ("visited", "declined", "none")


@dataclass
class ServiceConfig:
    model_path: str | Path | None
    history_dir: str | Path = "history"
    host: str = "127.0.0.1"
    port: int = config.DEFAULT_SERVICE_PORT
    allow_origins: list[str] = field(default_factory=list)
    extract: ExtractConfig = field(default_factory=ExtractConfig)
    predict_deadline_s: float = 30.0
    predict_workers: int = 8


class VerdictApp:
    """Service state: loaded model, extractor, history store."""

    def __init__(self, cfg: ServiceConfig):
        self.cfg = cfg
        self.started_at = time.time()
        self.model = None
        self.model_id = None
        if cfg.model_path and Path(cfg.model_path).exists():
            self.model = load_model(cfg.model_path)
            digest = hashlib.sha256(Path(cfg.model_path).read_bytes()).hexdigest()
            self.model_id = f"sha256:{digest}"
        self.extractor = Extractor(cfg.extract)
        self.history = HistoryStore(cfg.history_dir)
        self._pool = ThreadPoolExecutor(max_workers=cfg.predict_workers)

    def close(self) -> None:
        self._pool.shutdown(wait=False)

    def predict_url(self, url: str) -> dict:
        """Extract all 23 features and run the model; raises Malformed/Empty."""
        started = time.monotonic()
        parse_url(url, self.extractor.psl)  # unparseable input is the caller's error
        row = self.extractor.extract_row(url)
        cls, score = predict_values(self.model, row.values)
        latency_ms = (time.monotonic() - started) * 1000.0
        features = {name: value for name, value in zip(FEATURE_NAMES, row.values)}
        verdict_id = hashlib.sha256(
            json.dumps([url, self.model_id, row.values], sort_keys=True).encode()
        ).hexdigest()[:16]
        return {
            "protocol_version": config.PROTOCOL_VERSION,
            "verdict_id": verdict_id,
            "url": url,
            "class": "deceptive" if cls == 1 else "safe",
            "score": score,
            "features": features,
            "model_id": self.model_id,
            "latency_ms": latency_ms,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }

    def predict_with_deadline(self, url: str) -> dict:
        future = self._pool.submit(self.predict_url, url)
        return future.result(timeout=self.cfg.predict_deadline_s)


def _make_handler(app: VerdictApp):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # route through logging, not stderr
            log.debug("%s " + fmt, self.address_string(), *args)

        def _cors_headers(self) -> dict[str, str]:
            origin = self.headers.get("Origin")
            allowed = app.cfg.allow_origins
            if origin and ("*" in allowed or origin in allowed):
                return {"Access-Control-Allow-Origin": origin, "Vary": "Origin"}
            return {}

        def _send_json(self, status: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            for key, value in self._cors_headers().items():
                self.send_header(key, value)
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self) -> dict | None:
            try:
                length = int(self.headers.get("Content-Length", "0"))
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
            except (ValueError, UnicodeDecodeError):
                return None
            return payload if isinstance(payload, dict) else None

        def do_OPTIONS(self):  # CORS preflight
            self.send_response(204)
            for key, value in self._cors_headers().items():
                self.send_header(key, value)
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            parts = urlsplit(self.path)
            if parts.path == "/health":
                if app.model is None:
                    self._send_json(503, {"status": "model_not_loaded",
                                          "protocol_version": config.PROTOCOL_VERSION})
                    return
                self._send_json(200, {
                    "status": "ok",
                    "model_id": app.model_id,
                    "uptime_s": time.time() - app.started_at,
                    "protocol_version": config.PROTOCOL_VERSION,
                })
            elif parts.path == "/history":
                params = parse_qs(parts.query)
                limit = None
                if "limit" in params:
                    try:
                        limit = max(0, int(params["limit"][0]))
                    except ValueError:
                        self._send_json(400, {"error": "bad limit"})
                        return
                self._send_json(200, {"entries": app.history.read(limit=limit),
                                      "protocol_version": config.PROTOCOL_VERSION})
            else:
                self._send_json(404, {"error": "unknown path"})

        def do_POST(self):
            if self.path == "/predict":
                self._predict()
            elif self.path == "/history":
                self._append_history()
            else:
                self._send_json(404, {"error": "unknown path"})

        def _predict(self):
            if app.model is None:
                self._send_json(503, {"error": "model not loaded"})
                return
            payload = self._read_json()
            if payload is None or not isinstance(payload.get("url"), str) or not payload["url"].strip():
                self._send_json(400, {"error": "body must be JSON with a url field"})
                return
            try:
                verdict = app.predict_with_deadline(payload["url"])
            except FutureTimeout:
                self._send_json(504, {"error": "extraction deadline exceeded"})
                return
            except (MalformedUrl, EmptyInput) as exc:
                self._send_json(400, {"error": f"bad url: {exc}"})
                return
            self._send_json(200, verdict)

        def _append_history(self):
            payload = self._read_json()
            if payload is None:
                self._send_json(400, {"error": "body must be JSON"})
                return
            action = payload.get("user_action")
            if action not in USER_ACTIONS:
                self._send_json(400, {"error": f"user_action must be one of {USER_ACTIONS}"})
                return
            verdict = payload.get("verdict")
            if verdict is None:
                verdict_id = payload.get("verdict_id")
                if not isinstance(verdict_id, str) or not verdict_id:
                    self._send_json(400, {"error": "verdict or verdict_id required"})
                    return
                verdict = {"verdict_id": verdict_id}
            entry = app.history.append(verdict, action)
            self._send_json(200, {"ok": True, "stored_at": entry["stored_at"],
                                  "protocol_version": config.PROTOCOL_VERSION})

    return Handler


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 128  # allow bursts of concurrent extension calls


def make_server(cfg: ServiceConfig) -> tuple[ThreadingHTTPServer, VerdictApp]:
    """Bind the server (port 0 picks a free port); caller runs serve_forever."""
    app = VerdictApp(cfg)
    server = _Server((cfg.host, cfg.port), _make_handler(app))
    return server, app


def serve(cfg: ServiceConfig) -> None:
    server, app = make_server(cfg)
    host, port = server.server_address[:2]
    print(f"phishlens service listening on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        app.close()
        server.server_close()


def run_in_thread(cfg: ServiceConfig) -> tuple[ThreadingHTTPServer, VerdictApp, threading.Thread]:
    """Start the service on a daemon thread (tests and embedding)."""
    server, app = make_server(cfg)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, app, thread
