"""Preview server: static HTTP + reload WebSocket on one port, with a watcher.

The server compiles once at startup, then polls the input files' (mtime,
size) every 200 ms.  When they change it recompiles; only after all output
files are renamed into place does it bump the generation counter and send a
one-byte text frame on the reload endpoint, so connected pages never reload
into half-written output.  A broken edit is logged and the previous output
stays served.
"""

from __future__ import annotations

import html
import json
import logging
import threading
import urllib.parse
from pathlib import Path

from websockets.datastructures import Headers
from websockets.http11 import Response
from websockets.sync.server import serve as ws_serve

from .codegen import EmitOptions
from .errors import InputError
from .pipeline import PipelineConfig, RunReport, run_pipeline

log = logging.getLogger("sketch2ui.serve")

RELOAD_MESSAGE = "r"

CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".xml": "application/xml; charset=utf-8",
    ".txt": "text/plain; charset=utf-8",
}


def _response(status: int, reason: str, content_type: str, body: bytes) -> Response:
    headers = Headers(
        [("Content-Type", content_type), ("Content-Length", str(len(body)))]
    )
    return Response(status, reason, headers, body)


class LiveServer:
    """Owns the HTTP/WS server thread and the input-watcher thread."""

    def __init__(
        self,
        config: PipelineConfig,
        host: str = "127.0.0.1",
        reload_endpoint: str = "/reload",
        poll_interval: float = 0.2,
    ):
        self.config = config
        self.host = host
        self.reload_endpoint = reload_endpoint
        self.poll_interval = poll_interval
        self.generation = 0
        self.last_report: RunReport | None = None
        self._emit_options = EmitOptions(live_reload=True, reload_endpoint=reload_endpoint)
        self._clients: set = set()
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._server = None
        self._threads: list[threading.Thread] = []

    # -- lifecycle ---------------------------------------------------------

    def compile_once(self) -> RunReport:
        report = run_pipeline(self.config, write_target=True, emit_options=self._emit_options)
        self.last_report = report
        return report

    def start(self) -> None:
        """Compile, bind the port, and launch server + watcher threads.

        Raises InputError on bad input files and OSError when the port is
        taken; nothing is left running on failure.
        """
        self.compile_once()
        self.generation = 1
        self._server = ws_serve(
            self._ws_handler,
            self.host,
            self.config.serve_port,
            process_request=self._process_request,
        )
        server_thread = threading.Thread(
            target=self._server.serve_forever, name="sketch2ui-http", daemon=True
        )
        watcher_thread = threading.Thread(
            target=self._watch_loop, name="sketch2ui-watch", daemon=True
        )
        self._threads = [server_thread, watcher_thread]
        for t in self._threads:
            t.start()
        log.info("serving %s on http://%s:%d/", self.config.out_dir, self.host, self.port)

    @property
    def port(self) -> int:
        if self._server is None:
            return self.config.serve_port
        return self._server.socket.getsockname()[1]

    def stop(self) -> None:
        self._stop.set()
        with self._lock:
            clients = list(self._clients)
            self._clients.clear()
        for conn in clients:
            try:
                conn.close()
            except Exception:
                pass
        if self._server is not None:
            self._server.shutdown()
        for t in self._threads:
            t.join(timeout=2.0)

    def run_forever(self) -> None:
        try:
            self._stop.wait()
        except KeyboardInterrupt:
            pass
        finally:
            self.stop()

    # -- websocket side ----------------------------------------------------

    def _ws_handler(self, connection) -> None:
        with self._lock:
            self._clients.add(connection)
        try:
            for _ in connection:
                pass  # clients only listen; drain until close
        except Exception:
            pass
        finally:
            with self._lock:
                self._clients.discard(connection)

    def broadcast_reload(self) -> None:
        with self._lock:
            clients = list(self._clients)
        for conn in clients:
            try:
                conn.send(RELOAD_MESSAGE)
            except Exception:
                with self._lock:
                    self._clients.discard(conn)

    # -- http side ----------------------------------------------------------

    def _process_request(self, connection, request):
        path = urllib.parse.unquote(urllib.parse.urlsplit(request.path).path)
        if path == self.reload_endpoint:
            return None  # continue with the WebSocket handshake
        return self._serve_file(path)

    def _serve_file(self, path: str) -> Response:
        out_dir = Path(self.config.out_dir).resolve()
        if path == "/":
            index = out_dir / "index.html"
            if index.is_file():
                return self._file_response(index)
            return self._listing_response(out_dir)
        candidate = (out_dir / path.lstrip("/")).resolve()
        if not str(candidate).startswith(str(out_dir) + "/") and candidate != out_dir:
            return _response(403, "Forbidden", "text/plain; charset=utf-8", b"forbidden\n")
        if not candidate.is_file():
            return _response(404, "Not Found", "text/plain; charset=utf-8", b"not found\n")
        return self._file_response(candidate)

    def _file_response(self, file_path: Path) -> Response:
        body = file_path.read_bytes()
        content_type = CONTENT_TYPES.get(file_path.suffix, "application/octet-stream")
        return _response(200, "OK", content_type, body)

    def _listing_response(self, out_dir: Path) -> Response:
        names = sorted(p.name for p in out_dir.glob("*.html"))
        items = "\n".join(
            f'      <li><a href="/{html.escape(n, quote=True)}">{html.escape(n)}</a></li>'
            for n in names
        )
        body = (
            "<!DOCTYPE html>\n<html>\n  <head>\n"
            '    <meta charset="utf-8" />\n'
            "    <title>sketch2ui preview</title>\n  </head>\n  <body>\n"
            f"    <h1>Generated pages (generation {self.generation})</h1>\n"
            f"    <ul>\n{items}\n    </ul>\n"
            "    <script>\n"
            f'      var ws = new WebSocket("ws://" + location.host + {json.dumps(self.reload_endpoint)});\n'
            "      ws.onmessage = function () { location.reload(); };\n"
            "    </script>\n  </body>\n</html>\n"
        ).encode("utf-8")
        return _response(200, "OK", "text/html; charset=utf-8", body)

    # -- watcher -------------------------------------------------------------

    def _watched_paths(self) -> list[str]:
        paths = [self.config.detections_path, self.config.classes_path]
        if self.config.rules_path:
            paths.append(self.config.rules_path)
        return paths

    def _snapshot(self) -> tuple:
        entries = []
        for p in self._watched_paths():
            try:
                st = Path(p).stat()
                entries.append((p, st.st_mtime_ns, st.st_size))
            except OSError:
                entries.append((p, None, None))
        return tuple(entries)

    def _watch_loop(self) -> None:
        previous = self._snapshot()
        while not self._stop.wait(self.poll_interval):
            current = self._snapshot()
            if current == previous:
                continue
            previous = current
            try:
                self.compile_once()
            except InputError as exc:
                log.error("recompile failed, keeping previous output: %s", exc)
                continue
            except OSError as exc:
                log.error("recompile I/O failure, keeping previous output: %s", exc)
                continue
            self.generation += 1
            self.broadcast_reload()
            log.info("recompiled (generation %d), reload broadcast sent", self.generation)


