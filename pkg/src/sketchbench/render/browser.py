"""Headless-browser gateway over the remote-debugging wire protocol.

The harness never embeds a layout engine: it speaks the browser's
message-based debugging protocol (JSON commands with incrementing ids,
responses matched by id, plus asynchronous events) over a websocket.

Determinism settings applied to every render: animations and transitions
disabled, caret hidden, a default font stack injected on the root
element, all network schemes blocked (inline ``data:`` resources still
load), and the viewport sized to the full page before the screenshot.
"""

from __future__ import annotations

import io
import json
import queue
import re
import shutil
import subprocess
import threading
import time
from dataclasses import dataclass

import numpy as np

from ..geometry import Rect
from .types import RenderError, RenderResult, RenderTimeout, Viewport

__all__ = [
    "CdpError",
    "CdpConnection",
    "PageSession",
    "Browser",
    "BrowserPool",
    "CdpRenderer",
    "find_browser_executable",
]

DEFAULT_COMMAND_TIMEOUT = 30.0
DEFAULT_RENDER_TIMEOUT = 15.0

_DETERMINISM_CSS = (
    "*, *::before, *::after {"
    " animation: none !important;"
    " transition: none !important;"
    " caret-color: transparent !important; }\n"
    ":root { font-family: Arial, Helvetica, sans-serif; }"
)

_BLOCKED_URL_PATTERNS = ["http://*", "https://*", "ws://*", "wss://*", "ftp://*", "file://*"]

# Mirrors the structural-path rule of the static DOM: tag[n] segments,
# table section elements transparent.
_GEOMETRY_JS = """
(() => {
  const TRANSPARENT = new Set(["TBODY", "THEAD", "TFOOT"]);
  const out = [];
  const walk = (el, parentPath, counters) => {
    if (TRANSPARENT.has(el.tagName)) {
      for (const child of el.children) walk(child, parentPath, counters);
      return;
    }
    const tag = el.tagName.toLowerCase();
    const n = counters.get(tag) || 0;
    counters.set(tag, n + 1);
    const path = parentPath ? parentPath + "/" + tag + "[" + n + "]" : tag + "[" + n + "]";
    const r = el.getBoundingClientRect();
    out.push([path, r.left + window.scrollX, r.top + window.scrollY,
              r.right + window.scrollX, r.bottom + window.scrollY]);
    const childCounters = new Map();
    for (const child of el.children) walk(child, path, childCounters);
  };
  walk(document.documentElement, "", new Map());
  return JSON.stringify(out);
})()
"""


class CdpError(RenderError):
    """The browser answered a command with an error."""


class CdpConnection:
    """One websocket to the browser; command/response matching by id.

    A reader thread routes responses to waiting callers and queues
    events.  Thread-safe: any number of sessions may issue commands
    concurrently, each command is matched by its id.
    """

    def __init__(self, ws_url: str, open_timeout: float = 10.0):
        from websockets.sync.client import connect

        self._ws = connect(ws_url, open_timeout=open_timeout, max_size=256 * 1024 * 1024)
        self._lock = threading.Lock()
        self._next_id = 1
        self._pending: dict[int, queue.Queue] = {}
        self._events: queue.Queue = queue.Queue()
        self._closed = False
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _read_loop(self) -> None:
        try:
            while True:
                raw = self._ws.recv()
                msg = json.loads(raw)
                if "id" in msg:
                    with self._lock:
                        waiter = self._pending.pop(msg["id"], None)
                    if waiter is not None:
                        waiter.put(msg)
                else:
                    self._events.put(msg)
        except Exception:
            self._closed = True
            with self._lock:
                pending = list(self._pending.values())
                self._pending.clear()
            for waiter in pending:
                waiter.put({"error": {"message": "connection closed"}})

    def send(
        self,
        method: str,
        params: dict | None = None,
        session_id: str | None = None,
        timeout: float = DEFAULT_COMMAND_TIMEOUT,
    ) -> dict:
        if self._closed:
            raise CdpError("connection closed")
        waiter: queue.Queue = queue.Queue(maxsize=1)
        with self._lock:
            msg_id = self._next_id
            self._next_id += 1
            self._pending[msg_id] = waiter
        payload: dict = {"id": msg_id, "method": method}
        if params:
            payload["params"] = params
        if session_id:
            payload["sessionId"] = session_id
        self._ws.send(json.dumps(payload))
        try:
            msg = waiter.get(timeout=timeout)
        except queue.Empty:
            with self._lock:
                self._pending.pop(msg_id, None)
            raise CdpError(f"timed out waiting for {method}") from None
        if "error" in msg:
            err = msg["error"]
            raise CdpError(f"{method}: {err.get('message', err)}")
        return msg.get("result", {})

    def drain_events(self) -> list[dict]:
        events = []
        while True:
            try:
                events.append(self._events.get_nowait())
            except queue.Empty:
                return events

    def close(self) -> None:
        self._closed = True
        try:
            self._ws.close()
        except Exception:
            pass


class PageSession:
    """One attached page target.  A session runs one command at a time."""

    def __init__(self, conn: CdpConnection, target_id: str, session_id: str):
        self.conn = conn
        self.target_id = target_id
        self.session_id = session_id
        self._lock = threading.Lock()
        self.dead = False

    def send(self, method: str, params: dict | None = None, timeout: float = DEFAULT_COMMAND_TIMEOUT) -> dict:
        with self._lock:
            return self.conn.send(method, params, session_id=self.session_id, timeout=timeout)

    def console_errors(self) -> list[str]:
        errors = []
        for event in self.conn.drain_events():
            if event.get("sessionId") != self.session_id:
                continue
            method = event.get("method")
            params = event.get("params", {})
            if method == "Runtime.consoleAPICalled" and params.get("type") == "error":
                args = params.get("args", [])
                errors.append(" ".join(str(a.get("value", a.get("description", ""))) for a in args))
            elif method == "Log.entryAdded" and params.get("entry", {}).get("level") == "error":
                errors.append(params["entry"].get("text", ""))
        return errors


def find_browser_executable() -> str | None:
    for name in (
        "chromium",
        "chromium-browser",
        "google-chrome",
        "google-chrome-stable",
        "chrome",
        "headless_shell",
    ):
        path = shutil.which(name)
        if path:
            return path
    return None


class Browser:
    """Connection owner: attach to a running browser or launch one."""

    def __init__(self, conn: CdpConnection, process: subprocess.Popen | None = None):
        self.conn = conn
        self._process = process

    @classmethod
    def connect(cls, ws_url: str) -> "Browser":
        return cls(CdpConnection(ws_url))

    @classmethod
    def launch(cls, executable: str | None = None, extra_args: list[str] | None = None) -> "Browser":
        executable = executable or find_browser_executable()
        if executable is None:
            raise RenderError("no browser executable found; pass one explicitly")
        args = [
            executable,
            "--headless=new",
            "--remote-debugging-port=0",
            "--no-sandbox",
            "--disable-gpu",
            "--hide-scrollbars",
            "--disable-lcd-text",
            "--force-color-profile=srgb",
            "--font-render-hinting=none",
        ] + (extra_args or [])
        process = subprocess.Popen(args, stdout=subprocess.DEVNULL, stderr=subprocess.PIPE, text=True)
        ws_url = None
        deadline = time.monotonic() + 30.0
        pattern = re.compile(r"DevTools listening on (ws://\S+)")
        while time.monotonic() < deadline:
            line = process.stderr.readline()
            if not line:
                time.sleep(0.05)
                continue
            m = pattern.search(line)
            if m:
                ws_url = m.group(1)
                break
        if ws_url is None:
            process.kill()
            raise RenderError("browser did not report a debugging endpoint")
        return cls(CdpConnection(ws_url), process)

    def new_page(self) -> PageSession:
        created = self.conn.send("Target.createTarget", {"url": "about:blank"})
        target_id = created["targetId"]
        attached = self.conn.send("Target.attachToTarget", {"targetId": target_id, "flatten": True})
        session = PageSession(self.conn, target_id, attached["sessionId"])
        for method in ("Page.enable", "Runtime.enable", "Log.enable", "Network.enable"):
            session.send(method)
        session.send("Network.setBlockedURLs", {"urls": _BLOCKED_URL_PATTERNS})
        return session

    def close_page(self, session: PageSession) -> None:
        try:
            self.conn.send("Target.closeTarget", {"targetId": session.target_id})
        except CdpError:
            pass

    def close(self) -> None:
        self.conn.close()
        if self._process is not None:
            self._process.terminate()
            try:
                self._process.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._process.kill()


class BrowserPool:
    """Bounded pool of page sessions; a crashed session is replaced."""

    def __init__(self, browser: Browser, size: int = 2, checkout_timeout: float = 60.0):
        self.browser = browser
        self.checkout_timeout = checkout_timeout
        self._idle: queue.Queue = queue.Queue()
        for _ in range(size):
            self._idle.put(browser.new_page())

    def checkout(self) -> PageSession:
        try:
            session = self._idle.get(timeout=self.checkout_timeout)
        except queue.Empty:
            raise RenderError("timed out waiting for a free browser session") from None
        if session.dead:
            self.browser.close_page(session)
            session = self.browser.new_page()
        return session

    def release(self, session: PageSession) -> None:
        if session.dead:
            self.browser.close_page(session)
            session = self.browser.new_page()
        self._idle.put(session)


@dataclass
class CdpRenderer:
    """Deterministic full-page renderer over a session pool.

    Callable as ``renderer(html, viewport) -> RenderResult`` so it is
    interchangeable with :class:`~sketchbench.render.static.StaticRenderer`.
    """

    pool: BrowserPool
    render_timeout: float = DEFAULT_RENDER_TIMEOUT

    def __call__(self, html: str, viewport: Viewport | None = None) -> RenderResult:
        viewport = viewport or Viewport()
        session = self.pool.checkout()
        try:
            result = self._render(session, html, viewport)
        except Exception:
            session.dead = True
            raise
        finally:
            self.pool.release(session)
        return result

    def _evaluate(self, session: PageSession, expression: str, timeout: float):
        result = session.send(
            "Runtime.evaluate",
            {"expression": expression, "returnByValue": True, "awaitPromise": True},
            timeout=timeout,
        )
        if "exceptionDetails" in result:
            raise CdpError(str(result["exceptionDetails"].get("text", "evaluate failed")))
        return result.get("result", {}).get("value")

    def _render(self, session: PageSession, html: str, viewport: Viewport) -> RenderResult:
        t = self.render_timeout
        deadline = time.monotonic() + t

        def remaining() -> float:
            left = deadline - time.monotonic()
            if left <= 0:
                raise RenderTimeout("render timed out", session.console_errors())
            return left

        session.send(
            "Emulation.setDeviceMetricsOverride",
            {
                "width": viewport.width,
                "height": 720,
                "deviceScaleFactor": viewport.device_scale,
                "mobile": False,
            },
            timeout=remaining(),
        )
        tree = session.send("Page.getFrameTree", timeout=remaining())
        frame_id = tree["frameTree"]["frame"]["id"]
        session.send("Page.setDocumentContent", {"frameId": frame_id, "html": html}, timeout=remaining())
        self._evaluate(
            session,
            "(() => { const s = document.createElement('style');"
            f" s.textContent = {json.dumps(_DETERMINISM_CSS)};"
            " document.documentElement.appendChild(s); })()",
            remaining(),
        )
        self._evaluate(
            session,
            "document.fonts ? document.fonts.ready.then(() => true) : true",
            remaining(),
        )
        page_height = self._evaluate(
            session,
            "Math.max(document.documentElement.scrollHeight,"
            " document.body ? document.body.scrollHeight : 0, 1)",
            remaining(),
        )
        height = int(np.ceil(float(page_height)))
        if viewport.full_page:
            session.send(
                "Emulation.setDeviceMetricsOverride",
                {
                    "width": viewport.width,
                    "height": height,
                    "deviceScaleFactor": viewport.device_scale,
                    "mobile": False,
                },
                timeout=remaining(),
            )
        shot = session.send(
            "Page.captureScreenshot",
            {"format": "png", "captureBeyondViewport": True},
            timeout=remaining(),
        )
        raw_geometry = self._evaluate(session, _GEOMETRY_JS, remaining())

        from PIL import Image
        import base64

        png = base64.b64decode(shot["data"])
        img = np.asarray(Image.open(io.BytesIO(png)).convert("RGB"))
        page = Rect(0.0, 0.0, float(viewport.width), float(height))
        geometry: dict[str, Rect] = {}
        for path, x0, y0, x1, y1 in json.loads(raw_geometry):
            rect = Rect(float(x0), float(y0), float(x1), float(y1)).clipped(page)
            geometry[path] = rect
        return RenderResult(
            screenshot=img,
            page=page,
            geometry=geometry,
            console_errors=session.console_errors(),
        )
