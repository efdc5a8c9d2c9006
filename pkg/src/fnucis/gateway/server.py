"""HTTP server for the web tier.

Holds zero business logic: each API request is authenticated against the
Auth servant, translated into exactly one middleware invocation via the
route table, and the reply (or error code) is mapped onto HTTP statuses
from the shared registry. Static portal assets are served from a
directory; sessions live in the application tier, so restarting the
gateway loses nothing.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qsl, unquote, urlsplit

from fnucis.contracts import SERVICE_INTERFACES, campus_doc, error_registry, http_status_for
from fnucis.gateway.routes import RequestContext, Route, SchemaError, find_route
from fnucis.middleware.client import RpcClient
from fnucis.middleware.errors import (
    ConnectFailedError,
    NotBoundError,
    RemoteCallError,
    RpcError,
    RpcTimeoutError,
)
from fnucis.middleware.naming import resolve
from fnucis.middleware.wire import ObjectRef

log = logging.getLogger(__name__)

SESSION_COOKIE = "fnucis_session"


class UnavailableError(Exception):
    """App tier or registry cannot be reached right now (HTTP 503)."""


@dataclass
class GatewayConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    registry_host: str = "127.0.0.1"
    registry_port: int = 7010
    asset_dir: str | None = None
    hr_url: str = "https://hr.example.org/"
    rpc_timeout: float = 10.0


class ServantPool:
    """Name -> (ref, client) cache; resolves lazily, re-resolves after loss."""

    def __init__(self, config: GatewayConfig):
        self.config = config
        self._lock = threading.Lock()
        self._refs: dict[str, ObjectRef] = {}
        self._clients: dict[tuple[str, int], RpcClient] = {}

    def _resolve(self, name: str) -> ObjectRef:
        registry = (self.config.registry_host, self.config.registry_port)
        try:
            return resolve(registry, name, timeout=self.config.rpc_timeout)
        except NotBoundError as exc:
            raise UnavailableError(f"service {name!r} is not registered") from exc
        except RpcError as exc:
            raise UnavailableError(f"registry unreachable: {exc}") from exc

    def get(self, name: str) -> tuple[ObjectRef, RpcClient]:
        with self._lock:
            ref = self._refs.get(name)
        if ref is None:
            ref = self._resolve(name)
            with self._lock:
                self._refs[name] = ref
        with self._lock:
            client = self._clients.get(ref.endpoint())
            if client is None:
                client = RpcClient(ref.host, ref.port, campus_doc(), timeout=self.config.rpc_timeout)
                self._clients[ref.endpoint()] = client
        return ref, client

    def invalidate(self, name: str) -> None:
        with self._lock:
            ref = self._refs.pop(name, None)
            if ref is not None:
                client = self._clients.pop(ref.endpoint(), None)
                if client is not None:
                    client.close()

    def close(self) -> None:
        with self._lock:
            for client in self._clients.values():
                client.close()
            self._clients.clear()
            self._refs.clear()


@dataclass
class HttpResponse:
    status: int
    body: bytes
    content_type: str = "application/json"
    headers: tuple[tuple[str, str], ...] = ()


def _json_response(status: int, payload) -> HttpResponse:
    return HttpResponse(status, json.dumps(payload, sort_keys=True).encode("utf-8"))


def _error_response(code: str, message: str | None = None) -> HttpResponse:
    status, default_message = error_registry().get(code, (500, "Unexpected error."))
    return _json_response(status, {"code": code, "message": message or default_message})


class Gateway:
    """Transport-independent request translation; the HTTP handler stays thin."""

    def __init__(self, config: GatewayConfig):
        self.config = config
        self.pool = ServantPool(config)

    # -- middleware plumbing ------------------------------------------------------

    def call(self, servant: str, method: str, args: list):
        interface = SERVICE_INTERFACES[servant]
        for attempt in (0, 1):
            _, client = self.pool.get(servant)
            try:
                return client.invoke(servant, interface, method, args)
            except ConnectFailedError:
                self.pool.invalidate(servant)
                if attempt == 1:
                    raise
        raise AssertionError("unreachable")

    def authenticate(self, route: Route, ctx: RequestContext) -> None:
        if route.cap is None:
            return
        if not ctx.token:
            raise RemoteCallError("auth-required", "no session token supplied")
        if route.own_cap is not None:
            who = self.call("auth", "whoami", [ctx.token])
            ctx.subject, ctx.role = who["subject"], who["role"]
        capability = route.required_capability(ctx)
        actor = self.call("auth", "authorize", [ctx.token, capability])
        ctx.subject, ctx.role = actor["subject"], actor["role"]

    # -- request handling ------------------------------------------------------------

    def handle_api(self, method: str, path: str, query: dict[str, str],
                   token: str | None, body_raw: bytes) -> HttpResponse:
        if method == "GET" and path == "/api/health":
            return self._health()
        if method == "GET" and path == "/api/errors":
            table = {code: message for code, (_, message) in sorted(error_registry().items())}
            return _json_response(200, table)
        if method == "GET" and path == "/api/config":
            return self._config_endpoint()
        if method == "GET" and path == "/api/hr":
            return HttpResponse(302, b"", "text/plain", (("Location", self.config.hr_url),))

        found = find_route(method, path)
        if found is None:
            return _error_response("not-found", f"no route for {method} {path}")
        route, params = found
        if "key" in params:  # offering key path segment: unit~campus~term
            parts = unquote(params.pop("key")).split("~")
            if len(parts) != 3:
                return _error_response("bad-request", "offering key must be unit~campus~term")
            params.update({"unit": parts[0], "campus": parts[1], "term": parts[2]})

        body: object = {}
        if body_raw:
            try:
                body = json.loads(body_raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError):
                return _error_response("bad-request", "body is not valid JSON")

        ctx = RequestContext(path_params=params, query=query, body=body, token=token)
        try:
            self.authenticate(route, ctx)
            args = [arg.build(ctx) for arg in route.args]
            result = self.call(route.servant, route.rpc, args)
        except SchemaError as exc:
            return _error_response("bad-request", str(exc))
        except RemoteCallError as exc:
            return _error_response(exc.code, exc.message or None)
        except RpcTimeoutError:
            return _error_response("timeout")
        except ConnectFailedError:
            return _error_response("connect-failed")
        except UnavailableError as exc:
            return _error_response("unavailable", str(exc))

        response = _json_response(route.status, result)
        if route.rpc == "login":
            response = HttpResponse(
                response.status, response.body, response.content_type,
                (("Set-Cookie", f"{SESSION_COOKIE}={result['token']}; Path=/; HttpOnly"),),
            )
        elif route.rpc == "logout":
            response = HttpResponse(
                response.status, response.body, response.content_type,
                (("Set-Cookie", f"{SESSION_COOKIE}=; Path=/; Max-Age=0"),),
            )
        return response

    def _health(self) -> HttpResponse:
        try:
            _, client = self.pool.get("auth")
            client.ping(timeout=2.0)
            app_state = "ok"
        except (RpcError, UnavailableError):
            app_state = "down"
        return _json_response(200, {"status": "ok", "app": app_state})

    def _config_endpoint(self) -> HttpResponse:
        try:
            term = self.call("directory", "current_term", [])
        except (RpcError, UnavailableError):
            return _error_response("unavailable", "application tier is not reachable")
        return _json_response(200, {"current_term": term, "hr_url": self.config.hr_url})

    # -- static assets --------------------------------------------------------------

    def handle_asset(self, path: str) -> HttpResponse:
        root = Path(self.config.asset_dir).resolve() if self.config.asset_dir else None
        if root is None or not root.is_dir():
            return HttpResponse(404, b"no portal assets deployed\n", "text/plain")
        relative = unquote(path).lstrip("/") or "index.html"
        target = (root / relative).resolve()
        if not str(target).startswith(str(root)):
            return HttpResponse(404, b"not found\n", "text/plain")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            # client-side routes fall back to the portal shell
            index = root / "index.html"
            if "." not in relative.rsplit("/", 1)[-1] and index.is_file():
                target = index
            else:
                return HttpResponse(404, b"not found\n", "text/plain")
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        return HttpResponse(200, target.read_bytes(), content_type)


class _Handler(BaseHTTPRequestHandler):
    gateway: Gateway = None  # set by server factory
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default; debug via logging
        log.debug("http %s", fmt % args)

    def _token(self) -> str | None:
        auth = self.headers.get("Authorization", "")
        if auth.startswith("Bearer "):
            return auth[len("Bearer "):].strip()
        cookies = self.headers.get("Cookie", "")
        for part in cookies.split(";"):
            name, _, value = part.strip().partition("=")
            if name == SESSION_COOKIE and value:
                return value
        return None

    def _dispatch(self, method: str) -> None:
        split = urlsplit(self.path)
        path = unquote(split.path)
        query = dict(parse_qsl(split.query))
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length) if length else b""
        try:
            if path.startswith("/api/") or path == "/api":
                response = self.gateway.handle_api(method, path, query, self._token(), body)
            elif method == "GET":
                response = self.gateway.handle_asset(path)
            else:
                response = _error_response("not-found", f"no route for {method} {path}")
        except Exception:
            log.exception("unhandled gateway error for %s %s", method, path)
            response = _error_response("internal")
        self.send_response(response.status)
        self.send_header("Content-Type", response.content_type)
        self.send_header("Content-Length", str(len(response.body)))
        for name, value in response.headers:
            self.send_header(name, value)
        self.end_headers()
        if response.body:
            self.wfile.write(response.body)

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_PUT(self):
        self._dispatch("PUT")

    def do_DELETE(self):
        self._dispatch("DELETE")


class GatewayServer:
    """Running web tier handle."""

    def __init__(self, config: GatewayConfig):
        self.config = config
        self.gateway = Gateway(config)
        handler = type("BoundHandler", (_Handler,), {"gateway": self.gateway})
        server_cls = type("GatewayHTTPServer", (ThreadingHTTPServer,), {"request_queue_size": 128})
        self._httpd = server_cls((config.listen_host, config.listen_port), handler)
        self._httpd.daemon_threads = True
        self._thread: threading.Thread | None = None

    @property
    def endpoint(self) -> tuple[str, int]:
        host, port = self._httpd.server_address[:2]
        return (str(host), int(port))

    def start(self) -> "GatewayServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True,
                                        name=f"gateway-{self.endpoint[1]}")
        self._thread.start()
        log.info("gateway on http://%s:%s", *self.endpoint)
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self.gateway.pool.close()
        if self._thread is not None:
            self._thread.join(timeout=5)
