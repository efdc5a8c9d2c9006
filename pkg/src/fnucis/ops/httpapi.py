"""Minimal JSON-over-HTTP client for the gateway (stdlib only).

Used by seeding, the smoke scenario, the benchmark workers and tests.
Redirects are not followed (the HR stub answers 302 and callers want to
see it); non-2xx responses come back as ApiError carrying the decoded
error body.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.parse
import urllib.request


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, body):
        super().__init__(f"HTTP {status} {code}: {message}")
        self.status = status
        self.code = code
        self.message = message
        self.body = body


class _NoRedirect(urllib.request.HTTPRedirectHandler):
    def redirect_request(self, req, fp, code, msg, headers, newurl):
        return None


class HttpClient:
    def __init__(self, base_url: str, timeout: float = 15.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.token: str | None = None
        self._opener = urllib.request.build_opener(_NoRedirect)

    def request(self, method: str, path: str, body=None, query: dict | None = None,
                token: str | None = None):
        """Returns (status, decoded_body, headers). Raises ApiError on 4xx/5xx."""
        url = self.base_url + path
        if query:
            url += "?" + urllib.parse.urlencode(query)
        data = json.dumps(body).encode("utf-8") if body is not None else None
        req = urllib.request.Request(url, data=data, method=method)
        req.add_header("Accept", "application/json")
        if data is not None:
            req.add_header("Content-Type", "application/json")
        bearer = token if token is not None else self.token
        if bearer:
            req.add_header("Authorization", f"Bearer {bearer}")
        try:
            with self._opener.open(req, timeout=self.timeout) as resp:
                return resp.status, self._decode(resp.read()), dict(resp.headers)
        except urllib.error.HTTPError as exc:
            raw = exc.read()
            if exc.code in (301, 302, 303, 307, 308):
                return exc.code, self._decode(raw), dict(exc.headers)
            decoded = self._decode(raw)
            code = decoded.get("code", "internal") if isinstance(decoded, dict) else "internal"
            message = decoded.get("message", "") if isinstance(decoded, dict) else str(decoded)
            raise ApiError(exc.code, code, message, decoded) from None

    @staticmethod
    def _decode(raw: bytes):
        if not raw:
            return None
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            return raw.decode("utf-8", "replace")

    def get(self, path, query=None, token=None):
        return self.request("GET", path, query=query, token=token)[1]

    def post(self, path, body=None, token=None):
        return self.request("POST", path, body=body, token=token)[1]

    def put(self, path, body=None, token=None):
        return self.request("PUT", path, body=body, token=token)[1]

    def delete(self, path, body=None, token=None):
        return self.request("DELETE", path, body=body, token=token)[1]

    def login(self, username: str, password: str) -> dict:
        session = self.post("/api/login", {"username": username, "password": password})
        self.token = session["token"]
        return session

    def logout(self) -> None:
        if self.token:
            self.post("/api/logout")
            self.token = None
