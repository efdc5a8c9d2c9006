"""Sessions and credentials.

Tokens are 128-bit random values (32 hex chars) held server-side in
memory with their subject, role and expiry; credentials live in the store
as salted PBKDF2-SHA256 hashes with a configurable iteration count. Login
answers identically for an unknown user and a wrong password.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading
import time
from dataclasses import dataclass

from fnucis.appserver.capabilities import is_allowed
from fnucis.domain.errors import DomainError
from fnucis.domain.model import Credential
from fnucis.domain.state import EntityState


class BadCredentials(DomainError):
    code = "bad-credentials"


class AccountInactive(DomainError):
    code = "account-inactive"


class TokenExpired(DomainError):
    code = "token-expired"


class TokenUnknown(DomainError):
    code = "token-unknown"


class Forbidden(DomainError):
    code = "forbidden"


@dataclass
class Session:
    token: str
    subject: str
    role: str
    expires_at: float


def hash_password(password: str, salt: bytes, iterations: int) -> bytes:
    return hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)


def make_credential(username: str, person: str, role: str, password: str,
                    iterations: int, active: bool = True) -> Credential:
    salt = secrets.token_bytes(16)
    return Credential(username, person, role, salt, hash_password(password, salt, iterations), iterations, active)


class SessionStore:
    """In-memory token table; thread-safe."""

    def __init__(self, ttl_hours: float, clock=time.time):
        self.ttl_seconds = ttl_hours * 3600.0
        self.clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def issue(self, subject: str, role: str) -> Session:
        token = secrets.token_hex(16)
        session = Session(token, subject, role, self.clock() + self.ttl_seconds)
        with self._lock:
            self._sessions[token] = session
        return session

    def lookup(self, token: str) -> Session:
        with self._lock:
            session = self._sessions.get(token)
        if session is None:
            raise TokenUnknown("no such session")
        if self.clock() > session.expires_at:
            with self._lock:
                self._sessions.pop(token, None)
            raise TokenExpired("session expired")
        return session

    def revoke(self, token: str) -> None:
        with self._lock:
            if token not in self._sessions:
                raise TokenUnknown("no such session")
            del self._sessions[token]


class Authenticator:
    def __init__(self, sessions: SessionStore, iterations: int):
        self.sessions = sessions
        self.iterations = iterations
        # fixed decoy keeps the work identical when the username is unknown
        self._decoy_salt = secrets.token_bytes(16)

    def login(self, state: EntityState, username: str, password: str) -> Session:
        credential: Credential | None = state.get("cred", username)
        if credential is None:
            hash_password(password, self._decoy_salt, self.iterations)
            raise BadCredentials("unknown user or wrong password")
        attempt = hash_password(password, credential.salt, credential.iterations)
        if not hmac.compare_digest(attempt, credential.pw_hash):
            raise BadCredentials("unknown user or wrong password")
        if not credential.active:
            raise AccountInactive(f"account {username} is not active")
        return self.sessions.issue(credential.person, credential.role)

    def authorize(self, token: str, capability: str) -> Session:
        session = self.sessions.lookup(token)
        if not is_allowed(session.role, capability):
            raise Forbidden(f"role {session.role} lacks capability {capability}")
        return session
