"""Client-side invocation: one multiplexed connection, many in-flight calls.

A connection carries pipelined request/reply traffic; request ids are
assigned monotonically per connection and replies are matched back to the
waiting caller by id. Calls have at-most-once semantics: nothing is ever
retransmitted, a timeout or connection loss surfaces as an error.
"""

from __future__ import annotations

import itertools
import socket
import threading

from fnucis.middleware import codec
from fnucis.middleware.errors import (
    ConnectFailedError,
    ProtocolError,
    RemoteCallError,
    RpcTimeoutError,
)
from fnucis.middleware.idl import STRING, IdlDocument, MethodSignature
from fnucis.middleware.wire import DEFAULT_BODY_CAP, MessageKind, ObjectRef, WireMessage, frame, unframe

DEFAULT_TIMEOUT = 10.0


class _Pending:
    __slots__ = ("event", "reply", "error")

    def __init__(self):
        self.event = threading.Event()
        self.reply: WireMessage | None = None
        self.error: Exception | None = None


class Connection:
    """A live stream connection multiplexing request/reply by id. Thread-safe."""

    def __init__(self, host: str, port: int, *, connect_timeout: float = DEFAULT_TIMEOUT,
                 body_cap: int = DEFAULT_BODY_CAP):
        self.host = host
        self.port = port
        self.body_cap = body_cap
        try:
            self._sock = socket.create_connection((host, port), timeout=connect_timeout)
        except OSError as exc:
            raise ConnectFailedError(f"connect to {host}:{port} failed: {exc}") from exc
        self._sock.settimeout(None)
        self._stream = self._sock.makefile("rb")
        self._ids = itertools.count(1)
        self._lock = threading.Lock()  # guards _pending and id assignment
        self._write_lock = threading.Lock()
        self._pending: dict[int, _Pending] = {}
        self._dead: Exception | None = None
        self._reader = threading.Thread(target=self._read_loop, daemon=True, name=f"rpc-reader-{host}:{port}")
        self._reader.start()

    @property
    def alive(self) -> bool:
        return self._dead is None

    def call(self, kind: MessageKind, body: bytes, timeout: float) -> WireMessage:
        """Send one message and wait for the reply carrying the same id."""
        pending = _Pending()
        with self._lock:
            if self._dead is not None:
                raise ConnectFailedError(f"connection to {self.host}:{self.port} is closed") from self._dead
            request_id = next(self._ids)
            self._pending[request_id] = pending
        data = frame(WireMessage(kind, request_id, body), self.body_cap)
        try:
            with self._write_lock:
                self._sock.sendall(data)
        except OSError as exc:
            with self._lock:
                self._pending.pop(request_id, None)
            self._fail(ConnectFailedError(f"send failed: {exc}"))
            raise ConnectFailedError(f"send to {self.host}:{self.port} failed: {exc}") from exc
        if not pending.event.wait(timeout):
            with self._lock:
                self._pending.pop(request_id, None)
            raise RpcTimeoutError(f"no reply from {self.host}:{self.port} within {timeout}s")
        if pending.error is not None:
            raise pending.error
        assert pending.reply is not None
        return pending.reply

    def _read_loop(self) -> None:
        try:
            while True:
                msg = unframe(self._stream, self.body_cap)
                if msg is None:
                    self._fail(ConnectFailedError("connection closed by peer"))
                    return
                with self._lock:
                    pending = self._pending.pop(msg.request_id, None)
                if pending is None:
                    continue  # late reply after local timeout; drop
                pending.reply = msg
                pending.event.set()
        except Exception as exc:
            self._fail(ConnectFailedError(f"connection lost: {exc}"))

    def _fail(self, exc: Exception) -> None:
        with self._lock:
            if self._dead is None:
                self._dead = exc
            pending = list(self._pending.values())
            self._pending.clear()
        for p in pending:
            p.error = exc
            p.event.set()
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        try:
            self._sock.close()
        except OSError:
            pass

    def close(self) -> None:
        self._fail(ConnectFailedError("connection closed locally"))


class RpcClient:
    """Typed invocation against one endpoint, driven by a shared contract document.

    Safe for concurrent callers; reconnects lazily after a lost connection
    (a fresh connection is only used for calls that were never sent).
    """

    def __init__(self, host: str, port: int, doc: IdlDocument, *,
                 timeout: float = DEFAULT_TIMEOUT, body_cap: int = DEFAULT_BODY_CAP):
        self.host = host
        self.port = port
        self.doc = doc
        self.timeout = timeout
        self.body_cap = body_cap
        self._conn: Connection | None = None
        self._conn_lock = threading.Lock()

    def _connection(self) -> Connection:
        with self._conn_lock:
            if self._conn is None or not self._conn.alive:
                self._conn = Connection(self.host, self.port, connect_timeout=self.timeout, body_cap=self.body_cap)
            return self._conn

    def signature(self, interface_name: str, method: str) -> MethodSignature:
        if not self.doc.has_interface(interface_name):
            raise ProtocolError(f"interface {interface_name!r} not in contract")
        sig = self.doc.interface(interface_name).method(method)
        if sig is None:
            raise ProtocolError(f"method {method!r} not on interface {interface_name!r}")
        return sig

    def invoke(self, object_name: str, interface_name: str, method: str, args: list, *,
               timeout: float | None = None):
        """Call method on the named servant; returns the decoded result value."""
        sig = self.signature(interface_name, method)
        if len(args) != len(sig.params):
            raise ProtocolError(f"{method}: expected {len(sig.params)} args, got {len(args)}")
        body = bytearray()
        body += codec.encode_value(object_name, STRING, self.doc)
        body += codec.encode_value(method, STRING, self.doc)
        for arg, param in zip(args, sig.params):
            body += codec.encode_value(arg, param.type, self.doc)
        reply = self._connection().call(MessageKind.REQUEST, bytes(body), timeout or self.timeout)
        if reply.kind == MessageKind.ERROR_REPLY:
            raise decode_error_reply(reply.body, self.doc)
        if reply.kind != MessageKind.REPLY:
            raise ProtocolError(f"unexpected reply kind {reply.kind!r}")
        try:
            value, consumed = codec.decode_value(reply.body, sig.returns, self.doc)
        except codec.CodecError as exc:
            raise ProtocolError(f"malformed reply body: {exc}") from exc
        if consumed != len(reply.body):
            raise ProtocolError(f"reply body has {len(reply.body) - consumed} trailing bytes")
        return value

    def invoke_ref(self, ref: ObjectRef, method: str, args: list, *, timeout: float | None = None):
        if (ref.host, ref.port) != (self.host, self.port):
            raise ProtocolError(f"ref points at {ref.host}:{ref.port}, client bound to {self.host}:{self.port}")
        return self.invoke(ref.object_name, ref.interface_name, method, args, timeout=timeout)

    def ping(self, *, timeout: float | None = None) -> None:
        reply = self._connection().call(MessageKind.PING, b"", timeout or self.timeout)
        if reply.kind != MessageKind.PONG:
            raise ProtocolError(f"expected Pong, got {reply.kind!r}")

    def close(self) -> None:
        with self._conn_lock:
            if self._conn is not None:
                self._conn.close()
                self._conn = None

    def __enter__(self) -> "RpcClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def decode_error_reply(body: bytes, doc: IdlDocument) -> RemoteCallError:
    """ErrorReply body is two strings: stable code, then human message."""
    try:
        code, off = codec.decode_value(body, STRING, doc)
        message, _ = codec.decode_value(body, STRING, doc, off)
    except codec.CodecError:
        return RemoteCallError("internal", "undecodable error reply")
    return RemoteCallError(str(code), str(message))


def invoke(ref: ObjectRef, method: str, args: list, doc: IdlDocument,
           timeout: float = DEFAULT_TIMEOUT):
    """One-shot call against a reference, on a connection opened for the call."""
    with RpcClient(ref.host, ref.port, doc, timeout=timeout) as client:
        return client.invoke(ref.object_name, ref.interface_name, method, args)
