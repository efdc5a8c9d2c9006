"""Server side: connection handling, request dispatch, graceful stop.

Servants are plain objects bound under an object name together with the
interface they implement; dispatch decodes arguments against the method
signature and calls the attribute of the same name. Per-request failures
become ErrorReply frames, never connection teardown. Requests on one
connection are dispatched concurrently on a worker pool, so servant code
must be independently safe.
"""

from __future__ import annotations

import logging
import socket
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from fnucis.middleware import codec
from fnucis.middleware.errors import RemoteCallError, RpcError
from fnucis.middleware.idl import I32, STRING, IdlDocument
from fnucis.middleware.wire import DEFAULT_BODY_CAP, MessageKind, ObjectRef, WireMessage, frame, unframe

log = logging.getLogger(__name__)


class BindFailedError(RpcError):
    """Listening socket could not be bound."""


@dataclass(frozen=True)
class Servant:
    interface_name: str
    impl: object


def _encode_error_body(code: str, message: str, doc: IdlDocument) -> bytes:
    return codec.encode_value(code, STRING, doc) + codec.encode_value(message, STRING, doc)


def encode_ref_fields(ref: ObjectRef | None, doc: IdlDocument) -> bytes:
    """ResolveReply body: presence byte, then host/port/object/interface."""
    if ref is None:
        return b"\x00"
    return (
        b"\x01"
        + codec.encode_value(ref.host, STRING, doc)
        + codec.encode_value(ref.port, I32, doc)
        + codec.encode_value(ref.object_name, STRING, doc)
        + codec.encode_value(ref.interface_name, STRING, doc)
    )


class RpcServer:
    """Accepts connections and dispatches requests to bound servants."""

    def __init__(self, host: str, port: int, doc: IdlDocument, servants: dict[str, Servant], *,
                 body_cap: int = DEFAULT_BODY_CAP, max_workers: int = 16,
                 resolver: Callable[[str], ObjectRef | None] | None = None):
        self.doc = doc
        self.servants = dict(servants)
        self.body_cap = body_cap
        self._resolver = resolver
        self._stopping = False
        self._conns: set[socket.socket] = set()
        self._lock = threading.Lock()
        self._inflight = 0
        self._drained = threading.Condition(self._lock)
        self._threads: list[threading.Thread] = []
        try:
            self._listener = socket.create_server((host, port), backlog=128)
        except OSError as exc:
            raise BindFailedError(f"bind {host}:{port} failed: {exc}") from exc
        self.host, self.port = self._listener.getsockname()[:2]
        self._pool = ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix=f"rpc-{self.port}")
        self._acceptor = threading.Thread(target=self._accept_loop, daemon=True, name=f"rpc-accept-{self.port}")
        self._acceptor.start()

    @property
    def endpoint(self) -> tuple[str, int]:
        return (self.host, self.port)

    def ref(self, object_name: str) -> ObjectRef:
        servant = self.servants[object_name]
        return ObjectRef(self.host, self.port, object_name, servant.interface_name)

    def _accept_loop(self) -> None:
        while True:
            try:
                conn, _addr = self._listener.accept()
            except OSError:
                return  # listener closed
            if self._stopping:
                conn.close()
                continue
            with self._lock:
                self._conns.add(conn)
            t = threading.Thread(target=self._serve_connection, args=(conn,), daemon=True)
            t.start()
            self._threads.append(t)

    def _serve_connection(self, conn: socket.socket) -> None:
        stream = conn.makefile("rb")
        write_lock = threading.Lock()

        def send(msg: WireMessage) -> None:
            data = frame(msg, self.body_cap)
            try:
                with write_lock:
                    conn.sendall(data)
            except OSError:
                pass  # peer gone; request effects already applied

        try:
            while True:
                msg = unframe(stream, self.body_cap)
                if msg is None:
                    return
                if msg.kind == MessageKind.PING:
                    send(WireMessage(MessageKind.PONG, msg.request_id))
                    continue
                if msg.kind == MessageKind.RESOLVE:
                    send(self._handle_resolve(msg))
                    continue
                if msg.kind != MessageKind.REQUEST:
                    send(WireMessage(MessageKind.ERROR_REPLY, msg.request_id,
                                     _encode_error_body("protocol", f"unexpected kind {int(msg.kind)}", self.doc)))
                    continue
                if self._stopping:
                    send(WireMessage(MessageKind.ERROR_REPLY, msg.request_id,
                                     _encode_error_body("unavailable", "server stopping", self.doc)))
                    continue
                with self._lock:
                    self._inflight += 1
                self._pool.submit(self._dispatch, msg, send)
        except RpcError as exc:
            log.debug("connection dropped: %s", exc)
        finally:
            with self._lock:
                self._conns.discard(conn)
            try:
                conn.close()
            except OSError:
                pass

    def _handle_resolve(self, msg: WireMessage) -> WireMessage:
        if self._resolver is None:
            return WireMessage(MessageKind.ERROR_REPLY, msg.request_id,
                               _encode_error_body("not-supported", "no naming table here", self.doc))
        try:
            name, _ = codec.decode_value(msg.body, STRING, self.doc)
        except codec.CodecError:
            return WireMessage(MessageKind.ERROR_REPLY, msg.request_id,
                               _encode_error_body("bad-arguments", "malformed resolve body", self.doc))
        ref = self._resolver(str(name))
        return WireMessage(MessageKind.RESOLVE_REPLY, msg.request_id, encode_ref_fields(ref, self.doc))

    def _dispatch(self, msg: WireMessage, send) -> None:
        try:
            send(self._execute(msg))
        finally:
            with self._drained:
                self._inflight -= 1
                self._drained.notify_all()

    def _execute(self, msg: WireMessage) -> WireMessage:
        rid = msg.request_id

        def error(code: str, message: str) -> WireMessage:
            return WireMessage(MessageKind.ERROR_REPLY, rid, _encode_error_body(code, message, self.doc))

        try:
            object_name, off = codec.decode_value(msg.body, STRING, self.doc)
            method_name, off = codec.decode_value(msg.body, STRING, self.doc, off)
        except codec.CodecError as exc:
            return error("bad-arguments", f"malformed request header: {exc}")
        servant = self.servants.get(str(object_name))
        if servant is None:
            return error("no-such-object", f"no servant bound as {object_name!r}")
        sig = self.doc.interface(servant.interface_name).method(str(method_name))
        if sig is None:
            return error("no-such-method", f"{servant.interface_name} has no method {method_name!r}")
        args = []
        try:
            for param in sig.params:
                value, off = codec.decode_value(msg.body, param.type, self.doc, off)
                args.append(value)
        except codec.CodecError as exc:
            return error("bad-arguments", f"argument {param.name!r}: {exc}")
        if off != len(msg.body):
            return error("bad-arguments", f"{len(msg.body) - off} trailing bytes after arguments")
        target = getattr(servant.impl, str(method_name), None)
        if not callable(target):
            return error("no-such-method", f"servant {object_name!r} does not implement {method_name!r}")
        try:
            result = target(*args)
        except RemoteCallError as exc:
            return error(exc.code, exc.message)
        except Exception:
            log.exception("servant %s.%s failed", object_name, method_name)
            return error("internal", "unexpected failure in servant")
        try:
            body = codec.encode_value(result, sig.returns, self.doc)
        except codec.CodecError:
            log.exception("servant %s.%s returned a non-conformant value", object_name, method_name)
            return error("internal", "servant returned a non-conformant value")
        return WireMessage(MessageKind.REPLY, rid, body)

    def stop(self, drain_timeout: float = 30.0) -> None:
        """Refuse new connections, let in-flight requests finish, then close."""
        self._stopping = True
        try:
            self._listener.close()
        except OSError:
            pass
        with self._drained:
            self._drained.wait_for(lambda: self._inflight == 0, timeout=drain_timeout)
        with self._lock:
            conns = list(self._conns)
        for conn in conns:
            # shutdown (not just close) so peers see EOF even while the
            # connection's makefile stream still holds the descriptor
            try:
                conn.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            try:
                conn.close()
            except OSError:
                pass
        self._pool.shutdown(wait=True)


def serve(host: str, port: int, servants: dict[str, Servant], doc: IdlDocument, **kwargs) -> RpcServer:
    """Bind and start serving; returns the running handle."""
    return RpcServer(host, port, doc, servants, **kwargs)
