"""Naming registry: name -> ObjectRef bindings with last-write-wins.

Binding travels as an ordinary Request to the built-in "naming" servant.
Resolution uses the dedicated Resolve/ResolveReply message kinds so a
client can look names up without holding any contract document; the reply
body is a presence byte followed by host, port, object name and interface
name (see server.encode_ref_fields).
"""

from __future__ import annotations

import threading

from fnucis.middleware import codec
from fnucis.middleware.client import Connection, RpcClient, decode_error_reply
from fnucis.middleware.errors import NotBoundError, ProtocolError
from fnucis.middleware.idl import I32, STRING, parse_idl
from fnucis.middleware.server import RpcServer, Servant
from fnucis.middleware.wire import MessageKind, ObjectRef

NAMING_IDL = """\
// built-in registry contract
interface Naming {
    bind(name: string, host: string, port: i32, object_name: string, interface_name: string) -> bool;
}
"""

NAMING_DOC = parse_idl(NAMING_IDL)
NAMING_OBJECT = "naming"


class NamingTable:
    """Thread-safe name table; bind overwrites."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[str, ObjectRef] = {}

    def bind(self, name: str, ref: ObjectRef) -> None:
        with self._lock:
            self._entries[name] = ref

    def lookup(self, name: str) -> ObjectRef | None:
        with self._lock:
            return self._entries.get(name)

    def names(self) -> list[str]:
        with self._lock:
            return sorted(self._entries)


class _NamingServant:
    def __init__(self, table: NamingTable):
        self._table = table

    def bind(self, name, host, port, object_name, interface_name) -> bool:
        self._table.bind(str(name), ObjectRef(str(host), int(port), str(object_name), str(interface_name)))
        return True


def start_registry(host: str, port: int) -> RpcServer:
    """Run a registry server; resolves via the wire-level Resolve kind."""
    table = NamingTable()
    servants = {NAMING_OBJECT: Servant("Naming", _NamingServant(table))}
    return RpcServer(host, port, NAMING_DOC, servants, resolver=table.lookup)


def bind(registry: tuple[str, int] | ObjectRef, name: str, target: ObjectRef, *, timeout: float = 10.0) -> None:
    host, port = registry.endpoint() if isinstance(registry, ObjectRef) else registry
    with RpcClient(host, port, NAMING_DOC, timeout=timeout) as client:
        client.invoke(NAMING_OBJECT, "Naming", "bind",
                      [name, target.host, target.port, target.object_name, target.interface_name])


def resolve(registry: tuple[str, int] | ObjectRef, name: str, *, timeout: float = 10.0) -> ObjectRef:
    """Look a name up; raises NotBoundError when the registry has no binding."""
    host, port = registry.endpoint() if isinstance(registry, ObjectRef) else registry
    body = codec.encode_value(name, STRING, NAMING_DOC)
    conn = Connection(host, port, connect_timeout=timeout)
    try:
        reply = conn.call(MessageKind.RESOLVE, body, timeout)
    finally:
        conn.close()
    if reply.kind == MessageKind.ERROR_REPLY:
        raise decode_error_reply(reply.body, NAMING_DOC)
    if reply.kind != MessageKind.RESOLVE_REPLY:
        raise ProtocolError(f"expected ResolveReply, got {reply.kind!r}")
    return decode_ref_fields(reply.body, name)


def decode_ref_fields(body: bytes, name: str) -> ObjectRef:
    if not body:
        raise ProtocolError("empty resolve reply")
    if body[0] == 0:
        raise NotBoundError(name)
    if body[0] != 1:
        raise ProtocolError(f"bad presence byte {body[0]}")
    off = 1
    host, off = codec.decode_value(body, STRING, NAMING_DOC, off)
    port, off = codec.decode_value(body, I32, NAMING_DOC, off)
    object_name, off = codec.decode_value(body, STRING, NAMING_DOC, off)
    interface_name, off = codec.decode_value(body, STRING, NAMING_DOC, off)
    return ObjectRef(str(host), int(port), str(object_name), str(interface_name))
