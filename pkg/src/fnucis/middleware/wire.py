"""Framed wire protocol.

Every message travels as an 18-byte header followed by the body:

    offset  size  field
    0       4     magic, ASCII "FCIS"
    4       1     version, currently 1
    5       1     kind (MessageKind)
    6       8     request_id, u64 little-endian
    14      4     body_len, u32 little-endian

`frame` produces the bytes for one message; `unframe` reads exactly one
message from a stream and leaves it positioned at the next. Bodies larger
than the configured cap are refused on both sides.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field

from fnucis.middleware.errors import (
    BadMagicError,
    BodyTooLargeError,
    FrameTruncatedError,
    UnsupportedVersionError,
    WireError,
)

MAGIC = b"FCIS"
VERSION = 1
HEADER_LEN = 18
DEFAULT_BODY_CAP = 16 * 1024 * 1024

_HEADER = struct.Struct("<4sBBQI")


class MessageKind(enum.IntEnum):
    REQUEST = 0
    REPLY = 1
    ERROR_REPLY = 2
    PING = 3
    PONG = 4
    RESOLVE = 5
    RESOLVE_REPLY = 6


@dataclass(frozen=True)
class WireMessage:
    kind: MessageKind
    request_id: int
    body: bytes = b""


@dataclass(frozen=True)
class ObjectRef:
    """Address of a named servant on a reachable endpoint."""

    host: str
    port: int
    object_name: str
    interface_name: str

    def endpoint(self) -> tuple[str, int]:
        return (self.host, self.port)


def frame(msg: WireMessage, body_cap: int = DEFAULT_BODY_CAP) -> bytes:
    if len(msg.body) > body_cap:
        raise BodyTooLargeError(f"body of {len(msg.body)} bytes exceeds cap {body_cap}")
    header = _HEADER.pack(MAGIC, VERSION, int(msg.kind), msg.request_id, len(msg.body))
    return header + msg.body


def _read_exact(stream, n: int, allow_clean_eof: bool) -> bytes | None:
    """Read exactly n bytes. None on clean EOF before the first byte."""
    chunks = bytearray()
    while len(chunks) < n:
        piece = stream.read(n - len(chunks))
        if not piece:
            if not chunks and allow_clean_eof:
                return None
            raise FrameTruncatedError(f"stream ended after {len(chunks)} of {n} bytes")
        chunks += piece
    return bytes(chunks)


def unframe(stream, body_cap: int = DEFAULT_BODY_CAP) -> WireMessage | None:
    """Read one message from a file-like stream.

    Returns None when the stream is cleanly exhausted at a message boundary.
    """
    header = _read_exact(stream, HEADER_LEN, allow_clean_eof=True)
    if header is None:
        return None
    magic, version, kind_byte, request_id, body_len = _HEADER.unpack(header)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported version {version}")
    try:
        kind = MessageKind(kind_byte)
    except ValueError:
        raise WireError(f"unknown message kind {kind_byte}") from None
    if body_len > body_cap:
        raise BodyTooLargeError(f"declared body of {body_len} bytes exceeds cap {body_cap}")
    body = b""
    if body_len:
        got = _read_exact(stream, body_len, allow_clean_eof=False)
        assert got is not None
        body = got
    return WireMessage(kind, request_id, body)
