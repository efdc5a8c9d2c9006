"""Deterministic binary marshalling for contract values.

Layout rules (all integers little-endian):

    bool         1 byte, 0 or 1
    i32 / i64    fixed-width signed
    f64          8-byte IEEE-754 binary64
    string       u32 byte length + UTF-8 bytes
    bytes        u32 length + raw bytes
    list<T>      u32 element count + elements back to back
    optional<T>  1 presence byte (0 absent, 1 present) + payload if present
    record       fields in declaration order, no padding, no tags
    enum         u32 case index in declaration order

Encoding the same conformant value twice yields byte-identical output;
decoding consumes exactly the encoded length and returns the new offset.
"""

from __future__ import annotations

import struct

from fnucis.middleware.idl import IdlDocument, IdlType
from fnucis.middleware.values import conforms_to

# Sanity bound for declared list counts whose element type can encode to
# zero bytes (a record with no fields); prevents unbounded decode loops.
MAX_LIST_COUNT = 1 << 24

_U32 = struct.Struct("<I")
_I32 = struct.Struct("<i")
_I64 = struct.Struct("<q")
_F64 = struct.Struct("<d")


class CodecError(Exception):
    pass


class NonConformantError(CodecError):
    """Value shape does not match the type it was encoded against."""


class TruncatedError(CodecError):
    """Input ended before the value was complete."""


class MalformedTagError(CodecError):
    """Presence tag not 0/1, or enum index out of range."""


class LengthOverflowError(CodecError):
    """A declared length or count exceeds the remaining input."""


def encode_value(value, t: IdlType, doc: IdlDocument) -> bytes:
    """Encode a conformant value against type t. Raises NonConformantError otherwise."""
    if not conforms_to(value, t, doc):
        raise NonConformantError(f"value does not conform to {t.render()}: {value!r}")
    out = bytearray()
    _encode(value, t, doc, out)
    return bytes(out)


def _encode(value, t: IdlType, doc: IdlDocument, out: bytearray) -> None:
    kind = t.kind
    if kind == "bool":
        out.append(1 if value else 0)
    elif kind == "i32":
        out += _I32.pack(value)
    elif kind == "i64":
        out += _I64.pack(value)
    elif kind == "f64":
        out += _F64.pack(float(value))
    elif kind == "string":
        raw = value.encode("utf-8")
        out += _U32.pack(len(raw))
        out += raw
    elif kind == "bytes":
        out += _U32.pack(len(value))
        out += bytes(value)
    elif kind == "optional":
        if value is None:
            out.append(0)
        else:
            out.append(1)
            _encode(value, t.inner, doc, out)
    elif kind == "list":
        out += _U32.pack(len(value))
        for item in value:
            _encode(item, t.inner, doc, out)
    elif kind == "record":
        for f in doc.record(t.name).fields:
            _encode(value[f.name], f.type, doc, out)
    elif kind == "enum":
        out += _U32.pack(doc.enum(t.name).cases.index(value))
    else:  # unreachable after conformance check
        raise NonConformantError(f"cannot encode kind {kind!r}")


def decode_value(data: bytes, t: IdlType, doc: IdlDocument, offset: int = 0) -> tuple[object, int]:
    """Decode one value of type t starting at offset.

    Returns (value, next_offset); trailing bytes beyond next_offset are the
    caller's to interpret.
    """
    return _decode(data, offset, t, doc)


def _need(data: bytes, offset: int, n: int) -> None:
    if offset + n > len(data):
        raise TruncatedError(f"need {n} bytes at offset {offset}, have {len(data) - offset}")


def _read_len(data: bytes, offset: int) -> tuple[int, int]:
    _need(data, offset, 4)
    return _U32.unpack_from(data, offset)[0], offset + 4


def _min_encoded_size(t: IdlType, doc: IdlDocument) -> int:
    kind = t.kind
    if kind in ("bool", "optional"):
        return 1
    if kind in ("i32", "string", "bytes", "list", "enum"):
        return 4
    if kind in ("i64", "f64"):
        return 8
    if kind == "record":
        return sum(_min_encoded_size(f.type, doc) for f in doc.record(t.name).fields)
    return 1


def _decode(data: bytes, offset: int, t: IdlType, doc: IdlDocument) -> tuple[object, int]:
    kind = t.kind
    if kind == "bool":
        _need(data, offset, 1)
        b = data[offset]
        if b not in (0, 1):
            raise MalformedTagError(f"bool byte {b} at offset {offset}")
        return b == 1, offset + 1
    if kind == "i32":
        _need(data, offset, 4)
        return _I32.unpack_from(data, offset)[0], offset + 4
    if kind == "i64":
        _need(data, offset, 8)
        return _I64.unpack_from(data, offset)[0], offset + 8
    if kind == "f64":
        _need(data, offset, 8)
        return _F64.unpack_from(data, offset)[0], offset + 8
    if kind == "string":
        n, offset = _read_len(data, offset)
        if offset + n > len(data):
            raise LengthOverflowError(f"string length {n} exceeds remaining {len(data) - offset}")
        raw = data[offset : offset + n]
        return raw.decode("utf-8"), offset + n
    if kind == "bytes":
        n, offset = _read_len(data, offset)
        if offset + n > len(data):
            raise LengthOverflowError(f"bytes length {n} exceeds remaining {len(data) - offset}")
        return bytes(data[offset : offset + n]), offset + n
    if kind == "optional":
        _need(data, offset, 1)
        tag = data[offset]
        if tag == 0:
            return None, offset + 1
        if tag == 1:
            return _decode(data, offset + 1, t.inner, doc)
        raise MalformedTagError(f"optional tag {tag} at offset {offset}")
    if kind == "list":
        count, offset = _read_len(data, offset)
        min_size = _min_encoded_size(t.inner, doc)
        remaining = len(data) - offset
        if min_size > 0 and count * min_size > remaining:
            raise LengthOverflowError(f"list count {count} needs >= {count * min_size} bytes, have {remaining}")
        if min_size == 0 and count > MAX_LIST_COUNT:
            raise LengthOverflowError(f"list count {count} exceeds cap {MAX_LIST_COUNT}")
        items = []
        for _ in range(count):
            item, offset = _decode(data, offset, t.inner, doc)
            items.append(item)
        return items, offset
    if kind == "record":
        rec = doc.record(t.name)
        value = {}
        for f in rec.fields:
            value[f.name], offset = _decode(data, offset, f.type, doc)
        return value, offset
    if kind == "enum":
        idx, offset = _read_len(data, offset)
        cases = doc.enum(t.name).cases
        if idx >= len(cases):
            raise MalformedTagError(f"enum index {idx} out of range for {t.name} ({len(cases)} cases)")
        return cases[idx], offset
    raise CodecError(f"cannot decode kind {kind!r}")
