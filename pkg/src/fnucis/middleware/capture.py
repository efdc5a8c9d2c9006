"""Pretty-printer for captured wire frames (debugging aid).

Request bodies start with two strings (object name, method name); error
replies are two strings (code, message). Anything else is shown as a hex
preview, since decoding arguments needs the request's signature context.
"""

from __future__ import annotations

import io

from fnucis.middleware import codec
from fnucis.middleware.errors import WireError
from fnucis.middleware.idl import STRING, IdlDocument
from fnucis.middleware.wire import MessageKind, unframe

_EMPTY_DOC = IdlDocument()


def _hex_preview(data: bytes, limit: int = 24) -> str:
    head = data[:limit].hex(" ")
    suffix = f" ... ({len(data)} bytes)" if len(data) > limit else f" ({len(data)} bytes)"
    return head + suffix if data else "(empty)"


def describe_frame(msg) -> str:
    kind = MessageKind(msg.kind).name
    detail = ""
    try:
        if msg.kind == MessageKind.REQUEST:
            obj, off = codec.decode_value(msg.body, STRING, _EMPTY_DOC)
            method, off = codec.decode_value(msg.body, STRING, _EMPTY_DOC, off)
            detail = f" object={obj!r} method={method!r} args={_hex_preview(msg.body[off:])}"
        elif msg.kind == MessageKind.ERROR_REPLY:
            code, off = codec.decode_value(msg.body, STRING, _EMPTY_DOC)
            message, _ = codec.decode_value(msg.body, STRING, _EMPTY_DOC, off)
            detail = f" code={code!r} message={message!r}"
        elif msg.kind == MessageKind.RESOLVE:
            name, _ = codec.decode_value(msg.body, STRING, _EMPTY_DOC)
            detail = f" name={name!r}"
        elif msg.body:
            detail = f" body={_hex_preview(msg.body)}"
    except codec.CodecError:
        detail = f" body={_hex_preview(msg.body)}"
    return f"{kind} id={msg.request_id}{detail}"


def describe_capture(data: bytes) -> list[str]:
    """One line per frame; stops with a note when the capture is damaged."""
    stream = io.BytesIO(data)
    lines = []
    index = 0
    while True:
        try:
            msg = unframe(stream)
        except WireError as exc:
            lines.append(f"#{index} <damaged: {exc}>")
            break
        if msg is None:
            break
        lines.append(f"#{index} {describe_frame(msg)}")
        index += 1
    return lines
