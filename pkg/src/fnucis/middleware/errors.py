"""Error types shared across the middleware client/server/wire layers."""

from __future__ import annotations


class RpcError(Exception):
    """Base class for middleware failures."""


class WireError(RpcError):
    """A frame could not be read or written."""


class BadMagicError(WireError):
    pass


class UnsupportedVersionError(WireError):
    pass


class BodyTooLargeError(WireError):
    pass


class FrameTruncatedError(WireError):
    """Stream ended in the middle of a frame."""


class ConnectFailedError(RpcError):
    """Could not reach the peer, or the connection dropped mid-call."""


class RpcTimeoutError(RpcError):
    """No reply arrived within the allowed time."""


class ProtocolError(RpcError):
    """Peer sent something that violates the request/reply protocol."""


class RemoteCallError(RpcError):
    """The remote side answered with an error reply.

    Servant implementations raise this to signal application-level errors;
    the server maps it to an ErrorReply and the client re-raises it.
    """

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.message = message


class NotBoundError(RpcError):
    """Name lookup in the registry found nothing."""

    def __init__(self, name: str):
        super().__init__(f"name not bound: {name!r}")
        self.name = name
