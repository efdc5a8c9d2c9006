"""IDL-driven RPC middleware: contracts, codec, wire protocol, client/server, naming."""

from fnucis.middleware.idl import (
    EnumDef,
    FieldDef,
    IdlDocument,
    IdlSyntaxError,
    IdlType,
    IdlValidationError,
    InterfaceDef,
    MethodSignature,
    Param,
    RecordDef,
    parse_idl,
    pretty_print,
)
from fnucis.middleware.values import conforms_to
from fnucis.middleware.codec import (
    NonConformantError,
    TruncatedError,
    MalformedTagError,
    LengthOverflowError,
    decode_value,
    encode_value,
)
from fnucis.middleware.wire import (
    DEFAULT_BODY_CAP,
    HEADER_LEN,
    MAGIC,
    MessageKind,
    ObjectRef,
    WireMessage,
    frame,
    unframe,
)
from fnucis.middleware.client import RpcClient, invoke
from fnucis.middleware.server import BindFailedError, RpcServer, Servant, serve
from fnucis.middleware.naming import NAMING_DOC, bind, resolve, start_registry
from fnucis.middleware.errors import (
    BadMagicError,
    BodyTooLargeError,
    ConnectFailedError,
    NotBoundError,
    ProtocolError,
    RemoteCallError,
    RpcError,
    RpcTimeoutError,
    UnsupportedVersionError,
)
