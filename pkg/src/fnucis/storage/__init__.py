"""Embedded transactional record store (log + snapshot, single writer)."""

from fnucis.storage.engine import (
    ActiveTransactionError,
    ClosedError,
    Connection,
    CorruptError,
    IoFailureError,
    LockedError,
    NotActiveError,
    StorageError,
    Transaction,
    open_store,
)
