"""Log-structured record store with snapshot compaction.

On-disk layout under the store root:

    LOCK         pid of the live writer process
    log.v1       version byte, then framed commit records
    snapshot.v1  version byte, then framed key/value entries (optional)

Every frame is u32 payload length + u32 CRC-32 of the payload + payload.
A commit payload is: txn id (u64), op count (u32), then per op a tag byte
(1 put, 2 delete), kind (u16 length + UTF-8), key (u32 length + raw) and,
for puts, the value (u32 length + raw). A snapshot entry payload holds one
kind/key/value triple in the same encoding.

Recovery loads the snapshot strictly (any damage raises CorruptError: the
snapshot is written atomically, so damage means real trouble), then
replays the log leniently: the first torn or checksum-failing frame ends
replay, the file is truncated back to the last good frame, and the
truncation offset is reported on the connection. Commits append one frame
and fsync before acknowledging, so a commit either survives whole or is
invisible after recovery.

Concurrency: one writer process per root (lock file, stale locks from
dead pids are stolen); within the process, one active write transaction
at a time and any number of readers of the committed state.
"""

from __future__ import annotations

import os
import struct
import threading
import zlib
from pathlib import Path

VERSION_BYTE = b"\x01"
LOG_NAME = "log.v1"
SNAPSHOT_NAME = "snapshot.v1"
LOCK_NAME = "LOCK"

_FRAME = struct.Struct("<II")
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")

_OP_PUT = 1
_OP_DELETE = 2

_TOMBSTONE = object()


class StorageError(Exception):
    pass


class LockedError(StorageError):
    """Another live connection holds the store."""


class CorruptError(StorageError):
    """A store file is unusable (bad version byte or damaged snapshot)."""


class NotActiveError(StorageError):
    """Transaction already committed or rolled back."""


class ActiveTransactionError(StorageError):
    """Operation requires no transaction in flight."""


class ClosedError(StorageError):
    """Connection has been closed."""


class IoFailureError(StorageError):
    """The operating system refused a write; the commit did not happen."""


def _as_key(key) -> bytes:
    return key.encode("utf-8") if isinstance(key, str) else bytes(key)


def _encode_entry(kind: str, key: bytes, value: bytes | None) -> bytes:
    kind_raw = kind.encode("utf-8")
    out = bytearray()
    out += _U16.pack(len(kind_raw))
    out += kind_raw
    out += _U32.pack(len(key))
    out += key
    if value is not None:
        out += _U32.pack(len(value))
        out += value
    return bytes(out)


def _frame(payload: bytes) -> bytes:
    return _FRAME.pack(len(payload), zlib.crc32(payload)) + payload


class _FrameReader:
    """Sequential frame reader tracking the end offset of the last good frame."""

    def __init__(self, data: bytes, start: int):
        self.data = data
        self.offset = start
        self.good_end = start

    def next_payload(self) -> bytes | None:
        data, off = self.data, self.offset
        if off == len(data):
            return None
        if off + _FRAME.size > len(data):
            return None  # torn header
        length, crc = _FRAME.unpack_from(data, off)
        body_start = off + _FRAME.size
        if body_start + length > len(data):
            return None  # torn body
        payload = data[body_start : body_start + length]
        if zlib.crc32(payload) != crc:
            return None  # checksum failure: treat as tail damage
        self.offset = body_start + length
        self.good_end = self.offset
        return payload


class Transaction:
    """Buffered writes, invisible to other readers until commit."""

    def __init__(self, conn: "Connection", txn_id: int):
        self._conn = conn
        self.txn_id = txn_id
        self.state = "active"
        self._writes: dict[tuple[str, bytes], object] = {}

    def _require_active(self) -> None:
        if self.state != "active":
            raise NotActiveError(f"transaction {self.txn_id} is {self.state}")

    def put(self, kind: str, key, value: bytes) -> None:
        self._require_active()
        self._writes[(kind, _as_key(key))] = bytes(value)

    def delete(self, kind: str, key) -> None:
        self._require_active()
        self._writes[(kind, _as_key(key))] = _TOMBSTONE

    def get(self, kind: str, key) -> bytes | None:
        self._require_active()
        k = (kind, _as_key(key))
        if k in self._writes:
            buffered = self._writes[k]
            return None if buffered is _TOMBSTONE else buffered  # type: ignore[return-value]
        return self._conn._committed_get(kind, _as_key(key))

    def scan(self, kind: str, prefix=b"") -> list[tuple[bytes, bytes]]:
        self._require_active()
        prefix = _as_key(prefix)
        merged = dict(self._conn._committed_items(kind, prefix))
        for (k_kind, k_key), buffered in self._writes.items():
            if k_kind != kind or not k_key.startswith(prefix):
                continue
            if buffered is _TOMBSTONE:
                merged.pop(k_key, None)
            else:
                merged[k_key] = buffered  # type: ignore[assignment]
        return sorted(merged.items())

    def commit(self) -> None:
        self._require_active()
        try:
            self._conn._commit(self)
        except Exception:
            self.state = "aborted"
            raise
        self.state = "committed"

    def rollback(self) -> None:
        self._require_active()
        self._conn._finish_txn(self)
        self.state = "aborted"

    def __enter__(self) -> "Transaction":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if self.state == "active":
            if exc_type is None:
                self.commit()
            else:
                self.rollback()


class Connection:
    """Open store handle: committed reads, transactions, snapshot compaction."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.recovered_truncation: int | None = None
        self._state_lock = threading.RLock()
        self._txn_gate = threading.Lock()
        self._active_txn: Transaction | None = None
        self._closed = False
        self._next_txn_id = 1
        self._data: dict[tuple[str, bytes], bytes] = {}
        self._acquire_lock_file()
        try:
            self._recover()
            self._log_fh = open(self.log_path, "ab")
        except BaseException:
            self._release_lock_file()
            raise

    # -- paths ---------------------------------------------------------------

    @property
    def log_path(self) -> Path:
        return self.root / LOG_NAME

    @property
    def snapshot_path(self) -> Path:
        return self.root / SNAPSHOT_NAME

    @property
    def lock_path(self) -> Path:
        return self.root / LOCK_NAME

    # -- lock file -------------------------------------------------------------

    def _acquire_lock_file(self) -> None:
        while True:
            try:
                fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            except FileExistsError:
                pid = self._lock_holder()
                if pid is not None and _pid_alive(pid):
                    raise LockedError(f"store {self.root} locked by live pid {pid}") from None
                try:
                    self.lock_path.unlink()  # stale lock from a dead process
                except FileNotFoundError:
                    pass
                continue
            os.write(fd, str(os.getpid()).encode("ascii"))
            os.close(fd)
            return

    def _lock_holder(self) -> int | None:
        try:
            return int(self.lock_path.read_text().strip())
        except (OSError, ValueError):
            return None

    def _release_lock_file(self) -> None:
        try:
            if self._lock_holder() == os.getpid():
                self.lock_path.unlink()
        except OSError:
            pass

    # -- recovery --------------------------------------------------------------

    def _recover(self) -> None:
        if self.snapshot_path.exists():
            raw = self.snapshot_path.read_bytes()
            if not raw.startswith(VERSION_BYTE):
                raise CorruptError(f"snapshot {self.snapshot_path} has bad version byte")
            reader = _FrameReader(raw, len(VERSION_BYTE))
            while True:
                payload = reader.next_payload()
                if payload is None:
                    break
                kind, key, value, _ = _decode_entry(payload, 0, with_value=True)
                self._data[(kind, key)] = value
            if reader.good_end != len(raw):
                raise CorruptError(f"snapshot {self.snapshot_path} damaged at offset {reader.good_end}")

        if not self.log_path.exists():
            self.log_path.write_bytes(VERSION_BYTE)
            return
        raw = self.log_path.read_bytes()
        if not raw:
            self.log_path.write_bytes(VERSION_BYTE)
            return
        if not raw.startswith(VERSION_BYTE):
            raise CorruptError(f"log {self.log_path} has bad version byte")
        reader = _FrameReader(raw, len(VERSION_BYTE))
        while True:
            payload = reader.next_payload()
            if payload is None:
                break
            self._apply_commit_payload(payload)
        if reader.good_end != len(raw):
            self.recovered_truncation = reader.good_end
            with open(self.log_path, "r+b") as fh:
                fh.truncate(reader.good_end)

    def _apply_commit_payload(self, payload: bytes) -> None:
        off = _U64.size
        (count,) = _U32.unpack_from(payload, off)
        off += _U32.size
        for _ in range(count):
            tag = payload[off]
            off += 1
            kind, key, value, off = _decode_entry(payload, off, with_value=tag == _OP_PUT)
            if tag == _OP_PUT:
                self._data[(kind, key)] = value
            else:
                self._data.pop((kind, key), None)

    # -- committed reads ---------------------------------------------------------

    def _require_open(self) -> None:
        if self._closed:
            raise ClosedError(f"connection to {self.root} is closed")

    def _committed_get(self, kind: str, key: bytes) -> bytes | None:
        with self._state_lock:
            self._require_open()
            return self._data.get((kind, key))

    def _committed_items(self, kind: str, prefix: bytes) -> list[tuple[bytes, bytes]]:
        with self._state_lock:
            self._require_open()
            return sorted(
                (key, value)
                for (k_kind, key), value in self._data.items()
                if k_kind == kind and key.startswith(prefix)
            )

    def get(self, kind: str, key) -> bytes | None:
        return self._committed_get(kind, _as_key(key))

    def scan(self, kind: str, prefix=b"") -> list[tuple[bytes, bytes]]:
        return self._committed_items(kind, _as_key(prefix))

    # -- transactions --------------------------------------------------------------

    def begin(self) -> Transaction:
        self._require_open()
        self._txn_gate.acquire()
        with self._state_lock:
            if self._closed:
                self._txn_gate.release()
                raise ClosedError(f"connection to {self.root} is closed")
            txn = Transaction(self, self._next_txn_id)
            self._next_txn_id += 1
            self._active_txn = txn
            return txn

    def _finish_txn(self, txn: Transaction) -> None:
        with self._state_lock:
            if self._active_txn is txn:
                self._active_txn = None
        self._txn_gate.release()

    def _commit(self, txn: Transaction) -> None:
        payload = bytearray()
        payload += _U64.pack(txn.txn_id)
        payload += _U32.pack(len(txn._writes))
        for (kind, key), buffered in txn._writes.items():
            if buffered is _TOMBSTONE:
                payload.append(_OP_DELETE)
                payload += _encode_entry(kind, key, None)
            else:
                payload.append(_OP_PUT)
                payload += _encode_entry(kind, key, buffered)  # type: ignore[arg-type]
        frame = _frame(bytes(payload))
        with self._state_lock:
            self._require_open()
            start = self._log_fh.tell()
            try:
                self._log_fh.write(frame)
                self._log_fh.flush()
                os.fsync(self._log_fh.fileno())
            except OSError as exc:
                try:
                    self._log_fh.truncate(start)
                    self._log_fh.seek(start)
                except OSError:
                    self._closed = True
                self._finish_txn(txn)
                raise IoFailureError(f"commit append failed: {exc}") from exc
            for (kind, key), buffered in txn._writes.items():
                if buffered is _TOMBSTONE:
                    self._data.pop((kind, key), None)
                else:
                    self._data[(kind, key)] = buffered  # type: ignore[assignment]
        self._finish_txn(txn)

    # -- snapshot --------------------------------------------------------------------

    def snapshot(self) -> None:
        """Compact the log into a snapshot file; observable state unchanged."""
        with self._state_lock:
            self._require_open()
            if self._active_txn is not None:
                raise ActiveTransactionError("snapshot requires no transaction in flight")
            items = sorted(self._data.items())
            tmp_snap = self.snapshot_path.with_suffix(".tmp")
            try:
                with open(tmp_snap, "wb") as fh:
                    fh.write(VERSION_BYTE)
                    for (kind, key), value in items:
                        fh.write(_frame(_encode_entry(kind, key, value)))
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp_snap, self.snapshot_path)
                # reset the log only after the snapshot is durable; a crash in
                # between replays old ops onto the snapshot, which is idempotent
                self._log_fh.close()
                tmp_log = self.log_path.with_suffix(".tmp")
                with open(tmp_log, "wb") as fh:
                    fh.write(VERSION_BYTE)
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp_log, self.log_path)
                self._log_fh = open(self.log_path, "ab")
            except OSError as exc:
                raise IoFailureError(f"snapshot failed: {exc}") from exc

    def close(self) -> None:
        with self._state_lock:
            if self._closed:
                return
            self._closed = True
            try:
                self._log_fh.close()
            except OSError:
                pass
        self._release_lock_file()

    def __enter__(self) -> "Connection":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _decode_entry(payload: bytes, off: int, *, with_value: bool):
    (kind_len,) = _U16.unpack_from(payload, off)
    off += _U16.size
    kind = payload[off : off + kind_len].decode("utf-8")
    off += kind_len
    (key_len,) = _U32.unpack_from(payload, off)
    off += _U32.size
    key = payload[off : off + key_len]
    off += key_len
    value = None
    if with_value:
        (val_len,) = _U32.unpack_from(payload, off)
        off += _U32.size
        value = payload[off : off + val_len]
        off += val_len
    return kind, key, value, off


def _pid_alive(pid: int) -> bool:
    try:
        os.kill(pid, 0)
    except ProcessLookupError:
        return False
    except PermissionError:
        return True
    return True


def open_store(path: str | os.PathLike) -> Connection:
    """Open (creating if needed) the store at path and recover its state."""
    return Connection(path)
