"""State handle contract the operations run against.

The app server supplies a handle backed by a store transaction; tests use
the in-memory implementation. Entities are owned by the handle: MemoryState
deep-copies on the way in and out so callers never share mutable objects
with the "stored" ones, matching what a real serialization boundary does.
"""

from __future__ import annotations

import copy
from typing import Any, Iterable, Protocol


class EntityState(Protocol):
    def get(self, kind: str, key: str) -> Any | None: ...

    def put(self, kind: str, key: str, entity: Any) -> None: ...

    def delete(self, kind: str, key: str) -> None: ...

    def items(self, kind: str, prefix: str = "") -> Iterable[tuple[str, Any]]: ...


class MemoryState:
    def __init__(self):
        self._data: dict[tuple[str, str], Any] = {}

    def get(self, kind: str, key: str):
        entity = self._data.get((kind, key))
        return copy.deepcopy(entity) if entity is not None else None

    def put(self, kind: str, key: str, entity) -> None:
        self._data[(kind, key)] = copy.deepcopy(entity)

    def delete(self, kind: str, key: str) -> None:
        self._data.pop((kind, key), None)

    def items(self, kind: str, prefix: str = ""):
        selected = [
            (key, copy.deepcopy(entity))
            for (k_kind, key), entity in self._data.items()
            if k_kind == kind and key.startswith(prefix)
        ]
        return sorted(selected, key=lambda pair: pair[0])
