"""Dynamic value model and shape checking.

Values are plain Python data interpreted against a contract type:

    bool          -> bool
    i32 / i64     -> int (range-checked; bool excluded)
    f64           -> float or int
    string        -> str
    bytes         -> bytes
    optional<T>   -> None (absent) or a T value
    list<T>       -> list of T values
    record R      -> dict with exactly R's declared field names
    enum E        -> the case name as str

There is no tagged wrapper class; ambiguity cannot arise because a value
is only ever read against a declared type (the contract validation step
rejects optional<optional<T>>, the one shape the convention cannot carry).
"""

from __future__ import annotations

from fnucis.middleware.idl import IdlDocument, IdlType

I32_MIN, I32_MAX = -(2**31), 2**31 - 1
I64_MIN, I64_MAX = -(2**63), 2**63 - 1


def conforms_to(value, t: IdlType, doc: IdlDocument) -> bool:
    """True iff value's shape matches t recursively. Total: never raises on odd input."""
    kind = t.kind
    if kind == "bool":
        return isinstance(value, bool)
    if kind == "i32":
        return isinstance(value, int) and not isinstance(value, bool) and I32_MIN <= value <= I32_MAX
    if kind == "i64":
        return isinstance(value, int) and not isinstance(value, bool) and I64_MIN <= value <= I64_MAX
    if kind == "f64":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind == "string":
        return isinstance(value, str)
    if kind == "bytes":
        return isinstance(value, (bytes, bytearray))
    if kind == "optional":
        assert t.inner is not None
        return value is None or conforms_to(value, t.inner, doc)
    if kind == "list":
        assert t.inner is not None
        return isinstance(value, list) and all(conforms_to(v, t.inner, doc) for v in value)
    if kind == "record":
        assert t.name is not None
        if not doc.has_record(t.name) or not isinstance(value, dict):
            return False
        rec = doc.record(t.name)
        if set(value.keys()) != {f.name for f in rec.fields}:
            return False
        return all(conforms_to(value[f.name], f.type, doc) for f in rec.fields)
    if kind == "enum":
        assert t.name is not None
        return doc.has_enum(t.name) and isinstance(value, str) and value in doc.enum(t.name).cases
    return False
