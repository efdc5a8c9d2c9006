"""Shared contract artifacts: the service IDL and the error-code registry."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from fnucis.middleware.idl import IdlDocument, parse_idl

SERVICE_NAMES = ("auth", "admissions", "enrollment", "records", "finance", "reporting", "directory")

SERVICE_INTERFACES = {
    "auth": "Auth",
    "admissions": "Admissions",
    "enrollment": "Enrollment",
    "records": "Records",
    "finance": "Finance",
    "reporting": "Reporting",
    "directory": "Directory",
}


def _read(name: str) -> str:
    return resources.files("fnucis.contracts").joinpath(name).read_text("utf-8")


@lru_cache(maxsize=1)
def campus_doc() -> IdlDocument:
    return parse_idl(_read("campus.idl"))


def campus_idl_source() -> str:
    return _read("campus.idl")


@lru_cache(maxsize=1)
def error_registry() -> dict[str, tuple[int, str]]:
    """code -> (http status, human message)."""
    registry: dict[str, tuple[int, str]] = {}
    for line in _read("error_codes.tsv").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        code, status, message = line.split("\t")
        registry[code] = (int(status), message)
    return registry


def http_status_for(code: str) -> int:
    status, _ = error_registry().get(code, (500, ""))
    return status
