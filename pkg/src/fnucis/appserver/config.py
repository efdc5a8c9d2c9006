"""Server configuration: flat key=value text files.

Unknown keys are rejected so typos fail fast. Durations are hours, money
is whole currency units per credit point (converted to cents internally).
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from fnucis.domain.model import DomainConfig, Term


def parse_kv(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        values[key.strip()] = value.strip()
    return values


@dataclass
class AppConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 7020
    registry_host: str = "127.0.0.1"
    registry_port: int = 7010
    db_dir: str = "./data/store"
    term: str = "2024-1"
    fee_per_credit: int = 40
    token_ttl_hours: float = 8.0
    pbkdf2_iters: int = 20000
    bootstrap_user: str = "root"
    bootstrap_password: str = "root-password"
    card_decline_pattern: str = "DECLINE"
    default_capacity: int = 100

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> "AppConfig":
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise ValueError(f"unknown app config key {key!r}")
            current = getattr(cls(), key)
            if isinstance(current, bool):
                kwargs[key] = raw.lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                kwargs[key] = int(raw)
            elif isinstance(current, float):
                kwargs[key] = float(raw)
            else:
                kwargs[key] = raw
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "AppConfig":
        return cls.from_mapping(parse_kv(Path(path).read_text("utf-8")))

    def current_term(self) -> Term:
        return Term.parse(self.term)

    def domain_config(self) -> DomainConfig:
        return DomainConfig(
            current_term=self.current_term(),
            fee_cents_per_credit=self.fee_per_credit * 100,
            card_decline_pattern=self.card_decline_pattern,
            default_capacity=self.default_capacity,
        )
