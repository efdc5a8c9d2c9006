"""Deployment plans: one INI-style file, one section per tier.

    [plan]
    mode = nondistributed        ; or distributed

    [registry]
    host = 127.0.0.1
    port = 7010

    [app]
    host = 127.0.0.1
    port = 7020
    db_dir = ./data/store
    term = 2024-1
    ; plus any application config key (fee_per_credit, token_ttl_hours, ...)

    [gateway]
    host = 127.0.0.1
    port = 8080
    assets = ./frontend/dist
    hr_url = https://hr.example.org/

Nondistributed runs registry, app server and gateway in one process (the
store stays its own directory); distributed launches one process per tier.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass
from pathlib import Path

from fnucis.appserver.config import AppConfig
from fnucis.gateway.server import GatewayConfig

MODES = ("nondistributed", "distributed")
TIERS = ("registry", "app", "gateway")


class PlanError(Exception):
    pass


@dataclass
class DeploymentPlan:
    mode: str
    registry_host: str
    registry_port: int
    app: AppConfig
    gateway: GatewayConfig
    path: str

    @property
    def gateway_url(self) -> str:
        return f"http://{self.gateway.listen_host}:{self.gateway.listen_port}"

    def ports(self) -> list[tuple[str, str, int]]:
        return [
            ("registry", self.registry_host, self.registry_port),
            ("app", self.app.listen_host, self.app.listen_port),
            ("gateway", self.gateway.listen_host, self.gateway.listen_port),
        ]


def load_plan(path: str | Path) -> DeploymentPlan:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path)
    if not read:
        raise PlanError(f"plan file not found: {path}")
    for section in ("plan",) + TIERS:
        if section not in parser:
            raise PlanError(f"plan is missing the [{section}] section")
    mode = parser["plan"].get("mode", "").strip()
    if mode not in MODES:
        raise PlanError(f"mode must be one of {MODES}, got {mode!r}")

    registry = parser["registry"]
    registry_host = registry.get("host", "127.0.0.1")
    registry_port = registry.getint("port")

    app_section = dict(parser["app"])
    app_section.setdefault("listen_host", app_section.pop("host", "127.0.0.1"))
    app_section.setdefault("listen_port", app_section.pop("port", "7020"))
    app_section["registry_host"] = registry_host
    app_section["registry_port"] = str(registry_port)
    base = Path(path).resolve().parent
    if "db_dir" in app_section:
        app_section["db_dir"] = str((base / app_section["db_dir"]).resolve())
    elif os.environ.get("FNUCIS_DB_DIR"):
        app_section["db_dir"] = os.environ["FNUCIS_DB_DIR"]
    try:
        app_config = AppConfig.from_mapping(app_section)
    except ValueError as exc:
        raise PlanError(f"[app]: {exc}") from exc

    gw = parser["gateway"]
    assets = gw.get("assets", "")
    gateway_config = GatewayConfig(
        listen_host=gw.get("host", "127.0.0.1"),
        listen_port=gw.getint("port"),
        registry_host=registry_host,
        registry_port=registry_port,
        asset_dir=str((base / assets).resolve()) if assets else None,
        hr_url=gw.get("hr_url", "https://hr.example.org/"),
    )
    for tier, _, port in (("registry", registry_host, registry_port),):
        if port <= 0:
            raise PlanError(f"{tier} port must be a real port, got {port}")
    plan = DeploymentPlan(mode, registry_host, registry_port, app_config, gateway_config, str(path))
    for tier, _, port in plan.ports():
        if port <= 0:
            raise PlanError(f"{tier} port must be a real port, got {port}")
    return plan


def render_plan(mode: str, registry_port: int, app_port: int, gateway_port: int, db_dir: str,
                *, term: str = "2024-1", assets: str = "", hr_url: str = "https://hr.example.org/",
                extra_app: dict | None = None) -> str:
    """Compose plan text (used by tests and the quickstart docs)."""
    app_lines = [f"host = 127.0.0.1", f"port = {app_port}", f"db_dir = {db_dir}", f"term = {term}"]
    for key, value in (extra_app or {}).items():
        app_lines.append(f"{key} = {value}")
    lines = [
        "[plan]", f"mode = {mode}", "",
        "[registry]", "host = 127.0.0.1", f"port = {registry_port}", "",
        "[app]", *app_lines, "",
        "[gateway]", "host = 127.0.0.1", f"port = {gateway_port}",
    ]
    if assets:
        lines.append(f"assets = {assets}")
    lines.append(f"hr_url = {hr_url}")
    return "\n".join(lines) + "\n"
