"""Tier startup, health checking and supervision.

Startup order is registry -> app -> gateway with a health probe after each
tier: the registry answers a wire-level ping, the app server must be
resolvable and pingable, the gateway must report itself and the app as
healthy over HTTP. Teardown runs in reverse and is also triggered when any
tier dies or a probe times out.
"""

from __future__ import annotations

import logging
import signal
import socket
import subprocess
import sys
import threading
import time

from fnucis.appserver.server import AppServer
from fnucis.gateway.server import GatewayServer
from fnucis.middleware.client import Connection
from fnucis.middleware.errors import RpcError
from fnucis.middleware.naming import resolve, start_registry
from fnucis.middleware.wire import MessageKind
from fnucis.ops.httpapi import ApiError, HttpClient
from fnucis.ops.plans import TIERS, DeploymentPlan

log = logging.getLogger(__name__)


class PortInUse(Exception):
    pass


class HealthTimeout(Exception):
    pass


def check_ports_free(plan: DeploymentPlan) -> None:
    for tier, host, port in plan.ports():
        with socket.socket() as s:
            s.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            try:
                s.bind((host, port))
            except OSError as exc:
                raise PortInUse(f"{tier} port {host}:{port} is busy: {exc}") from exc


def ping_endpoint(host: str, port: int, timeout: float = 2.0) -> bool:
    try:
        conn = Connection(host, port, connect_timeout=timeout)
    except RpcError:
        return False
    try:
        reply = conn.call(MessageKind.PING, b"", timeout)
        return reply.kind == MessageKind.PONG
    except RpcError:
        return False
    finally:
        conn.close()


def _wait_for(probe, what: str, timeout: float) -> None:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if probe():
            return
        time.sleep(0.1)
    raise HealthTimeout(f"{what} did not become healthy within {timeout}s")


def registry_healthy(plan: DeploymentPlan) -> bool:
    return ping_endpoint(plan.registry_host, plan.registry_port)


def app_healthy(plan: DeploymentPlan) -> bool:
    try:
        ref = resolve((plan.registry_host, plan.registry_port), "auth", timeout=2.0)
    except RpcError:
        return False
    return ping_endpoint(ref.host, ref.port)


def gateway_healthy(plan: DeploymentPlan) -> bool:
    client = HttpClient(plan.gateway_url, timeout=2.0)
    try:
        health = client.get("/api/health")
    except (ApiError, OSError):
        return False
    return health.get("status") == "ok" and health.get("app") == "ok"


HEALTH_PROBES = {"registry": registry_healthy, "app": app_healthy, "gateway": gateway_healthy}


class _InProcessTier:
    def __init__(self, name: str, handle):
        self.name = name
        self.handle = handle

    def alive(self) -> bool:
        return True

    def stop(self) -> None:
        self.handle.stop()


class _SubprocessTier:
    def __init__(self, name: str, plan_path: str):
        self.name = name
        self.proc = subprocess.Popen(
            [sys.executable, "-m", "fnucis.ops.cli", "tier", name, plan_path],
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
        )

    def alive(self) -> bool:
        return self.proc.poll() is None

    def stop(self) -> None:
        if self.proc.poll() is None:
            self.proc.terminate()
            try:
                self.proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait(timeout=5)


def start_tier_inprocess(name: str, plan: DeploymentPlan):
    if name == "registry":
        return start_registry(plan.registry_host, plan.registry_port)
    if name == "app":
        return AppServer(plan.app).start()
    if name == "gateway":
        return GatewayServer(plan.gateway).start()
    raise ValueError(f"unknown tier {name!r}")


class Deployment:
    """Started tiers for one plan; stop() tears down in reverse order."""

    def __init__(self, plan: DeploymentPlan, health_timeout: float = 20.0):
        self.plan = plan
        self.health_timeout = health_timeout
        self.tiers: list = []

    def start(self) -> "Deployment":
        check_ports_free(self.plan)
        try:
            for name in TIERS:
                if self.plan.mode == "nondistributed":
                    tier = _InProcessTier(name, start_tier_inprocess(name, self.plan))
                else:
                    tier = _SubprocessTier(name, self.plan.path)
                self.tiers.append(tier)
                _wait_for(lambda: HEALTH_PROBES[name](self.plan), f"{name} tier", self.health_timeout)
        except BaseException:
            self.stop()
            raise
        return self

    def any_dead(self) -> str | None:
        for tier in self.tiers:
            if not tier.alive():
                return tier.name
        return None

    def stop(self) -> None:
        for tier in reversed(self.tiers):
            try:
                tier.stop()
            except Exception:
                log.exception("stopping %s tier failed", tier.name)
        self.tiers.clear()

    def __enter__(self) -> "Deployment":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def supervise(deployment: Deployment) -> int:
    """Block until interrupted or a tier dies. Returns an exit code."""
    stop_event = threading.Event()

    def on_signal(signum, frame):
        stop_event.set()

    previous = {}
    for sig in (signal.SIGINT, signal.SIGTERM):
        previous[sig] = signal.signal(sig, on_signal)
    try:
        while not stop_event.is_set():
            dead = deployment.any_dead()
            if dead is not None:
                log.error("%s tier exited; tearing down", dead)
                return 2
            stop_event.wait(0.5)
        return 0
    finally:
        for sig, handler in previous.items():
            signal.signal(sig, handler)
        deployment.stop()


def run_tier_foreground(name: str, plan: DeploymentPlan) -> int:
    """Run one tier until SIGTERM/SIGINT (used by distributed mode children)."""
    handle = start_tier_inprocess(name, plan)
    stop_event = threading.Event()

    def on_signal(signum, frame):
        stop_event.set()

    signal.signal(signal.SIGTERM, on_signal)
    signal.signal(signal.SIGINT, on_signal)
    try:
        stop_event.wait()
    finally:
        handle.stop()
    return 0
