"""Load generator: fires a read/write mix at the gateway and summarizes.

Workers are plain threads with their own HTTP clients and session tokens
(one student identity each, round-robin over the fixture's students).
Write traffic toggles enrollments, so expected business conflicts
(duplicate, capacity, prerequisites) are counted separately from errors.
Latency percentiles are computed from the raw sorted samples.
"""

from __future__ import annotations

import math
import random
import threading
import time
from dataclasses import dataclass, field

from fnucis.ops.httpapi import ApiError, HttpClient
from fnucis.ops.seeding import parse_fixture

MIXES = ("read", "write", "mixed")
EXPECTED_CONFLICTS = {"duplicate-enrollment", "capacity-full", "prereq-unmet",
                      "not-enrolled", "already-completed"}


@dataclass
class OpStats:
    latencies_ms: list[float] = field(default_factory=list)
    ok: int = 0
    conflicts: int = 0
    errors: int = 0

    def record(self, latency_ms: float, outcome: str) -> None:
        self.latencies_ms.append(latency_ms)
        setattr(self, outcome, getattr(self, outcome) + 1)

    def percentile(self, q: float) -> float:
        if not self.latencies_ms:
            return 0.0
        ordered = sorted(self.latencies_ms)
        index = max(0, math.ceil(q * len(ordered)) - 1)
        return ordered[index]


@dataclass
class BenchResult:
    per_op: dict[str, OpStats]
    wall_seconds: float
    requested: int

    @property
    def total_ok(self) -> int:
        return sum(s.ok for s in self.per_op.values())

    @property
    def total_conflicts(self) -> int:
        return sum(s.conflicts for s in self.per_op.values())

    @property
    def total_errors(self) -> int:
        return sum(s.errors for s in self.per_op.values())

    @property
    def throughput_rps(self) -> float:
        return (self.total_ok + self.total_conflicts) / self.wall_seconds if self.wall_seconds else 0.0

    def summary_lines(self) -> list[str]:
        lines = ["op\tcount\tok\tconflicts\terrors\tp50_ms\tp95_ms\tp99_ms"]
        for op in sorted(self.per_op):
            stats = self.per_op[op]
            lines.append(
                f"{op}\t{len(stats.latencies_ms)}\t{stats.ok}\t{stats.conflicts}\t{stats.errors}"
                f"\t{stats.percentile(0.50):.2f}\t{stats.percentile(0.95):.2f}\t{stats.percentile(0.99):.2f}"
            )
        lines.append(f"total\t{self.requested}\t{self.total_ok}\t{self.total_conflicts}"
                     f"\t{self.total_errors}\t\t\t")
        lines.append(f"throughput_rps\t{self.throughput_rps:.2f}\t\t\t\t\t\t")
        lines.append(f"wall_seconds\t{self.wall_seconds:.3f}\t\t\t\t\t\t")
        return lines


class TargetUnhealthy(Exception):
    pass


@dataclass
class WorkloadPlan:
    students: list[tuple[str, str]]  # (id, password)
    offerings: list[tuple[str, str, str]]  # (unit, campus, term)
    term: str


def workload_from_fixture(fixture_text: str) -> WorkloadPlan:
    students: list[tuple[str, str]] = []
    offerings: list[tuple[str, str, str]] = []
    term = "2024-1"
    for _, kind, fields in parse_fixture(fixture_text):
        if kind == "student":
            students.append((fields[0], fields[4] if len(fields) > 4 else ""))
        elif kind == "offering":
            offerings.append((fields[0], fields[1], fields[2]))
            term = fields[2]
    if not students or not offerings:
        raise TargetUnhealthy("fixture has no students or no offerings to exercise")
    return WorkloadPlan(students, offerings, term)


class Worker:
    def __init__(self, base_url: str, plan: WorkloadPlan, student: tuple[str, str], mix: str,
                 rng: random.Random):
        self.client = HttpClient(base_url)
        self.plan = plan
        self.student_id, password = student
        self.client.login(self.student_id, password)
        self.mix = mix
        self.rng = rng

    def one_request(self) -> tuple[str, float, str]:
        write = self.mix == "write" or (self.mix == "mixed" and self.rng.random() < 0.2)
        op, fn = self._pick_write() if write else self._pick_read()
        started = time.perf_counter()
        try:
            fn()
            outcome = "ok"
        except ApiError as exc:
            outcome = "conflicts" if exc.code in EXPECTED_CONFLICTS else "errors"
        except OSError:
            outcome = "errors"  # transport-level failure still counts the ticket
        latency_ms = (time.perf_counter() - started) * 1000.0
        return op, latency_ms, outcome

    def _pick_read(self):
        choice = self.rng.randrange(4)
        if choice == 0:
            return "offerings.list", lambda: self.client.get("/api/offerings", query={"term": self.plan.term})
        if choice == 1:
            return "catalog.units", lambda: self.client.get("/api/catalog/units")
        if choice == 2:
            return "requirements", lambda: self.client.get(f"/api/students/{self.student_id}/requirements")
        return "invoices", lambda: self.client.get("/api/invoices")

    def _pick_write(self):
        unit, campus, term = self.rng.choice(self.plan.offerings)
        body = {"student": self.student_id, "unit": unit, "campus": campus, "term": term}
        if self.rng.random() < 0.5:
            return "enroll", lambda: self.client.post("/api/enrollments", body)
        return "withdraw", lambda: self.client.delete("/api/enrollments", body)


def run_bench(gateway_url: str, fixture_text: str, n: int, concurrency: int, mix: str,
              seed: str = "bench") -> BenchResult:
    if mix not in MIXES:
        raise ValueError(f"mix must be one of {MIXES}")
    plan = workload_from_fixture(fixture_text)
    probe = HttpClient(gateway_url)
    try:
        health = probe.get("/api/health")
    except (ApiError, OSError) as exc:
        raise TargetUnhealthy(f"gateway is unreachable: {exc}") from exc
    if health.get("app") != "ok":
        raise TargetUnhealthy("application tier is not healthy")

    stats: dict[str, OpStats] = {}
    stats_lock = threading.Lock()
    counter = iter(range(n))
    counter_lock = threading.Lock()

    def next_ticket() -> bool:
        with counter_lock:
            return next(counter, None) is not None

    def work(worker_index: int) -> None:
        rng = random.Random(f"{seed}-{worker_index}")
        student = plan.students[worker_index % len(plan.students)]
        worker: Worker | None = None
        while next_ticket():
            if worker is None:
                try:
                    worker = Worker(gateway_url, plan, student, mix, rng)
                except (ApiError, OSError):
                    with stats_lock:
                        stats.setdefault("login", OpStats()).record(0.0, "errors")
                    continue
            op, latency_ms, outcome = worker.one_request()
            with stats_lock:
                stats.setdefault(op, OpStats()).record(latency_ms, outcome)

    started = time.perf_counter()
    threads = [threading.Thread(target=work, args=(i,)) for i in range(concurrency)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    wall = time.perf_counter() - started
    return BenchResult(stats, wall, n)
