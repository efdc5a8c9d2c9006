import io
from pathlib import Path

import pytest

from fnucis.middleware.capture import describe_capture
from fnucis.middleware.wire import MessageKind, WireMessage, frame
from fnucis.ops.audit import audit_store
from fnucis.ops.httpapi import HttpClient
from fnucis.ops.plans import PlanError, load_plan, render_plan
from fnucis.ops.runner import Deployment, PortInUse, check_ports_free
from fnucis.ops.seeding import FixtureSyntax, SeedError, Seeder, parse_fixture

from conftest import free_port

REPO_ROOT = Path(__file__).resolve().parents[1]
DEMO_FIXTURE = REPO_ROOT / "fixtures" / "demo.tsv"


def write_plan(tmp_path, mode="nondistributed", **kwargs) -> Path:
    plan_path = tmp_path / "plan.ini"
    extra = {"pbkdf2_iters": 400, "bootstrap_password": "root-password"}
    extra.update(kwargs.pop("extra_app", {}))
    plan_path.write_text(render_plan(
        mode, free_port(), free_port(), free_port(), str(tmp_path / "store"),
        extra_app=extra, **kwargs))
    return plan_path


class TestPlans:
    def test_load_roundtrip(self, tmp_path):
        plan = load_plan(write_plan(tmp_path))
        assert plan.mode == "nondistributed"
        assert plan.app.registry_port == plan.registry_port
        assert plan.gateway.registry_port == plan.registry_port

    def test_missing_section(self, tmp_path):
        bad = tmp_path / "bad.ini"
        bad.write_text("[plan]\nmode = nondistributed\n")
        with pytest.raises(PlanError):
            load_plan(bad)

    def test_bad_mode(self, tmp_path):
        bad = tmp_path / "bad.ini"
        bad.write_text(render_plan("nondistributed", 1, 2, 3, "x").replace(
            "nondistributed", "sideways"))
        with pytest.raises(PlanError):
            load_plan(bad)

    def test_unknown_app_key_rejected(self, tmp_path):
        plan_path = write_plan(tmp_path, extra_app={"blorp": "1"})
        with pytest.raises(PlanError):
            load_plan(plan_path)

    def test_port_collision_detected_before_start(self, tmp_path):
        import socket

        plan = load_plan(write_plan(tmp_path))
        holder = socket.socket()
        holder.bind((plan.registry_host, plan.registry_port))
        holder.listen(1)
        try:
            with pytest.raises(PortInUse):
                check_ports_free(plan)
        finally:
            holder.close()


class TestFixtureParsing:
    def test_demo_fixture_parses(self):
        rows = parse_fixture(DEMO_FIXTURE.read_text("utf-8"))
        kinds = [kind for _, kind, _ in rows]
        assert kinds.count("unit") == 8
        assert kinds.count("program") == 3
        assert kinds.count("student") == 5

    def test_unknown_kind_rejected(self):
        with pytest.raises(FixtureSyntax) as exc:
            parse_fixture("creature\tX\n")
        assert exc.value.line_no == 1

    def test_comments_and_blanks_skipped(self):
        assert parse_fixture("# note\n\n") == []


@pytest.fixture(scope="class")
def running_deployment(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("deploy")
    plan = load_plan(write_plan(tmp))
    with Deployment(plan) as deployment:
        yield plan, deployment


class TestSeeding:
    def test_seed_then_reseed_is_idempotent(self, running_deployment):
        plan, _ = running_deployment
        seeder = Seeder(HttpClient(plan.gateway_url), "root", "root-password")
        first = seeder.seed_file(DEMO_FIXTURE)
        assert first.created["unit"] == 8
        assert first.created["student"] == 5
        assert first.created["offering"] == 5
        assert not first.skipped

        again = Seeder(HttpClient(plan.gateway_url), "root", "root-password")
        second = again.seed_file(DEMO_FIXTURE)
        assert not second.created
        assert second.skipped["unit"] == 8
        assert second.skipped["offering"] == 5

    def test_fixture_error_carries_line(self, running_deployment):
        plan, _ = running_deployment
        seeder = Seeder(HttpClient(plan.gateway_url), "root", "root-password")
        bad = "unit\tZZ900\tGhostly\tNOPE-1\t15\n"
        with pytest.raises(SeedError) as exc:
            seeder.seed_text(bad)
        assert exc.value.line_no == 1
        assert exc.value.cause.code == "unknown-unit"


class TestRunTeardown:
    def test_nondistributed_releases_store_lock(self, tmp_path):
        plan = load_plan(write_plan(tmp_path))
        with Deployment(plan):
            assert (Path(plan.app.db_dir) / "LOCK").exists()
        assert not (Path(plan.app.db_dir) / "LOCK").exists()

    def test_distributed_reaps_children_and_releases_lock(self, tmp_path):
        plan = load_plan(write_plan(tmp_path, mode="distributed"))
        deployment = Deployment(plan).start()
        procs = [tier.proc for tier in deployment.tiers if hasattr(tier, "proc")]
        assert len(procs) == 3
        deployment.stop()
        for proc in procs:
            assert proc.poll() is not None  # no orphans
        assert not (Path(plan.app.db_dir) / "LOCK").exists()
        # store is reopenable immediately (lock released by the child)
        from fnucis.storage.engine import open_store

        open_store(plan.app.db_dir).close()


class TestDecode:
    def test_describe_capture(self):
        from fnucis.middleware import codec
        from fnucis.middleware.idl import STRING, IdlDocument

        doc = IdlDocument()
        request_body = codec.encode_value("enrollment", STRING, doc) + codec.encode_value("enroll", STRING, doc)
        error_body = codec.encode_value("capacity-full", STRING, doc) + codec.encode_value("full up", STRING, doc)
        capture = b"".join([
            frame(WireMessage(MessageKind.PING, 1)),
            frame(WireMessage(MessageKind.REQUEST, 2, request_body)),
            frame(WireMessage(MessageKind.ERROR_REPLY, 2, error_body)),
        ])
        lines = describe_capture(capture)
        assert lines[0] == "#0 PING id=1"
        assert "object='enrollment' method='enroll'" in lines[1]
        assert "code='capacity-full'" in lines[2]

    def test_damaged_capture_reported(self):
        lines = describe_capture(b"XXXXGARBAGE")
        assert "damaged" in lines[0]


class TestAudit:
    def test_clean_store_audits_clean(self, tmp_path):
        plan = load_plan(write_plan(tmp_path))
        with Deployment(plan):
            seeder = Seeder(HttpClient(plan.gateway_url), "root", "root-password")
            seeder.seed_file(DEMO_FIXTURE)
            student = HttpClient(plan.gateway_url)
            student.login("S900", "pw-900")
            student.post("/api/enrollments", {"student": "S900", "unit": "CS100",
                                              "campus": "Suva", "term": "2024-1"})
        assert audit_store(plan.app.db_dir) == []

    def test_corrupted_ledger_detected(self, tmp_path):
        plan = load_plan(write_plan(tmp_path))
        with Deployment(plan):
            seeder = Seeder(HttpClient(plan.gateway_url), "root", "root-password")
            seeder.seed_file(DEMO_FIXTURE)
            student = HttpClient(plan.gateway_url)
            student.login("S900", "pw-900")
            student.post("/api/enrollments", {"student": "S900", "unit": "CS100",
                                              "campus": "Suva", "term": "2024-1"})
        # tamper offline: shrink the invoice's paid-vs-payments consistency
        from fnucis.appserver.mapping import StoreState
        from fnucis.storage.engine import open_store

        with open_store(plan.app.db_dir) as conn:
            state = StoreState(conn)
            ((key, invoice),) = [(k, v) for k, v in state.items("invoice")]
            invoice.paid_cents = 12345
            txn = conn.begin()
            StoreState(txn).put("invoice", key, invoice)
            txn.commit()
        violations = audit_store(plan.app.db_dir)
        assert any("payment sum" in v for v in violations)
