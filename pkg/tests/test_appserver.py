import threading

import pytest

from fnucis.middleware.errors import RemoteCallError
from fnucis.storage.engine import LockedError

from conftest import AppStack

NO_CONTACT = {"postal": "", "residential": "", "home_phone": "", "mobile_phone": ""}
TERM = {"year": 2024, "semester": 1}


def login(stack, client, username, password):
    return stack.call(client, "auth", "login", [username, password])


def seed_minimal(stack, client, admin):
    """Catalog with one prereq chain and a capacity-1 offering."""
    a = admin["subject"]
    stack.call(client, "directory", "add_staff", [a, "HOD1", "Hana", "head_of_department", NO_CONTACT, "pw-hod"])
    stack.call(client, "directory", "add_staff", [a, "LEC1", "Lata", "lecturer", NO_CONTACT, "pw-lec"])
    stack.call(client, "enrollment", "add_unit", [a, "CS100", "Basics", [], 15])
    stack.call(client, "enrollment", "add_unit", [a, "CS101", "Programming", ["CS100"], 15])
    stack.call(client, "enrollment", "add_program", [a, "BSC", "Science", ["CS100", "CS101"], []])
    stack.call(client, "directory", "register_student", [a, "S900", "Sela", "BSC", None, NO_CONTACT, "pw-900"])
    stack.call(client, "directory", "register_student", [a, "S901", "Sami", "BSC", None, NO_CONTACT, "pw-901"])
    hod = login(stack, client, "HOD1", "pw-hod")
    stack.call(client, "enrollment", "activate_offering", [hod["subject"], "CS100", "Suva", TERM, 1, "LEC1"])
    stack.call(client, "enrollment", "activate_offering", [hod["subject"], "CS101", "Suva", TERM, 50, "LEC1"])


class TestAuth:
    def test_bootstrap_login_and_role(self, app_stack):
        client = app_stack.client()
        session = login(app_stack, client, "root", "root-pw")
        assert session["role"] == "academic_services"
        assert len(session["token"]) == 32

    def test_wrong_password(self, app_stack):
        client = app_stack.client()
        with pytest.raises(RemoteCallError) as exc:
            login(app_stack, client, "root", "nope")
        assert exc.value.code == "bad-credentials"

    def test_unknown_user_same_code(self, app_stack):
        client = app_stack.client()
        with pytest.raises(RemoteCallError) as exc:
            login(app_stack, client, "ghost", "nope")
        assert exc.value.code == "bad-credentials"

    def test_two_logins_distinct_tokens(self, app_stack):
        client = app_stack.client()
        t1 = login(app_stack, client, "root", "root-pw")["token"]
        t2 = login(app_stack, client, "root", "root-pw")["token"]
        assert t1 != t2

    def test_logout_invalidates(self, app_stack):
        client = app_stack.client()
        token = login(app_stack, client, "root", "root-pw")["token"]
        app_stack.call(client, "auth", "logout", [token])
        with pytest.raises(RemoteCallError) as exc:
            app_stack.call(client, "auth", "whoami", [token])
        assert exc.value.code == "token-unknown"

    def test_authorize_allows_and_forbids(self, app_stack):
        client = app_stack.client()
        token = login(app_stack, client, "root", "root-pw")["token"]
        actor = app_stack.call(client, "auth", "authorize", [token, "reports.view"])
        assert actor["subject"] == "root"
        with pytest.raises(RemoteCallError) as exc:
            app_stack.call(client, "auth", "authorize", [token, "enroll.self"])
        assert exc.value.code == "forbidden"

    def test_expired_token(self, tmp_path):
        stack = AppStack(tmp_path, token_ttl_hours=0.0)
        try:
            client = stack.client()
            token = login(stack, client, "root", "root-pw")["token"]
            with pytest.raises(RemoteCallError) as exc:
                stack.call(client, "auth", "whoami", [token])
            assert exc.value.code == "token-expired"
        finally:
            stack.stop()

    def test_applicant_account_inactive_after_rejection(self, app_stack):
        client = app_stack.client()
        admin = login(app_stack, client, "root", "root-pw")
        app_stack.call(client, "enrollment", "add_unit", [admin["subject"], "CS100", "Basics", [], 15])
        app_stack.call(client, "enrollment", "add_program", [admin["subject"], "BSC", "Sci", ["CS100"], []])
        application = app_stack.call(client, "admissions", "submit_application",
                                     ["Alo", NO_CONTACT, "alo-pw", "BSC"])
        app_stack.call(client, "admissions", "decide_application",
                       [admin["subject"], application["id"], "reject"])
        with pytest.raises(RemoteCallError) as exc:
            login(app_stack, client, application["id"], "alo-pw")
        assert exc.value.code == "account-inactive"

    def test_approved_applicant_logs_in_as_student(self, app_stack):
        client = app_stack.client()
        admin = login(app_stack, client, "root", "root-pw")
        app_stack.call(client, "enrollment", "add_unit", [admin["subject"], "CS100", "Basics", [], 15])
        app_stack.call(client, "enrollment", "add_program", [admin["subject"], "BSC", "Sci", ["CS100"], []])
        application = app_stack.call(client, "admissions", "submit_application",
                                     ["Alo", NO_CONTACT, "alo-pw", "BSC"])
        decided = app_stack.call(client, "admissions", "decide_application",
                                 [admin["subject"], application["id"], "approve"])
        session = login(app_stack, client, decided["student"], "alo-pw")
        assert session["role"] == "student"


class TestDispatchTransactions:
    def store_digest(self, stack):
        kinds = ["student", "staff", "program", "unit", "offering", "enrollment", "coursework",
                 "application", "graduation", "progchange", "invoice", "payment", "timetable",
                 "cred", "seq"]
        store = stack.app.store
        return {kind: store.scan(kind) for kind in kinds}

    def test_error_reply_leaves_state_unchanged(self, app_stack):
        client = app_stack.client()
        admin = login(app_stack, client, "root", "root-pw")
        seed_minimal(app_stack, client, admin)
        app_stack.call(client, "enrollment", "enroll", ["S900", "S900", "CS100", "Suva", TERM])
        before = self.store_digest(app_stack)
        with pytest.raises(RemoteCallError) as exc:
            app_stack.call(client, "enrollment", "enroll", ["S901", "S901", "CS100", "Suva", TERM])
        assert exc.value.code == "capacity-full"
        assert self.store_digest(app_stack) == before

    def test_successful_enroll_commits_enrollment_and_invoice_atomically(self, app_stack):
        client = app_stack.client()
        admin = login(app_stack, client, "root", "root-pw")
        seed_minimal(app_stack, client, admin)
        app_stack.call(client, "enrollment", "enroll", ["S900", "S900", "CS100", "Suva", TERM])
        invoices = app_stack.call(client, "finance", "invoices", ["S900"])
        assert invoices[0]["total_cents"] == 15 * 4000

    def test_concurrent_enrolls_capacity_one(self, app_stack):
        client = app_stack.client()
        admin = login(app_stack, client, "root", "root-pw")
        seed_minimal(app_stack, client, admin)
        results = {}

        def enroll(student):
            try:
                app_stack.call(app_stack.client(), "enrollment", "enroll",
                               [student, student, "CS100", "Suva", TERM])
                results[student] = "ok"
            except RemoteCallError as exc:
                results[student] = exc.code

        threads = [threading.Thread(target=enroll, args=(s,)) for s in ("S900", "S901")]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(results.values()) == ["capacity-full", "ok"]

    def test_domain_error_code_passthrough(self, app_stack):
        client = app_stack.client()
        admin = login(app_stack, client, "root", "root-pw")
        seed_minimal(app_stack, client, admin)
        with pytest.raises(RemoteCallError) as exc:
            app_stack.call(client, "enrollment", "enroll", ["S900", "S900", "CS101", "Suva", TERM])
        assert exc.value.code == "prereq-unmet"

    def test_state_survives_restart(self, tmp_path):
        stack = AppStack(tmp_path)
        client = stack.client()
        admin = login(stack, client, "root", "root-pw")
        seed_minimal(stack, client, admin)
        stack.stop()

        stack2 = AppStack(tmp_path)
        try:
            client2 = stack2.client()
            admin2 = login(stack2, client2, "root", "root-pw")
            units = stack2.call(client2, "enrollment", "list_units", [])
            assert {u["code"] for u in units} == {"CS100", "CS101"}
        finally:
            stack2.stop()

    def test_second_server_on_same_store_is_locked(self, app_stack):
        from fnucis.appserver.config import AppConfig
        from fnucis.appserver.server import AppServer

        config = AppConfig(listen_port=0, registry_port=app_stack.registry.port,
                           db_dir=app_stack.config.db_dir, pbkdf2_iters=400)
        with pytest.raises(LockedError):
            AppServer(config).start()

    def test_current_term_exposed(self, app_stack):
        client = app_stack.client()
        assert app_stack.call(client, "directory", "current_term", []) == TERM
