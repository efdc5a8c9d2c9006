import inspect

from fnucis.appserver import auth as auth_mod
from fnucis.appserver.capabilities import (
    ALL_CAPABILITIES,
    ALL_ROLES,
    capabilities_for,
    is_allowed,
    load_fixture_rows,
    matrix_as_rows,
)
from fnucis.contracts import error_registry
from fnucis.domain import errors as domain_errors
from fnucis.domain.errors import DomainError


def test_fixture_matches_code_matrix():
    assert load_fixture_rows() == matrix_as_rows()


def test_nine_roles():
    assert len(ALL_ROLES) == 9
    assert "student" in ALL_ROLES and "head_of_department" in ALL_ROLES


def test_every_capability_granted_to_someone():
    for cap in ALL_CAPABILITIES:
        assert any(is_allowed(role, cap) for role in ALL_ROLES), cap


def test_student_option_set():
    caps = capabilities_for("student")
    # the student menu: profile, program details, graduation, enrollment,
    # timetable, history, coursework, finance
    assert {"profile.read.self", "profile.update.self", "requirements.self", "graduation.apply",
            "enroll.self", "withdraw.self", "timetable.self", "history.self",
            "coursework.view.self", "invoices.self", "payments.self",
            "programchange.request"} <= caps
    assert "reports.view" not in caps and "classlist" not in caps


def test_academic_option_set():
    caps = capabilities_for("lecturer")
    assert {"enroll.other", "coursework.submit", "classlist", "students.view", "hr.link"} <= caps
    assert "applications.decide" not in caps and "offerings.create" not in caps
    assert "enroll.self" not in caps


def test_admin_option_set():
    for role in ("dean", "head_of_department", "academic_services"):
        caps = capabilities_for(role)
        assert {"applications.queue", "applications.decide", "graduation.decide",
                "programchange.decide", "reports.view", "students.view"} <= caps
        assert "enroll.other" not in caps and "enroll.self" not in caps
        assert "hr.link" not in caps
    assert is_allowed("head_of_department", "offerings.create")
    assert not is_allowed("dean", "offerings.create")
    assert not is_allowed("academic_services", "offerings.create")


def test_unknown_role_has_no_capabilities():
    assert capabilities_for("applicant") == frozenset()
    assert not is_allowed("applicant", "profile.read.self")


def test_error_registry_totality():
    registry = error_registry()
    domain_codes = {
        cls.code
        for _, cls in inspect.getmembers(domain_errors, inspect.isclass)
        if issubclass(cls, DomainError)
    }
    auth_codes = {
        cls.code
        for _, cls in inspect.getmembers(auth_mod, inspect.isclass)
        if isinstance(cls, type) and issubclass(cls, DomainError)
    }
    middleware_codes = {"no-such-object", "no-such-method", "bad-arguments", "internal",
                        "unavailable", "not-supported", "protocol", "connect-failed", "timeout"}
    for code in domain_codes | auth_codes | middleware_codes:
        if code == "domain-error":
            continue  # abstract base, never crosses a tier
        assert code in registry, f"error code {code!r} missing an HTTP mapping"
    for code, (status, message) in registry.items():
        assert 400 <= status <= 599, code
        assert message
