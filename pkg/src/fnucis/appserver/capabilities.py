"""Role -> capability matrix.

One capability per externally reachable operation. The matrix mirrors the
three user groups' option menus: students manage their own study and
finances, academic staff teach and may override enrollments, administration
staff decide requests and run reports, and only the head of department
activates offerings. "*.self" capabilities cover a person acting on their
own records; "*.any"/"*.other" cover acting on someone else's.

The same matrix ships serialized as contracts/capability_matrix.tsv; a test
keeps the two in lockstep.
"""

from __future__ import annotations

from importlib import resources

from fnucis.domain.model import ACADEMIC_ROLES, ADMIN_ROLES

STUDENT = ("student",)
ACADEMIC = ACADEMIC_ROLES
ADMIN = ADMIN_ROLES
STAFF = ACADEMIC + ADMIN
EVERYONE = STUDENT + STAFF

_GRANTS: dict[str, tuple[str, ...]] = {
    "profile.read.self": EVERYONE,
    "profile.update.self": EVERYONE,
    "profile.read.any": ADMIN,
    "profile.update.any": ADMIN,
    "students.view": STAFF,
    "requirements.self": STUDENT,
    "requirements.any": STAFF,
    "history.self": STUDENT,
    "history.any": STAFF,
    "timetable.self": STUDENT,
    "timetable.any": STAFF,
    "coursework.view.self": STUDENT,
    "coursework.view.any": STAFF,
    "offerings.read": EVERYONE,
    "offerings.create": ("head_of_department",),
    "catalog.read": EVERYONE,
    "catalog.manage": ADMIN,
    "people.manage": ADMIN,
    "timetable.manage": ADMIN,
    "enroll.self": STUDENT,
    "enroll.other": ACADEMIC,
    "withdraw.self": STUDENT,
    "withdraw.other": ACADEMIC,
    "classlist": STAFF,
    "coursework.submit": ACADEMIC,
    "grades.finalize": ACADEMIC + ADMIN,
    "graduation.apply": STUDENT,
    "graduation.queue": ADMIN,
    "graduation.decide": ADMIN,
    "programchange.request": STUDENT,
    "programchange.queue": ADMIN,
    "programchange.decide": ADMIN,
    "applications.queue": ADMIN,
    "applications.decide": ADMIN,
    "invoices.self": STUDENT,
    "payments.self": STUDENT,
    "reports.view": ADMIN,
    "hr.link": ACADEMIC,
}

ALL_CAPABILITIES = tuple(sorted(_GRANTS))
ALL_ROLES = EVERYONE

_BY_ROLE: dict[str, frozenset[str]] = {
    role: frozenset(cap for cap, roles in _GRANTS.items() if role in roles) for role in ALL_ROLES
}


def capabilities_for(role: str) -> frozenset[str]:
    return _BY_ROLE.get(role, frozenset())


def is_allowed(role: str, capability: str) -> bool:
    return capability in capabilities_for(role)


def matrix_as_rows() -> list[tuple[str, str, str]]:
    """Full (role, capability, yes/no) cross product, sorted."""
    return [
        (role, cap, "yes" if is_allowed(role, cap) else "no")
        for role in sorted(ALL_ROLES)
        for cap in ALL_CAPABILITIES
    ]


def load_fixture_rows() -> list[tuple[str, str, str]]:
    raw = resources.files("fnucis.contracts").joinpath("capability_matrix.tsv").read_text("utf-8")
    rows = []
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        role, cap, allowed = line.split("\t")
        rows.append((role, cap, allowed))
    return rows


def render_fixture() -> str:
    lines = ["# role\tcapability\tallowed"]
    lines += ["\t".join(row) for row in matrix_as_rows()]
    return "\n".join(lines) + "\n"
