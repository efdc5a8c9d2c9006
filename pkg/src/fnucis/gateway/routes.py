"""HTTP route table: every endpoint names one servant method and nothing else.

A route's capability can depend on whether the caller acts on their own
records: `own_cap` applies when the authenticated subject equals the owner
argument, `cap` otherwise. Argument specs build the middleware call
positionally from path, query, body and the authenticated subject; all
conversion is table-driven so the gateway contains no business decisions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from fnucis.domain.model import Term


class SchemaError(Exception):
    """Request does not fit the route's schema (HTTP 400)."""


# --- argument conversion -------------------------------------------------------


def _conv_str(value):
    if not isinstance(value, str):
        raise SchemaError(f"expected string, got {type(value).__name__}")
    return value


def _conv_opt_str(value):
    return None if value is None else _conv_str(value)


def _conv_int(value):
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, str) and value.lstrip("-").isdigit():
            return int(value)
        raise SchemaError(f"expected integer, got {value!r}")
    return value


def _conv_opt_int(value):
    return None if value is None else _conv_int(value)


def _conv_number(value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected number, got {value!r}")
    return float(value)


def _conv_bool(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        return value.lower() in ("1", "true", "yes")
    raise SchemaError(f"expected boolean, got {value!r}")


def _conv_term(value):
    try:
        if isinstance(value, str):
            term = Term.parse(value)
            return {"year": term.year, "semester": term.semester}
        if isinstance(value, dict):
            return {"year": _conv_int(value["year"]), "semester": _conv_int(value["semester"])}
    except (KeyError, ValueError):
        pass
    raise SchemaError(f"expected a term like 2024-1, got {value!r}")


def _conv_opt_term(value):
    return None if value is None else _conv_term(value)


def _conv_contact(value):
    if value is None:
        value = {}
    if not isinstance(value, dict):
        raise SchemaError("contact must be an object")
    out = {}
    for key in ("postal", "residential", "home_phone", "mobile_phone"):
        out[key] = _conv_str(value.get(key, ""))
    return out


def _conv_majors(value):
    if value is None:
        return []
    if not isinstance(value, list):
        raise SchemaError("majors must be a list")
    out = []
    for item in value:
        if not isinstance(item, dict):
            raise SchemaError("each major must be an object")
        out.append({"name": _conv_str(item.get("name")),
                    "extra_units": _conv_str_list(item.get("extra_units", []))})
    return out


def _conv_str_list(value):
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaError(f"expected a list of strings, got {value!r}")
    return list(value)


def _conv_scores(value):
    if isinstance(value, dict):
        return [{"student": _conv_str(k), "points": _conv_number(v)} for k, v in sorted(value.items())]
    if isinstance(value, list):
        return [{"student": _conv_str(i.get("student")), "points": _conv_number(i.get("points"))} for i in value]
    raise SchemaError("scores must be an object or a list")


def _conv_grades(value):
    if isinstance(value, dict):
        return [{"student": _conv_str(k), "grade": _conv_str(v)} for k, v in sorted(value.items())]
    if isinstance(value, list):
        return [{"student": _conv_str(i.get("student")), "grade": _conv_str(i.get("grade"))} for i in value]
    raise SchemaError("grades must be an object or a list")


CONVERTERS = {
    "str": _conv_str,
    "opt_str": _conv_opt_str,
    "int": _conv_int,
    "opt_int": _conv_opt_int,
    "number": _conv_number,
    "bool": _conv_bool,
    "term": _conv_term,
    "opt_term": _conv_opt_term,
    "contact": _conv_contact,
    "majors": _conv_majors,
    "str_list": _conv_str_list,
    "scores": _conv_scores,
    "grades": _conv_grades,
}

_MISSING = object()


@dataclass(frozen=True)
class Arg:
    source: str  # subject | path | query | body | token | const
    name: str = ""
    conv: str = "str"
    default: object = _MISSING  # required when left as _MISSING

    def build(self, ctx: "RequestContext"):
        if self.source == "subject":
            return ctx.subject
        if self.source == "token":
            return ctx.token or ""
        if self.source == "const":
            return self.default
        if self.source == "path":
            raw = ctx.path_params.get(self.name, _MISSING)
        elif self.source == "query":
            raw = ctx.query.get(self.name, _MISSING)
        else:
            raw = ctx.body.get(self.name, _MISSING) if isinstance(ctx.body, dict) else _MISSING
        if raw is _MISSING:
            if self.default is _MISSING:
                raise SchemaError(f"missing {self.source} parameter {self.name!r}")
            raw = self.default
        try:
            return CONVERTERS[self.conv](raw)
        except SchemaError as exc:
            raise SchemaError(f"{self.name}: {exc}") from exc


@dataclass
class RequestContext:
    path_params: dict[str, str]
    query: dict[str, str]
    body: object
    token: str | None = None
    subject: str | None = None
    role: str | None = None


@dataclass(frozen=True)
class Route:
    method: str
    pattern: str
    servant: str
    rpc: str
    cap: str | None  # None = public
    args: tuple[Arg, ...] = ()
    own_cap: str | None = None
    owner: tuple[str, str] | None = None  # (source, name) identifying whose record is touched
    status: int = 200
    _regex: re.Pattern = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        pattern = re.sub(r"\{(\w+)\}", r"(?P<\1>[^/]+)", self.pattern)
        object.__setattr__(self, "_regex", re.compile(f"^{pattern}$"))

    def match(self, path: str) -> dict[str, str] | None:
        m = self._regex.match(path)
        return m.groupdict() if m else None

    def required_capability(self, ctx: RequestContext) -> str | None:
        if self.cap is None:
            return None
        if self.own_cap is not None and self.owner is not None and ctx.subject is not None:
            source, name = self.owner
            owner_value = ctx.path_params.get(name) if source == "path" else (
                ctx.body.get(name) if isinstance(ctx.body, dict) else None
            )
            if owner_value == ctx.subject:
                return self.own_cap
        return self.cap


def _term_q(default=_MISSING):
    return Arg("query", "term", "term", default)


ROUTES: tuple[Route, ...] = (
    # session
    Route("POST", "/api/login", "auth", "login", None,
          (Arg("body", "username"), Arg("body", "password"))),
    Route("POST", "/api/logout", "auth", "logout", None, (Arg("token"),)),
    # admissions
    Route("POST", "/api/applications", "admissions", "submit_application", None,
          (Arg("body", "name"), Arg("body", "contact", "contact", None),
           Arg("body", "password"), Arg("body", "program"))),
    Route("GET", "/api/applications", "admissions", "list_applications", "applications.queue",
          (Arg("query", "status", "opt_str", None),)),
    Route("GET", "/api/applications/{id}/decision", "admissions", "get_application",
          "applications.queue", (Arg("path", "id"),)),
    Route("POST", "/api/applications/{id}/decision", "admissions", "decide_application",
          "applications.decide", (Arg("subject"), Arg("path", "id"), Arg("body", "decision"))),
    # profiles & student views
    Route("GET", "/api/people/{id}/profile", "directory", "get_profile", "profile.read.any",
          (Arg("subject"), Arg("path", "id")), own_cap="profile.read.self", owner=("path", "id")),
    Route("PUT", "/api/people/{id}/profile", "directory", "update_profile", "profile.update.any",
          (Arg("subject"), Arg("path", "id"), Arg("body", "contact", "contact")),
          own_cap="profile.update.self", owner=("path", "id")),
    Route("GET", "/api/students/{id}/requirements", "records", "program_requirements",
          "requirements.any", (Arg("path", "id"),), own_cap="requirements.self", owner=("path", "id")),
    Route("GET", "/api/students/{id}/history", "records", "academic_history", "history.any",
          (Arg("path", "id"),), own_cap="history.self", owner=("path", "id")),
    Route("GET", "/api/students/{id}/timetable", "records", "timetable", "timetable.any",
          (Arg("path", "id"), _term_q()), own_cap="timetable.self", owner=("path", "id")),
    Route("GET", "/api/students/{id}/coursework", "records", "coursework_for_student",
          "coursework.view.any", (Arg("path", "id"), _term_q()),
          own_cap="coursework.view.self", owner=("path", "id")),
    Route("GET", "/api/students/{id}/eligibility", "records", "graduation_eligibility",
          "requirements.any", (Arg("path", "id"),), own_cap="requirements.self", owner=("path", "id")),
    Route("GET", "/api/students/{id}/details", "directory", "student_details", "students.view",
          (Arg("subject"), Arg("path", "id"))),
    # offerings & enrollment
    Route("GET", "/api/offerings", "enrollment", "list_offerings", "offerings.read",
          (Arg("query", "term", "opt_term", None), Arg("query", "active", "bool", False))),
    Route("POST", "/api/offerings", "enrollment", "activate_offering", "offerings.create",
          (Arg("subject"), Arg("body", "unit"), Arg("body", "campus"), Arg("body", "term", "term"),
           Arg("body", "capacity", "int", 100), Arg("body", "teacher", "opt_str", None))),
    Route("GET", "/api/offerings/{key}/classlist", "records", "class_list", "classlist",
          (Arg("subject"), Arg("path", "unit"), Arg("path", "campus"), Arg("path", "term", "term"))),
    Route("POST", "/api/enrollments", "enrollment", "enroll", "enroll.other",
          (Arg("subject"), Arg("body", "student"), Arg("body", "unit"), Arg("body", "campus"),
           Arg("body", "term", "term")), own_cap="enroll.self", owner=("body", "student")),
    Route("DELETE", "/api/enrollments", "enrollment", "withdraw", "withdraw.other",
          (Arg("subject"), Arg("body", "student"), Arg("body", "unit"), Arg("body", "campus"),
           Arg("body", "term", "term")), own_cap="withdraw.self", owner=("body", "student")),
    # coursework & grades
    Route("POST", "/api/coursework", "records", "submit_coursework", "coursework.submit",
          (Arg("subject"), Arg("body", "unit"), Arg("body", "campus"), Arg("body", "term", "term"),
           Arg("body", "assessment"), Arg("body", "weight", "number"), Arg("body", "scores", "scores"))),
    Route("POST", "/api/grades", "records", "finalize_grades", "grades.finalize",
          (Arg("subject"), Arg("body", "unit"), Arg("body", "campus"), Arg("body", "term", "term"),
           Arg("body", "grades", "grades"))),
    # graduation
    Route("POST", "/api/graduation", "records", "apply_graduation", "graduation.apply",
          (Arg("subject"),)),
    Route("GET", "/api/graduation", "records", "list_graduations", "graduation.queue",
          (Arg("query", "status", "opt_str", None),)),
    Route("POST", "/api/graduation/{id}/decision", "records", "decide_graduation",
          "graduation.decide", (Arg("subject"), Arg("path", "id"), Arg("body", "decision"))),
    # program change
    Route("POST", "/api/program-change", "records", "request_program_change", "programchange.request",
          (Arg("subject"), Arg("body", "new_program"), Arg("body", "new_major", "opt_str", None))),
    Route("GET", "/api/program-change", "records", "list_program_changes", "programchange.queue",
          (Arg("query", "status", "opt_str", None),)),
    Route("POST", "/api/program-change/{id}/decision", "records", "decide_program_change",
          "programchange.decide", (Arg("subject"), Arg("path", "id"), Arg("body", "decision"))),
    # finance
    Route("GET", "/api/invoices", "finance", "invoices", "invoices.self", (Arg("subject"),)),
    Route("POST", "/api/payments", "finance", "pay", "payments.self",
          (Arg("subject"), Arg("body", "invoice"), Arg("body", "amount_cents", "int"),
           Arg("body", "card_ref"))),
    # reports
    Route("GET", "/api/reports/{kind}", "reporting", "report", "reports.view",
          (Arg("subject"), Arg("path", "kind"), _term_q())),
    # catalog; the program list is public so the application form can offer it
    Route("GET", "/api/catalog/programs", "enrollment", "list_programs", None),
    Route("GET", "/api/catalog/programs/{id}", "enrollment", "get_program", "catalog.read",
          (Arg("path", "id"),)),
    Route("GET", "/api/catalog/units", "enrollment", "list_units", "catalog.read"),
    Route("POST", "/api/catalog/programs", "enrollment", "add_program", "catalog.manage",
          (Arg("subject"), Arg("body", "id"), Arg("body", "title"),
           Arg("body", "required_units", "str_list"), Arg("body", "majors", "majors", None))),
    Route("POST", "/api/catalog/units", "enrollment", "add_unit", "catalog.manage",
          (Arg("subject"), Arg("body", "code"), Arg("body", "title"),
           Arg("body", "prerequisites", "str_list", []), Arg("body", "credit_points", "int", 15))),
    # people management & timetable management
    Route("POST", "/api/people/staff", "directory", "add_staff", "people.manage",
          (Arg("subject"), Arg("body", "id"), Arg("body", "name"), Arg("body", "role"),
           Arg("body", "contact", "contact", None), Arg("body", "password"))),
    Route("POST", "/api/people/students", "directory", "register_student", "people.manage",
          (Arg("subject"), Arg("body", "id"), Arg("body", "name"), Arg("body", "program"),
           Arg("body", "major", "opt_str", None), Arg("body", "contact", "contact", None),
           Arg("body", "password"))),
    Route("POST", "/api/timetable", "records", "add_timetable_entry", "timetable.manage",
          (Arg("subject"), Arg("body", "unit"), Arg("body", "campus"), Arg("body", "term", "term"),
           Arg("body", "kind"), Arg("body", "day"), Arg("body", "start"), Arg("body", "end"),
           Arg("body", "room"))),
)


def find_route(method: str, path: str) -> tuple[Route, dict[str, str]] | None:
    for route in ROUTES:
        if route.method != method:
            continue
        params = route.match(path)
        if params is not None:
            return route, params
    return None
