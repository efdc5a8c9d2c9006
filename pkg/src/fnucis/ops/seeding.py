"""Fixture seeding through the public HTTP API.

Fixture files are plain text, one entity per line, tab-separated, first
token naming the kind:

    unit<TAB>CS100<TAB>Computing Basics<TAB><TAB>15
    unit<TAB>CS101<TAB>Programming<TAB>CS100<TAB>15
    program<TAB>BSC<TAB>Bachelor of Science<TAB>CS100,CS101<TAB>Systems:CS200
    staff<TAB>HOD1<TAB>Hari Hod<TAB>head_of_department<TAB>pw-hod
    student<TAB>S900<TAB>Sela<TAB>BSC<TAB><TAB>pw-900
    offering<TAB>CS100<TAB>Suva<TAB>2024-1<TAB>100<TAB>LEC1
    timetable<TAB>CS100<TAB>Suva<TAB>2024-1<TAB>class<TAB>Mon<TAB>09:00<TAB>11:00<TAB>R101

Unit prerequisites and program units are comma-joined; program majors are
semicolon-joined name:unit,unit pairs; blank fields mean "none". Offerings
are activated by a head_of_department from the same fixture (the seeder
logs in with the password on that staff row). Re-running a fixture skips
rows that already exist (reported per kind).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from fnucis.ops.httpapi import ApiError, HttpClient

DUPLICATE_CODES = {
    "duplicate-unit", "duplicate-program", "duplicate-person",
    "duplicate-offering", "duplicate-timetable", "duplicate-enrollment",
}


class FixtureSyntax(Exception):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SeedError(Exception):
    def __init__(self, line_no: int, cause: ApiError):
        super().__init__(f"line {line_no}: {cause}")
        self.line_no = line_no
        self.cause = cause


@dataclass
class SeedReport:
    created: dict[str, int] = field(default_factory=dict)
    skipped: dict[str, int] = field(default_factory=dict)

    def add(self, kind: str, was_created: bool) -> None:
        bucket = self.created if was_created else self.skipped
        bucket[kind] = bucket.get(kind, 0) + 1

    def lines(self) -> list[str]:
        kinds = sorted(set(self.created) | set(self.skipped))
        return [
            f"{kind}\tcreated={self.created.get(kind, 0)}\tskipped={self.skipped.get(kind, 0)}"
            for kind in kinds
        ]


def _split_list(raw: str) -> list[str]:
    return [item for item in raw.split(",") if item] if raw else []


def _parse_majors(raw: str) -> list[dict]:
    majors = []
    if not raw:
        return majors
    for chunk in raw.split(";"):
        if not chunk:
            continue
        name, _, units = chunk.partition(":")
        majors.append({"name": name, "extra_units": _split_list(units)})
    return majors


def parse_fixture(text: str) -> list[tuple[int, str, list[str]]]:
    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = raw.split("\t")
        kind = fields[0].strip()
        if kind not in ("unit", "program", "staff", "student", "offering", "timetable"):
            raise FixtureSyntax(line_no, f"unknown entity kind {kind!r}")
        rows.append((line_no, kind, [f.strip() for f in fields[1:]]))
    return rows


class Seeder:
    def __init__(self, client: HttpClient, admin_user: str, admin_password: str):
        self.client = client
        self.admin_user = admin_user
        self.admin_password = admin_password
        self._staff_passwords: dict[str, str] = {}
        self._hod_clients: dict[str, HttpClient] = {}

    def seed_file(self, path: str | Path) -> SeedReport:
        return self.seed_text(Path(path).read_text("utf-8"))

    def seed_text(self, text: str) -> SeedReport:
        rows = parse_fixture(text)
        self.client.login(self.admin_user, self.admin_password)
        report = SeedReport()
        for line_no, kind, fields in rows:
            try:
                created = getattr(self, f"_seed_{kind}")(line_no, fields)
            except ApiError as exc:
                if exc.code in DUPLICATE_CODES:
                    report.add(kind, was_created=False)
                    continue
                raise SeedError(line_no, exc) from exc
            report.add(kind, created)
        return report

    @staticmethod
    def _need(line_no: int, fields: list[str], required: int, total: int, usage: str) -> list[str]:
        """Columns past `required` are optional and default to empty."""
        if len(fields) < required:
            raise FixtureSyntax(line_no, f"expected {usage}")
        return fields + [""] * (total - len(fields))

    def _seed_unit(self, line_no: int, fields: list[str]) -> bool:
        code, title, prereqs, credits = self._need(line_no, fields, 2, 4, "unit\tCODE\tTITLE\tPREREQS\tCREDITS")
        self.client.post("/api/catalog/units", {
            "code": code, "title": title, "prerequisites": _split_list(prereqs),
            "credit_points": int(credits) if credits else 15})
        return True

    def _seed_program(self, line_no: int, fields: list[str]) -> bool:
        pid, title, units, majors = self._need(line_no, fields, 3, 4, "program\tID\tTITLE\tUNITS\tMAJORS")
        self.client.post("/api/catalog/programs", {
            "id": pid, "title": title, "required_units": _split_list(units),
            "majors": _parse_majors(majors)})
        return True

    def _seed_staff(self, line_no: int, fields: list[str]) -> bool:
        sid, name, role, password = self._need(line_no, fields, 4, 4, "staff\tID\tNAME\tROLE\tPASSWORD")
        self._staff_passwords[sid] = password
        self.client.post("/api/people/staff", {
            "id": sid, "name": name, "role": role, "password": password})
        return True

    def _seed_student(self, line_no: int, fields: list[str]) -> bool:
        sid, name, program, major, password = self._need(
            line_no, fields, 5, 5, "student\tID\tNAME\tPROGRAM\tMAJOR\tPASSWORD")
        self.client.post("/api/people/students", {
            "id": sid, "name": name, "program": program,
            "major": major or None, "password": password})
        return True

    def _hod_client(self, line_no: int, teacher_hint: str | None) -> HttpClient:
        # offerings need a head_of_department session; find one seeded earlier
        for sid, password in self._staff_passwords.items():
            client = self._hod_clients.get(sid)
            if client is not None:
                return client
            probe = HttpClient(self.client.base_url)
            session = probe.login(sid, password)
            if session["role"] == "head_of_department":
                self._hod_clients[sid] = probe
                return probe
        raise FixtureSyntax(line_no, "offering rows need a head_of_department staff row earlier in the fixture")

    def _seed_offering(self, line_no: int, fields: list[str]) -> bool:
        unit, campus, term, capacity, teacher = self._need(
            line_no, fields, 3, 5, "offering\tUNIT\tCAMPUS\tTERM\tCAPACITY\tTEACHER")
        hod = self._hod_client(line_no, teacher or None)
        hod.post("/api/offerings", {
            "unit": unit, "campus": campus, "term": term,
            "capacity": int(capacity) if capacity else 100, "teacher": teacher or None})
        return True

    def _seed_timetable(self, line_no: int, fields: list[str]) -> bool:
        unit, campus, term, kind, day, start, end, room = self._need(
            line_no, fields, 8, 8, "timetable\tUNIT\tCAMPUS\tTERM\tKIND\tDAY\tSTART\tEND\tROOM")
        self.client.post("/api/timetable", {
            "unit": unit, "campus": campus, "term": term, "kind": kind,
            "day": day, "start": start, "end": end, "room": room})
        return True
