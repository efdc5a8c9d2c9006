"""Domain entity <-> contract value conversion, plus the store-backed state.

Entities cross two boundaries in the same shape: servant replies put them
on the wire, and the persistence bridge stores them as codec bytes against
the record types in the shared contract. Both directions run through the
dict-valued converters here.
"""

from __future__ import annotations

from fnucis.contracts import campus_doc
from fnucis.domain.model import (
    Application,
    Contact,
    CourseworkItem,
    Credential,
    Enrollment,
    GraduationApplication,
    Invoice,
    LineItem,
    Major,
    Payment,
    Program,
    ProgramChangeRequest,
    StaffRecord,
    StudentRecord,
    TeachingAssignment,
    Term,
    TimetableEntry,
    Unit,
    UnitOffering,
)
from fnucis.middleware import codec
from fnucis.middleware.idl import I64, record_ref


def term_value(term: Term) -> dict:
    return {"year": term.year, "semester": term.semester}


def term_entity(value: dict) -> Term:
    return Term(value["year"], value["semester"])


def contact_value(contact: Contact) -> dict:
    return {
        "postal": contact.postal,
        "residential": contact.residential,
        "home_phone": contact.home_phone,
        "mobile_phone": contact.mobile_phone,
    }


def contact_entity(value: dict) -> Contact:
    return Contact(value["postal"], value["residential"], value["home_phone"], value["mobile_phone"])


def student_value(s: StudentRecord) -> dict:
    return {"id": s.id, "name": s.name, "contact": contact_value(s.contact),
            "program": s.program, "major": s.major, "status": s.status}


def student_entity(v: dict) -> StudentRecord:
    return StudentRecord(v["id"], v["name"], contact_entity(v["contact"]), v["program"], v["major"], v["status"])


def staff_value(s: StaffRecord) -> dict:
    return {
        "id": s.id,
        "name": s.name,
        "contact": contact_value(s.contact),
        "role": s.role,
        "assignments": [
            {"unit": a.unit, "campus": a.campus, "term": term_value(a.term)} for a in s.teaching_assignments
        ],
    }


def staff_entity(v: dict) -> StaffRecord:
    return StaffRecord(
        v["id"], v["name"], contact_entity(v["contact"]), v["role"],
        [TeachingAssignment(a["unit"], a["campus"], term_entity(a["term"])) for a in v["assignments"]],
    )


def profile_value(record: StudentRecord | StaffRecord) -> dict:
    if isinstance(record, StaffRecord):
        return {"id": record.id, "name": record.name, "kind": "staff", "role": record.role,
                "contact": contact_value(record.contact), "program": None, "major": None, "status": None}
    return {"id": record.id, "name": record.name, "kind": "student", "role": "student",
            "contact": contact_value(record.contact), "program": record.program,
            "major": record.major, "status": record.status}


def program_value(p: Program) -> dict:
    return {"id": p.id, "title": p.title, "required_units": list(p.required_units),
            "majors": [{"name": m.name, "extra_units": list(m.extra_units)} for m in p.majors]}


def program_entity(v: dict) -> Program:
    return Program(v["id"], v["title"], list(v["required_units"]),
                   [Major(m["name"], list(m["extra_units"])) for m in v["majors"]])


def major_entity(v: dict) -> Major:
    return Major(v["name"], list(v["extra_units"]))


def unit_value(u: Unit) -> dict:
    return {"code": u.code, "title": u.title, "prerequisites": list(u.prerequisites),
            "credit_points": u.credit_points}


def unit_entity(v: dict) -> Unit:
    return Unit(v["code"], v["title"], list(v["prerequisites"]), v["credit_points"])


def offering_value(o: UnitOffering) -> dict:
    return {"unit": o.unit, "campus": o.campus, "term": term_value(o.term),
            "capacity": o.capacity, "active": o.active, "teacher": o.teacher}


def offering_entity(v: dict) -> UnitOffering:
    return UnitOffering(v["unit"], v["campus"], term_entity(v["term"]), v["capacity"], v["active"], v["teacher"])


def enrollment_value(e: Enrollment) -> dict:
    return {"student": e.student, "unit": e.unit, "campus": e.campus, "term": term_value(e.term),
            "status": e.status, "override_by": e.override_by, "final_grade": e.final_grade}


def enrollment_entity(v: dict) -> Enrollment:
    return Enrollment(v["student"], v["unit"], v["campus"], term_entity(v["term"]),
                      v["status"], v["override_by"], v["final_grade"])


def coursework_value(c: CourseworkItem) -> dict:
    return {"unit": c.unit, "campus": c.campus, "term": term_value(c.term), "assessment": c.assessment,
            "weight": float(c.weight),
            "scores": [{"student": s, "points": float(p)} for s, p in sorted(c.scores.items())]}


def coursework_entity(v: dict) -> CourseworkItem:
    return CourseworkItem(v["unit"], v["campus"], term_entity(v["term"]), v["assessment"], v["weight"],
                          {s["student"]: s["points"] for s in v["scores"]})


def application_value(a: Application) -> dict:
    return {"id": a.id, "name": a.name, "contact": contact_value(a.contact), "program": a.program,
            "status": a.status, "decided_by": a.decided_by,
            "decided_term": term_value(a.decided_term) if a.decided_term else None,
            "student": a.student}


def application_entity(v: dict) -> Application:
    return Application(v["id"], v["name"], contact_entity(v["contact"]), v["program"], v["status"],
                       v["decided_by"], term_entity(v["decided_term"]) if v["decided_term"] else None,
                       v["student"])


def graduation_value(g: GraduationApplication) -> dict:
    return {"id": g.id, "student": g.student, "status": g.status,
            "eligibility_snapshot": g.eligibility_snapshot, "decided_by": g.decided_by}


def graduation_entity(v: dict) -> GraduationApplication:
    return GraduationApplication(v["id"], v["student"], v["status"], v["eligibility_snapshot"], v["decided_by"])


def progchange_value(r: ProgramChangeRequest) -> dict:
    return {"id": r.id, "student": r.student, "new_program": r.new_program,
            "new_major": r.new_major, "status": r.status}


def progchange_entity(v: dict) -> ProgramChangeRequest:
    return ProgramChangeRequest(v["id"], v["student"], v["new_program"], v["new_major"], v["status"])


def invoice_value(i: Invoice) -> dict:
    return {"id": i.id, "student": i.student, "term": term_value(i.term),
            "lines": [{"description": l.description, "amount_cents": l.amount_cents} for l in i.lines],
            "total_cents": i.total_cents, "paid_cents": i.paid_cents}


def invoice_entity(v: dict) -> Invoice:
    # total_cents on the wire is derived; the entity recomputes it from lines
    return Invoice(v["id"], v["student"], term_entity(v["term"]),
                   [LineItem(l["description"], l["amount_cents"]) for l in v["lines"]], v["paid_cents"])


def payment_value(p: Payment) -> dict:
    return {"id": p.id, "invoice": p.invoice, "amount_cents": p.amount_cents,
            "card_ref": p.card_ref, "timestamp": p.timestamp}


def payment_entity(v: dict) -> Payment:
    return Payment(v["id"], v["invoice"], v["amount_cents"], v["card_ref"], v["timestamp"])


def timetable_value(t: TimetableEntry) -> dict:
    return {"unit": t.unit, "campus": t.campus, "term": term_value(t.term), "kind": t.kind,
            "day": t.day, "start": t.start, "end": t.end, "room": t.room}


def timetable_entity(v: dict) -> TimetableEntry:
    return TimetableEntry(v["unit"], v["campus"], term_entity(v["term"]), v["kind"],
                          v["day"], v["start"], v["end"], v["room"])


def credential_value(c: Credential) -> dict:
    return {"username": c.username, "person": c.person, "role": c.role, "salt": c.salt,
            "pw_hash": c.pw_hash, "iterations": c.iterations, "active": c.active}


def credential_entity(v: dict) -> Credential:
    return Credential(v["username"], v["person"], v["role"], v["salt"], v["pw_hash"],
                      v["iterations"], v["active"])


# kind -> (record name, to_value, from_value); "seq" stores a bare i64
KIND_CODECS = {
    "student": ("Student", student_value, student_entity),
    "staff": ("Staff", staff_value, staff_entity),
    "program": ("Program", program_value, program_entity),
    "unit": ("Unit", unit_value, unit_entity),
    "offering": ("Offering", offering_value, offering_entity),
    "enrollment": ("Enrollment", enrollment_value, enrollment_entity),
    "coursework": ("Coursework", coursework_value, coursework_entity),
    "application": ("Application", application_value, application_entity),
    "graduation": ("Graduation", graduation_value, graduation_entity),
    "progchange": ("ProgramChange", progchange_value, progchange_entity),
    "invoice": ("Invoice", invoice_value, invoice_entity),
    "payment": ("Payment", payment_value, payment_entity),
    "timetable": ("TimetableEntry", timetable_value, timetable_entity),
    "cred": ("Credential", credential_value, credential_entity),
}


def encode_entity(kind: str, entity) -> bytes:
    doc = campus_doc()
    if kind == "seq":
        return codec.encode_value(int(entity), I64, doc)
    record_name, to_value, _ = KIND_CODECS[kind]
    return codec.encode_value(to_value(entity), record_ref(record_name), doc)


def decode_entity(kind: str, blob: bytes):
    doc = campus_doc()
    if kind == "seq":
        value, _ = codec.decode_value(blob, I64, doc)
        return value
    record_name, _, from_value = KIND_CODECS[kind]
    value, _ = codec.decode_value(blob, record_ref(record_name), doc)
    return from_value(value)


class StoreState:
    """EntityState over a storage transaction or read-only connection."""

    def __init__(self, backend):
        self._backend = backend  # storage Connection or Transaction

    def get(self, kind: str, key: str):
        blob = self._backend.get(kind, key)
        return decode_entity(kind, blob) if blob is not None else None

    def put(self, kind: str, key: str, entity) -> None:
        self._backend.put(kind, key, encode_entity(kind, entity))

    def delete(self, kind: str, key: str) -> None:
        self._backend.delete(kind, key)

    def items(self, kind: str, prefix: str = ""):
        return [
            (key.decode("utf-8"), decode_entity(kind, blob))
            for key, blob in self._backend.scan(kind, prefix)
        ]
