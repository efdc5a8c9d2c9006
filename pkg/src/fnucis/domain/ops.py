"""All campus workflows as functions over an explicit state handle.

One CampusOps instance wraps one state handle plus the domain
configuration; the caller owns transactionality and write serialization.
Authorization rules that are part of the business domain (who may decide,
who may activate, staff override on enrollment) live here; transport-level
capability checks live with the session layer.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from fnucis.domain import errors as err
from fnucis.domain.model import (
    ACADEMIC_ROLES,
    ADMIN_ROLES,
    ALL_STAFF_ROLES,
    TIMETABLE_KINDS,
    WEEKDAYS,
    Application,
    Contact,
    CourseworkItem,
    DomainConfig,
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
    enrollment_key,
    offering_key,
)
from fnucis.domain.state import EntityState

_ID_RE = re.compile(r"^[^|\t\n]+$")
_TIME_RE = re.compile(r"^([01][0-9]|2[0-3]):[0-5][0-9]$")


@dataclass
class ReportTable:
    kind: str
    term: Term
    columns: list[str]
    rows: list[list[str]]


def _check_id(value: str, what: str) -> str:
    if not value or not _ID_RE.match(value):
        raise err.BadInput(f"{what} must be non-empty without '|', tab or newline: {value!r}")
    return value


class CampusOps:
    def __init__(self, state: EntityState, config: DomainConfig, clock: Callable[[], float] = time.time):
        self.state = state
        self.config = config
        self.clock = clock

    # -- identity & roles ------------------------------------------------------

    def student(self, person: str) -> StudentRecord:
        record = self.state.get("student", person)
        if record is None:
            raise err.UnknownPerson(f"no student {person!r}")
        return record

    def staff(self, person: str) -> StaffRecord | None:
        return self.state.get("staff", person)

    def role_of(self, person: str) -> str:
        staff = self.staff(person)
        if staff is not None:
            return staff.role
        if self.state.get("student", person) is not None:
            return "student"
        raise err.UnknownPerson(f"no person {person!r}")

    def _require_admin(self, actor: str) -> str:
        role = self.role_of(actor)
        if role not in ADMIN_ROLES:
            raise err.NotAuthorized(f"{actor} ({role}) is not administration staff")
        return role

    def _require_staff(self, actor: str) -> str:
        role = self.role_of(actor)
        if role not in ALL_STAFF_ROLES:
            raise err.NotAuthorized(f"{actor} ({role}) is not staff")
        return role

    def _next_id(self, prefix: str) -> str:
        counter = self.state.get("seq", prefix) or 0
        counter += 1
        self.state.put("seq", prefix, counter)
        return f"{prefix}{counter:04d}"

    # -- catalog management ------------------------------------------------------

    def add_program(self, actor: str, program_id: str, title: str, required_units: list[str],
                    majors: list[Major] | None = None) -> Program:
        self._require_admin(actor)
        _check_id(program_id, "program id")
        if self.state.get("program", program_id) is not None:
            raise err.DuplicateProgram(f"program {program_id!r} already exists")
        if not required_units:
            raise err.BadInput("a program needs at least one required unit")
        if len(set(required_units)) != len(required_units):
            raise err.BadInput("required units contain duplicates")
        for code in required_units:
            self._unit(code)
        majors = majors or []
        for major in majors:
            for code in major.extra_units:
                self._unit(code)
        program = Program(program_id, title, list(required_units), majors)
        self.state.put("program", program_id, program)
        return program

    def add_unit(self, actor: str, code: str, title: str, prerequisites: list[str],
                 credit_points: int) -> Unit:
        self._require_admin(actor)
        _check_id(code, "unit code")
        if self.state.get("unit", code) is not None:
            raise err.DuplicateUnit(f"unit {code!r} already exists")
        if credit_points <= 0:
            raise err.BadInput("credit points must be positive")
        if code in prerequisites:
            raise err.BadInput("a unit cannot be its own prerequisite")
        for prereq in prerequisites:
            self._unit(prereq)  # prerequisites must already exist, keeping the graph acyclic
        unit = Unit(code, title, list(prerequisites), credit_points)
        self.state.put("unit", code, unit)
        return unit

    def _unit(self, code: str) -> Unit:
        unit = self.state.get("unit", code)
        if unit is None:
            raise err.UnknownUnit(f"no unit {code!r}")
        return unit

    def _program(self, program_id: str) -> Program:
        program = self.state.get("program", program_id)
        if program is None:
            raise err.UnknownProgram(f"no program {program_id!r}")
        return program

    def list_programs(self) -> list[Program]:
        return [p for _, p in self.state.items("program")]

    def list_units(self) -> list[Unit]:
        return [u for _, u in self.state.items("unit")]

    def get_program(self, program_id: str) -> Program:
        return self._program(program_id)

    # -- people ----------------------------------------------------------------

    def add_staff(self, actor: str, person: str, name: str, role: str,
                  contact: Contact | None = None) -> StaffRecord:
        self._require_admin(actor)
        _check_id(person, "person id")
        if role not in ALL_STAFF_ROLES:
            raise err.BadInput(f"unknown staff role {role!r}")
        if self.state.get("staff", person) is not None or self.state.get("student", person) is not None:
            raise err.DuplicatePerson(f"person {person!r} already exists")
        record = StaffRecord(person, name, contact or Contact(), role)
        self.state.put("staff", person, record)
        return record

    def register_student(self, actor: str, person: str, name: str, program: str,
                         major: str | None = None, contact: Contact | None = None,
                         status: str = "active") -> StudentRecord:
        self._require_admin(actor)
        _check_id(person, "person id")
        prog = self._program(program)
        self._check_major(prog, major)
        if self.state.get("staff", person) is not None or self.state.get("student", person) is not None:
            raise err.DuplicatePerson(f"person {person!r} already exists")
        record = StudentRecord(person, name, contact or Contact(), program, major, status)
        self.state.put("student", person, record)
        return record

    def _check_major(self, program: Program, major: str | None) -> None:
        if major is not None and major not in [m.name for m in program.majors]:
            raise err.UnknownMajor(f"program {program.id!r} has no major {major!r}")

    def update_profile(self, actor: str, target: str, contact: Contact) -> None:
        actor_role = self.role_of(actor)
        if actor != target and actor_role not in ADMIN_ROLES:
            raise err.NotAuthorized("only the person or administration staff may update a profile")
        staff = self.state.get("staff", target)
        if staff is not None:
            staff.contact = contact
            self.state.put("staff", target, staff)
            return
        student = self.state.get("student", target)
        if student is None:
            raise err.UnknownPerson(f"no person {target!r}")
        student.contact = contact
        self.state.put("student", target, student)

    def get_profile(self, actor: str, person: str):
        """Returns the StaffRecord or StudentRecord; self or any staff may look."""
        actor_role = self.role_of(actor)
        if actor != person and actor_role not in ALL_STAFF_ROLES:
            raise err.NotAuthorized("students may only view their own profile")
        record = self.state.get("staff", person) or self.state.get("student", person)
        if record is None:
            raise err.UnknownPerson(f"no person {person!r}")
        return record

    # -- admissions --------------------------------------------------------------

    def submit_application(self, name: str, contact: Contact, program: str) -> Application:
        self._program(program)
        app_id = self._next_id("A")
        application = Application(app_id, name, contact, program)
        self.state.put("application", app_id, application)
        return application

    def get_application(self, app_id: str) -> Application:
        application = self.state.get("application", app_id)
        if application is None:
            raise err.UnknownApplication(f"no application {app_id!r}")
        return application

    def list_applications(self, status: str | None = None) -> list[Application]:
        apps = [a for _, a in self.state.items("application")]
        if status is not None:
            apps = [a for a in apps if a.status == status]
        return apps

    def decide_application(self, actor: str, app_id: str, decision: str) -> Application:
        self._require_admin(actor)
        application = self.get_application(app_id)
        if application.status != "pending":
            raise err.AlreadyDecided(f"application {app_id} is {application.status}")
        if decision not in ("approve", "reject"):
            raise err.BadInput(f"decision must be approve or reject, got {decision!r}")
        application.decided_by = actor
        application.decided_term = self.config.current_term
        if decision == "reject":
            application.status = "rejected"
            self.state.put("application", app_id, application)
            return application
        application.status = "approved"
        student_id = self._next_id("S")
        student = StudentRecord(student_id, application.name, application.contact,
                                application.program, None, "admitted")
        application.student = student_id
        self.state.put("student", student_id, student)
        self.state.put("application", app_id, application)
        return application

    # -- offerings & enrollment ------------------------------------------------------

    def activate_offering(self, actor: str, unit: str, campus: str, term: Term,
                          capacity: int | None = None, teacher: str | None = None) -> UnitOffering:
        role = self.role_of(actor)
        if role != "head_of_department":
            raise err.NotAuthorized("only the head of department activates offerings")
        self._unit(unit)
        _check_id(campus, "campus")
        key = offering_key(unit, campus, term)
        if self.state.get("offering", key) is not None:
            raise err.DuplicateOffering(f"offering {key} already activated")
        capacity = self.config.default_capacity if capacity is None else capacity
        if capacity <= 0:
            raise err.BadInput("capacity must be positive")
        if teacher is not None:
            teacher_record = self.staff(teacher)
            if teacher_record is None:
                raise err.UnknownPerson(f"no staff {teacher!r}")
            teacher_record.teaching_assignments.append(TeachingAssignment(unit, campus, term))
            self.state.put("staff", teacher, teacher_record)
        offering = UnitOffering(unit, campus, term, capacity, True, teacher)
        self.state.put("offering", key, offering)
        return offering

    def list_offerings(self, term: Term | None = None, active_only: bool = False) -> list[UnitOffering]:
        offerings = [o for _, o in self.state.items("offering")]
        if term is not None:
            offerings = [o for o in offerings if o.term == term]
        if active_only:
            offerings = [o for o in offerings if o.active]
        return offerings

    def _offering(self, unit: str, campus: str, term: Term) -> UnitOffering:
        offering = self.state.get("offering", offering_key(unit, campus, term))
        if offering is None:
            raise err.UnknownOffering(f"no offering {offering_key(unit, campus, term)}")
        return offering

    def _enrollments_for_offering(self, unit: str, campus: str, term: Term) -> list[Enrollment]:
        return [
            e
            for _, e in self.state.items("enrollment")
            if e.unit == unit and e.campus == campus and e.term == term
        ]

    def _enrollments_for_student(self, student: str) -> list[Enrollment]:
        return [e for _, e in self.state.items("enrollment", prefix=f"{student}|")]

    def passed_units(self, student: str) -> set[str]:
        return {
            e.unit
            for e in self._enrollments_for_student(student)
            if e.status == "completed" and e.final_grade is not None and self.config.is_passing(e.final_grade)
        }

    def enroll(self, actor: str, student: str, unit: str, campus: str, term: Term) -> Enrollment:
        offering = self._offering(unit, campus, term)
        if not offering.active:
            raise err.OfferingInactive(f"offering {offering.key()} is inactive")
        record = self.student(student)
        if record.status not in ("admitted", "active"):
            raise err.NotAuthorized(f"student {student} has status {record.status}")
        actor_role = self.role_of(actor)
        override_by: str | None = None
        if actor_role == "student":
            if actor != student:
                raise err.NotAuthorized("students enroll only themselves")
        elif actor_role in ACADEMIC_ROLES:
            override_by = actor
        else:
            raise err.NotAuthorized("administration staff do not enroll students")

        for e in self._enrollments_for_student(student):
            if e.unit == unit and e.term == term and e.status != "withdrawn":
                raise err.DuplicateEnrollment(f"{student} already enrolled in {unit} for {term}")

        if override_by is None:
            unit_record = self._unit(unit)
            passed = self.passed_units(student)
            missing = [p for p in unit_record.prerequisites if p not in passed]
            if missing:
                raise err.PrerequisiteUnmet(f"missing prerequisites: {', '.join(sorted(missing))}")

        enrolled_count = sum(1 for e in self._enrollments_for_offering(unit, campus, term) if e.status == "enrolled")
        if enrolled_count >= offering.capacity:
            raise err.CapacityFull(f"offering {offering.key()} is at capacity {offering.capacity}")

        enrollment = Enrollment(student, unit, campus, term, "enrolled", override_by)
        self.state.put("enrollment", enrollment_key(student, unit, campus, term), enrollment)
        if record.status == "admitted":
            record.status = "active"
            self.state.put("student", student, record)
        self._invoice_line(student, term, f"Enrollment {unit}",
                           self._unit(unit).credit_points * self.config.fee_cents_per_credit)
        return enrollment

    def withdraw(self, actor: str, student: str, unit: str, campus: str, term: Term) -> Enrollment:
        actor_role = self.role_of(actor)
        if actor != student and actor_role not in ALL_STAFF_ROLES:
            raise err.NotAuthorized("only the student or staff may withdraw an enrollment")
        enrollment = self.state.get("enrollment", enrollment_key(student, unit, campus, term))
        if enrollment is None or enrollment.status == "withdrawn":
            raise err.NotEnrolled(f"{student} is not enrolled in {unit} at {campus} for {term}")
        if enrollment.status == "completed":
            raise err.AlreadyCompleted(f"{student} already completed {unit}")
        enrollment.status = "withdrawn"
        self.state.put("enrollment", enrollment_key(student, unit, campus, term), enrollment)
        refund = self._unit(unit).credit_points * self.config.fee_cents_per_credit
        self._invoice_line(student, term, f"Refund {unit}", -refund)
        return enrollment

    # -- coursework & grades --------------------------------------------------------

    def submit_coursework(self, actor: str, unit: str, campus: str, term: Term,
                          assessment: str, weight: float, scores: dict[str, float]) -> CourseworkItem:
        offering = self._offering(unit, campus, term)
        if offering.teacher != actor:
            raise err.NotAuthorized(f"{actor} does not teach {offering.key()}")
        if not 0 <= weight <= 100:
            raise err.BadInput("weight must be between 0 and 100")
        _check_id(assessment, "assessment name")
        existing_total = sum(
            item.weight
            for key, item in self.state.items("coursework", prefix=f"{unit}|{campus}|{term}|")
            if item.assessment != assessment
        )
        if existing_total + weight > 100:
            raise err.WeightOverflow(f"weights would sum to {existing_total + weight}")
        enrolled = {
            e.student for e in self._enrollments_for_offering(unit, campus, term) if e.status != "withdrawn"
        }
        for student, score in scores.items():
            if student not in enrolled:
                raise err.NotEnrolledStudent(f"{student} is not enrolled in {offering.key()}")
            if not 0 <= score <= 100:
                raise err.BadInput(f"score for {student} out of range: {score}")
        item = CourseworkItem(unit, campus, term, assessment, weight, dict(scores))
        self.state.put("coursework", f"{unit}|{campus}|{term}|{assessment}", item)
        return item

    def coursework_for_student(self, student: str, term: Term) -> list[tuple[str, str, float, float]]:
        self.student(student)
        rows = []
        for _, item in self.state.items("coursework"):
            if item.term == term and student in item.scores:
                rows.append((item.unit, item.assessment, item.weight, item.scores[student]))
        return sorted(rows)

    def class_list(self, actor: str, unit: str, campus: str, term: Term) -> list[tuple[str, str]]:
        self._require_staff(actor)
        self._offering(unit, campus, term)
        rows = []
        for e in self._enrollments_for_offering(unit, campus, term):
            if e.status in ("enrolled", "completed"):
                rows.append((e.student, self.student(e.student).name))
        return sorted(rows)

    def finalize_grades(self, actor: str, unit: str, campus: str, term: Term,
                        grades: dict[str, str]) -> int:
        offering = self._offering(unit, campus, term)
        actor_role = self.role_of(actor)
        if offering.teacher != actor and actor_role not in ADMIN_ROLES:
            raise err.NotAuthorized("only the offering's teacher or administration finalize grades")
        for student, grade in grades.items():
            if grade not in self.config.grade_points:
                raise err.InvalidGrade(f"unknown grade {grade!r}")
            enrollment = self.state.get("enrollment", enrollment_key(student, unit, campus, term))
            if enrollment is None or enrollment.status == "withdrawn":
                raise err.NotEnrolledStudent(f"{student} is not enrolled in {offering.key()}")
        count = 0
        for student, grade in grades.items():
            enrollment = self.state.get("enrollment", enrollment_key(student, unit, campus, term))
            enrollment.status = "completed"
            enrollment.final_grade = grade
            self.state.put("enrollment", enrollment_key(student, unit, campus, term), enrollment)
            count += 1
        return count

    def academic_history(self, student: str) -> tuple[list[tuple[str, Term, str, int]], Fraction | None]:
        self.student(student)
        completed = [
            e for e in self._enrollments_for_student(student) if e.status == "completed"
        ]
        completed.sort(key=lambda e: ((e.term.year, e.term.semester), e.unit))
        rows = []
        weighted = Fraction(0)
        credits = 0
        for e in completed:
            unit = self._unit(e.unit)
            rows.append((e.unit, e.term, e.final_grade, unit.credit_points))
            weighted += self.config.grade_points[e.final_grade] * unit.credit_points
            credits += unit.credit_points
        gpa = weighted / credits if credits else None
        return rows, gpa

    def program_requirements(self, student: str) -> list[tuple[str, bool]]:
        record = self.student(student)
        program = self._program(record.program)
        required = list(program.required_units)
        if record.major is not None:
            for major in program.majors:
                if major.name == record.major:
                    required += [u for u in major.extra_units if u not in required]
        passed = self.passed_units(student)
        return [(unit, unit in passed) for unit in required]

    # -- timetable ---------------------------------------------------------------

    def add_timetable_entry(self, actor: str, unit: str, campus: str, term: Term,
                            kind: str, day: str, start: str, end: str, room: str) -> TimetableEntry:
        self._require_admin(actor)
        self._offering(unit, campus, term)
        if kind not in TIMETABLE_KINDS:
            raise err.BadInput(f"kind must be one of {TIMETABLE_KINDS}")
        if day not in WEEKDAYS:
            raise err.BadInput(f"day must be one of {WEEKDAYS}")
        if not _TIME_RE.match(start) or not _TIME_RE.match(end):
            raise err.BadInput("times must be HH:MM")
        if start >= end:
            raise err.BadInput("start must be before end")
        if kind == "final_exam":
            key = f"{unit}|{campus}|{term}|final_exam"
        else:
            key = f"{unit}|{campus}|{term}|class|{day}|{start}"
        if self.state.get("timetable", key) is not None:
            raise err.DuplicateTimetable(f"timetable entry {key} already exists")
        entry = TimetableEntry(unit, campus, term, kind, day, start, end, room)
        self.state.put("timetable", key, entry)
        return entry

    def timetable(self, student: str, term: Term) -> list[TimetableEntry]:
        self.student(student)
        offerings = {
            (e.unit, e.campus)
            for e in self._enrollments_for_student(student)
            if e.term == term and e.status in ("enrolled", "completed")
        }
        entries = [
            entry
            for _, entry in self.state.items("timetable")
            if entry.term == term and (entry.unit, entry.campus) in offerings
        ]
        entries.sort(key=lambda t: (WEEKDAYS.index(t.day), t.start, t.unit))
        return entries

    # -- graduation -------------------------------------------------------------

    def graduation_eligibility(self, student: str) -> tuple[bool, list[str]]:
        requirements = self.program_requirements(student)
        missing = [unit for unit, done in requirements if not done]
        return (not missing, missing)

    def apply_graduation(self, student: str) -> GraduationApplication:
        record = self.student(student)
        if record.status != "active":
            raise err.NotAuthorized(f"student {student} has status {record.status}, not active")
        eligible, _ = self.graduation_eligibility(student)
        app_id = self._next_id("G")
        application = GraduationApplication(app_id, student, "pending", eligible)
        self.state.put("graduation", app_id, application)
        return application

    def get_graduation(self, app_id: str) -> GraduationApplication:
        application = self.state.get("graduation", app_id)
        if application is None:
            raise err.UnknownRequest(f"no graduation application {app_id!r}")
        return application

    def list_graduations(self, status: str | None = None) -> list[GraduationApplication]:
        apps = [g for _, g in self.state.items("graduation")]
        if status is not None:
            apps = [g for g in apps if g.status == status]
        return apps

    def decide_graduation(self, actor: str, app_id: str, decision: str) -> GraduationApplication:
        self._require_admin(actor)
        application = self.get_graduation(app_id)
        if application.status != "pending":
            raise err.AlreadyDecided(f"graduation application {app_id} is {application.status}")
        if decision not in ("approve", "reject"):
            raise err.BadInput(f"decision must be approve or reject, got {decision!r}")
        if decision == "reject":
            application.status = "rejected"
            application.decided_by = actor
            self.state.put("graduation", app_id, application)
            return application
        eligible, missing = self.graduation_eligibility(application.student)
        if not eligible:
            raise err.NotEligible(f"missing required units: {', '.join(missing)}")
        application.status = "approved"
        application.decided_by = actor
        application.eligibility_snapshot = True
        student = self.student(application.student)
        student.status = "graduated"
        self.state.put("student", student.id, student)
        self.state.put("graduation", app_id, application)
        return application

    # -- program change ------------------------------------------------------------

    def request_program_change(self, student: str, new_program: str,
                               new_major: str | None = None) -> ProgramChangeRequest:
        record = self.student(student)
        program = self._program(new_program)
        self._check_major(program, new_major)
        req_id = self._next_id("P")
        request = ProgramChangeRequest(req_id, record.id, new_program, new_major)
        self.state.put("progchange", req_id, request)
        return request

    def get_program_change(self, req_id: str) -> ProgramChangeRequest:
        request = self.state.get("progchange", req_id)
        if request is None:
            raise err.UnknownRequest(f"no program change request {req_id!r}")
        return request

    def list_program_changes(self, status: str | None = None) -> list[ProgramChangeRequest]:
        requests = [r for _, r in self.state.items("progchange")]
        if status is not None:
            requests = [r for r in requests if r.status == status]
        return requests

    def decide_program_change(self, actor: str, req_id: str, decision: str) -> ProgramChangeRequest:
        self._require_admin(actor)
        request = self.get_program_change(req_id)
        if request.status != "pending":
            raise err.AlreadyDecided(f"program change {req_id} is {request.status}")
        if decision not in ("approve", "reject"):
            raise err.BadInput(f"decision must be approve or reject, got {decision!r}")
        if decision == "reject":
            request.status = "rejected"
            self.state.put("progchange", req_id, request)
            return request
        student = self.student(request.student)
        student.program = request.new_program
        student.major = request.new_major
        request.status = "approved"
        self.state.put("student", student.id, student)
        self.state.put("progchange", req_id, request)
        return request

    # -- finance ------------------------------------------------------------------

    def _invoice_line(self, student: str, term: Term, description: str, amount_cents: int) -> Invoice:
        invoice_id = f"INV-{student}-{term}"
        invoice = self.state.get("invoice", invoice_id)
        if invoice is None:
            invoice = Invoice(invoice_id, student, term)
        invoice.lines.append(LineItem(description, amount_cents))
        # a refund on an already-paid invoice pays the student back so the
        # ledger invariant 0 <= paid <= total keeps holding
        if invoice.paid_cents > invoice.total_cents:
            excess = invoice.paid_cents - invoice.total_cents
            self._record_payment(invoice, -excess, "refund")
        self.state.put("invoice", invoice_id, invoice)
        return invoice

    def _record_payment(self, invoice: Invoice, amount_cents: int, card_ref: str) -> Payment:
        pay_id = self._next_id("PAY")
        timestamp = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(self.clock()))
        payment = Payment(pay_id, invoice.id, amount_cents, card_ref, timestamp)
        invoice.paid_cents += amount_cents
        self.state.put("payment", f"{invoice.id}|{pay_id}", payment)
        return payment

    def invoices(self, student: str) -> list[Invoice]:
        self.student(student)
        found = [inv for _, inv in self.state.items("invoice") if inv.student == student]
        found.sort(key=lambda inv: (inv.term.year, inv.term.semester))
        return found

    def pay_invoice(self, actor: str, invoice_id: str, amount_cents: int, card_ref: str) -> Payment:
        invoice = self.state.get("invoice", invoice_id)
        if invoice is None:
            raise err.UnknownInvoice(f"no invoice {invoice_id!r}")
        if invoice.student != actor:
            raise err.NotYours(f"invoice {invoice_id} does not belong to {actor}")
        if amount_cents <= 0:
            raise err.BadInput("payment amount must be positive")
        outstanding = invoice.total_cents - invoice.paid_cents
        if amount_cents > outstanding:
            raise err.Overpayment(f"amount {amount_cents} exceeds outstanding {outstanding}")
        if re.search(self.config.card_decline_pattern, card_ref):
            raise err.GatewayDeclined(f"card {card_ref!r} was declined")
        payment = self._record_payment(invoice, amount_cents, card_ref)
        self.state.put("invoice", invoice_id, invoice)
        return payment

    def payments_for(self, invoice_id: str) -> list[Payment]:
        return [p for _, p in self.state.items("payment", prefix=f"{invoice_id}|")]

    # -- reporting & detail views -----------------------------------------------------

    def report(self, actor: str, kind: str, term: Term) -> ReportTable:
        self._require_admin(actor)
        if kind == "enrollment_counts":
            counts: dict[tuple[str, str], int] = {}
            for _, e in self.state.items("enrollment"):
                if e.term == term and e.status != "withdrawn":
                    counts[(e.unit, e.campus)] = counts.get((e.unit, e.campus), 0) + 1
            rows = [[unit, campus, str(n)] for (unit, campus), n in sorted(counts.items())]
            return ReportTable(kind, term, ["unit", "campus", "enrolled"], rows)
        if kind == "pass_rates":
            totals: dict[str, int] = {}
            passed: dict[str, int] = {}
            for _, e in self.state.items("enrollment"):
                if e.term == term and e.status == "completed":
                    totals[e.unit] = totals.get(e.unit, 0) + 1
                    if e.final_grade is not None and self.config.is_passing(e.final_grade):
                        passed[e.unit] = passed.get(e.unit, 0) + 1
            rows = [
                [unit, str(totals[unit]), f"{passed.get(unit, 0) / totals[unit]:.4f}"]
                for unit in sorted(totals)
            ]
            return ReportTable(kind, term, ["unit", "completed", "pass_rate"], rows)
        if kind == "application_funnel":
            pending = approved = rejected = 0
            for _, a in self.state.items("application"):
                if a.status == "pending":
                    pending += 1
                elif a.decided_term == term:
                    if a.status == "approved":
                        approved += 1
                    else:
                        rejected += 1
            rows = [["pending", str(pending)], ["approved", str(approved)], ["rejected", str(rejected)]]
            return ReportTable(kind, term, ["status", "count"], rows)
        raise err.BadInput(f"unknown report kind {kind!r}")

    def student_details(self, actor: str, student: str):
        self._require_staff(actor)
        record = self.student(student)
        rows, gpa = self.academic_history(student)
        return record, rows, gpa
