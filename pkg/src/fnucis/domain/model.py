"""Domain entities and configuration.

Everything here is storage- and transport-agnostic: plain dataclasses with
string identifiers, moved in and out of whatever state handle the caller
supplies. Money is integer cents throughout; grade points are exact
fractions so GPA arithmetic never drifts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering

ACADEMIC_ROLES = ("tutor", "assistant_lecturer", "lecturer", "senior_lecturer", "professor")
ADMIN_ROLES = ("dean", "head_of_department", "academic_services")
ALL_STAFF_ROLES = ACADEMIC_ROLES + ADMIN_ROLES
STUDENT_ROLE = "student"
APPLICANT_ROLE = "applicant"

STUDENT_STATUSES = ("applicant", "admitted", "active", "graduated", "withdrawn")
DECISION_STATUSES = ("pending", "approved", "rejected")
ENROLLMENT_STATUSES = ("enrolled", "withdrawn", "completed")
TIMETABLE_KINDS = ("class", "final_exam")
WEEKDAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")

DEFAULT_GRADE_POINTS: dict[str, Fraction] = {
    "A+": Fraction(9, 2),
    "A": Fraction(4),
    "B+": Fraction(7, 2),
    "B": Fraction(3),
    "C+": Fraction(5, 2),
    "C": Fraction(2),
    "D": Fraction(1),
    "E": Fraction(0),
}
DEFAULT_PASSING_MIN = Fraction(2)  # C or better


@total_ordering
@dataclass(frozen=True)
class Term:
    year: int
    semester: int  # 1 or 2

    def __post_init__(self):
        if self.semester not in (1, 2):
            raise ValueError(f"semester must be 1 or 2, got {self.semester}")

    def __lt__(self, other: "Term") -> bool:
        return (self.year, self.semester) < (other.year, other.semester)

    def __str__(self) -> str:
        return f"{self.year}-{self.semester}"

    @classmethod
    def parse(cls, text: str) -> "Term":
        year, _, semester = text.partition("-")
        return cls(int(year), int(semester))


@dataclass
class Contact:
    postal: str = ""
    residential: str = ""
    home_phone: str = ""
    mobile_phone: str = ""


@dataclass
class StudentRecord:
    id: str
    name: str
    contact: Contact
    program: str
    major: str | None = None
    status: str = "admitted"


@dataclass
class TeachingAssignment:
    unit: str
    campus: str
    term: Term


@dataclass
class StaffRecord:
    id: str
    name: str
    contact: Contact
    role: str
    teaching_assignments: list[TeachingAssignment] = field(default_factory=list)


@dataclass
class Major:
    name: str
    extra_units: list[str] = field(default_factory=list)


@dataclass
class Program:
    id: str
    title: str
    required_units: list[str]
    majors: list[Major] = field(default_factory=list)


@dataclass
class Unit:
    code: str
    title: str
    prerequisites: list[str] = field(default_factory=list)
    credit_points: int = 15


@dataclass
class UnitOffering:
    unit: str
    campus: str
    term: Term
    capacity: int
    active: bool = True
    teacher: str | None = None

    def key(self) -> str:
        return offering_key(self.unit, self.campus, self.term)


@dataclass
class Enrollment:
    student: str
    unit: str
    campus: str
    term: Term
    status: str = "enrolled"
    override_by: str | None = None
    final_grade: str | None = None


@dataclass
class CourseworkItem:
    unit: str
    campus: str
    term: Term
    assessment: str
    weight: float
    scores: dict[str, float] = field(default_factory=dict)


@dataclass
class Application:
    id: str
    name: str
    contact: Contact
    program: str
    status: str = "pending"
    decided_by: str | None = None
    decided_term: Term | None = None
    student: str | None = None  # set on approval


@dataclass
class GraduationApplication:
    id: str
    student: str
    status: str = "pending"
    eligibility_snapshot: bool = False
    decided_by: str | None = None


@dataclass
class ProgramChangeRequest:
    id: str
    student: str
    new_program: str
    new_major: str | None = None
    status: str = "pending"


@dataclass
class LineItem:
    description: str
    amount_cents: int


@dataclass
class Invoice:
    id: str
    student: str
    term: Term
    lines: list[LineItem] = field(default_factory=list)
    paid_cents: int = 0

    @property
    def total_cents(self) -> int:
        return sum(line.amount_cents for line in self.lines)


@dataclass
class Payment:
    id: str
    invoice: str
    amount_cents: int
    card_ref: str
    timestamp: str


@dataclass
class TimetableEntry:
    unit: str
    campus: str
    term: Term
    kind: str  # class | final_exam
    day: str
    start: str  # HH:MM
    end: str
    room: str


@dataclass
class Credential:
    username: str
    person: str
    role: str
    salt: bytes
    pw_hash: bytes
    iterations: int
    active: bool


@dataclass
class DomainConfig:
    current_term: Term
    fee_cents_per_credit: int = 4000
    grade_points: dict[str, Fraction] = field(default_factory=lambda: dict(DEFAULT_GRADE_POINTS))
    passing_min: Fraction = DEFAULT_PASSING_MIN
    card_decline_pattern: str = "DECLINE"
    default_capacity: int = 100

    def is_passing(self, grade: str) -> bool:
        return self.grade_points[grade] >= self.passing_min


def offering_key(unit: str, campus: str, term: Term) -> str:
    return f"{unit}|{campus}|{term}"


def enrollment_key(student: str, unit: str, campus: str, term: Term) -> str:
    return f"{student}|{unit}|{campus}|{term}"
