"""Business entities and rules: admissions, enrollment, records, finance, reports."""

from fnucis.domain.model import (
    ACADEMIC_ROLES,
    ADMIN_ROLES,
    ALL_STAFF_ROLES,
    Application,
    Contact,
    CourseworkItem,
    Credential,
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
    Term,
    TimetableEntry,
    Unit,
    UnitOffering,
)
from fnucis.domain.errors import DomainError
from fnucis.domain.state import EntityState, MemoryState
from fnucis.domain.ops import CampusOps
