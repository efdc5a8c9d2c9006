"""Domain failures, each carrying the stable error code shared across tiers."""

from __future__ import annotations


class DomainError(Exception):
    code = "domain-error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class UnknownProgram(DomainError):
    code = "unknown-program"


class UnknownPerson(DomainError):
    code = "unknown-person"


class UnknownUnit(DomainError):
    code = "unknown-unit"


class UnknownOffering(DomainError):
    code = "unknown-offering"


class UnknownApplication(DomainError):
    code = "unknown-application"


class UnknownRequest(DomainError):
    code = "unknown-request"


class UnknownInvoice(DomainError):
    code = "unknown-invoice"


class UnknownMajor(DomainError):
    code = "unknown-major"


class NotAuthorized(DomainError):
    code = "not-authorized"


class AlreadyDecided(DomainError):
    code = "already-decided"


class DuplicateOffering(DomainError):
    code = "duplicate-offering"


class DuplicateEnrollment(DomainError):
    code = "duplicate-enrollment"


class DuplicatePerson(DomainError):
    code = "duplicate-person"


class DuplicateProgram(DomainError):
    code = "duplicate-program"


class DuplicateUnit(DomainError):
    code = "duplicate-unit"


class DuplicateTimetable(DomainError):
    code = "duplicate-timetable"


class OfferingInactive(DomainError):
    code = "offering-inactive"


class PrerequisiteUnmet(DomainError):
    code = "prereq-unmet"


class CapacityFull(DomainError):
    code = "capacity-full"


class NotEnrolled(DomainError):
    code = "not-enrolled"


class AlreadyCompleted(DomainError):
    code = "already-completed"


class WeightOverflow(DomainError):
    code = "weight-overflow"


class NotEnrolledStudent(DomainError):
    code = "not-enrolled-student"


class NotEligible(DomainError):
    code = "not-eligible"


class NotYours(DomainError):
    code = "not-yours"


class Overpayment(DomainError):
    code = "overpayment"


class GatewayDeclined(DomainError):
    code = "gateway-declined"


class InvalidGrade(DomainError):
    code = "invalid-grade"


class BadInput(DomainError):
    code = "bad-arguments"
