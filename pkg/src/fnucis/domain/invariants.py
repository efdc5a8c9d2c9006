"""Whole-state invariant audit.

Recomputes every quantitative rule over a state handle and returns the
list of violations (empty = clean). Used by the post-benchmark store audit
and by the concurrency suites. Creation-time rules that cannot be verified
after the fact (prerequisites held at enrollment time) are covered by the
live property tests instead.
"""

from __future__ import annotations

from fnucis.domain.model import (
    DECISION_STATUSES,
    ENROLLMENT_STATUSES,
    STUDENT_STATUSES,
    DomainConfig,
)
from fnucis.domain.state import EntityState


def check_invariants(state: EntityState, config: DomainConfig) -> list[str]:
    problems: list[str] = []
    report = problems.append

    offerings = {key: o for key, o in state.items("offering")}
    enrollments = [e for _, e in state.items("enrollment")]
    students = {key: s for key, s in state.items("student")}

    # capacity and enrollment shape
    enrolled_per_offering: dict[str, int] = {}
    seen_active: set[tuple[str, str, str]] = set()
    for e in enrollments:
        okey = f"{e.unit}|{e.campus}|{e.term}"
        if e.status not in ENROLLMENT_STATUSES:
            report(f"enrollment {e.student}/{okey}: bad status {e.status!r}")
        if (e.final_grade is not None) != (e.status == "completed"):
            report(f"enrollment {e.student}/{okey}: grade/status mismatch ({e.status}, {e.final_grade})")
        if e.status == "completed" and e.final_grade not in config.grade_points:
            report(f"enrollment {e.student}/{okey}: unknown grade {e.final_grade!r}")
        if okey not in offerings:
            report(f"enrollment {e.student}/{okey}: offering missing")
        if e.student not in students:
            report(f"enrollment {e.student}/{okey}: student missing")
        if e.status == "enrolled":
            enrolled_per_offering[okey] = enrolled_per_offering.get(okey, 0) + 1
        if e.status != "withdrawn":
            triple = (e.student, e.unit, str(e.term))
            if triple in seen_active:
                report(f"enrollment {triple}: duplicate non-withdrawn enrollment")
            seen_active.add(triple)
    for okey, count in enrolled_per_offering.items():
        offering = offerings.get(okey)
        if offering is not None and count > offering.capacity:
            report(f"offering {okey}: {count} enrolled exceeds capacity {offering.capacity}")

    # coursework weights and score ranges
    weight_sums: dict[str, float] = {}
    for _, item in state.items("coursework"):
        okey = f"{item.unit}|{item.campus}|{item.term}"
        weight_sums[okey] = weight_sums.get(okey, 0.0) + item.weight
        for student, score in item.scores.items():
            if not 0 <= score <= 100:
                report(f"coursework {okey}/{item.assessment}: score {score} for {student} out of range")
    for okey, total in weight_sums.items():
        if total > 100 + 1e-9:
            report(f"coursework {okey}: weights sum to {total}")

    # one-shot decisions
    for kind in ("application", "graduation", "progchange"):
        for key, entity in state.items(kind):
            if entity.status not in DECISION_STATUSES:
                report(f"{kind} {key}: bad status {entity.status!r}")

    # graduation coupling
    approved_grads = {g.student for _, g in state.items("graduation") if g.status == "approved"}
    for _, g in state.items("graduation"):
        if g.status == "approved" and not g.eligibility_snapshot:
            report(f"graduation {g.id}: approved without eligibility snapshot")
    for key, student in students.items():
        if student.status not in STUDENT_STATUSES:
            report(f"student {key}: bad status {student.status!r}")
        if student.status == "graduated" and key not in approved_grads:
            report(f"student {key}: graduated without an approved graduation application")

    # invoice ledger
    payments_by_invoice: dict[str, int] = {}
    for _, p in state.items("payment"):
        payments_by_invoice[p.invoice] = payments_by_invoice.get(p.invoice, 0) + p.amount_cents
    for key, invoice in state.items("invoice"):
        total = invoice.total_cents
        if not 0 <= invoice.paid_cents <= total:
            report(f"invoice {key}: paid {invoice.paid_cents} outside [0, {total}]")
        if invoice.paid_cents != payments_by_invoice.get(key, 0):
            report(f"invoice {key}: paid {invoice.paid_cents} != payment sum {payments_by_invoice.get(key, 0)}")

    return problems
