import random
from fractions import Fraction

import pytest

from fnucis.domain import errors as err
from fnucis.domain.invariants import check_invariants
from fnucis.domain.model import Contact, DomainConfig, Major, StaffRecord, Term
from fnucis.domain.ops import CampusOps
from fnucis.domain.state import MemoryState

TERM = Term(2024, 1)
NEXT_TERM = Term(2024, 2)


def make_campus() -> CampusOps:
    state = MemoryState()
    ops = CampusOps(state, DomainConfig(current_term=TERM))
    # first administrator is planted directly; everything else goes through ops
    state.put("staff", "ADM1", StaffRecord("ADM1", "Ana Admin", Contact(), "academic_services"))
    ops.add_staff("ADM1", "HOD1", "Hari Hod", "head_of_department")
    ops.add_staff("ADM1", "DEAN1", "Dia Dean", "dean")
    ops.add_staff("ADM1", "LEC1", "Lata Lecturer", "lecturer")
    ops.add_staff("ADM1", "TUT1", "Timo Tutor", "tutor")
    ops.add_unit("ADM1", "CS100", "Computing Basics", [], 15)
    ops.add_unit("ADM1", "CS101", "Programming", ["CS100"], 15)
    ops.add_unit("ADM1", "CS200", "Systems", ["CS101"], 20)
    ops.add_unit("ADM1", "HS100", "History", [], 10)
    ops.add_program("ADM1", "BSC", "Bachelor of Science", ["CS100", "CS101"],
                    [Major("Systems", ["CS200"])])
    ops.add_program("ADM1", "BA", "Bachelor of Arts", ["HS100"])
    ops.register_student("ADM1", "S900", "Sela", "BSC")
    ops.register_student("ADM1", "S901", "Sami", "BSC", major="Systems")
    ops.register_student("ADM1", "S902", "Sina", "BA")
    ops.activate_offering("HOD1", "CS100", "Suva", TERM, 100, "LEC1")
    ops.activate_offering("HOD1", "CS101", "Suva", TERM, 100, "LEC1")
    ops.activate_offering("HOD1", "HS100", "Suva", TERM, 1, "TUT1")
    return ops


@pytest.fixture()
def campus() -> CampusOps:
    return make_campus()


def complete_unit(campus, student, unit, grade, term=TERM, campus_name="Suva", teacher="LEC1"):
    if campus.state.get("offering", f"{unit}|{campus_name}|{term}") is None:
        campus.activate_offering("HOD1", unit, campus_name, term, 100, teacher)
    campus.enroll(teacher, student, unit, campus_name, term)
    campus.finalize_grades(teacher, unit, campus_name, term, {student: grade})


class TestAdmissions:
    def test_submit_application_pending(self, campus):
        app = campus.submit_application("Alo", Contact(mobile_phone="555"), "BSC")
        assert app.status == "pending" and app.id.startswith("A")

    def test_submit_unknown_program(self, campus):
        with pytest.raises(err.UnknownProgram):
            campus.submit_application("Alo", Contact(), "NOPE")

    def test_double_submission_allowed(self, campus):
        a = campus.submit_application("Alo", Contact(), "BSC")
        b = campus.submit_application("Alo", Contact(), "BSC")
        assert a.id != b.id

    def test_approve_creates_admitted_student(self, campus):
        app = campus.submit_application("Alo", Contact(), "BSC")
        decided = campus.decide_application("ADM1", app.id, "approve")
        assert decided.status == "approved"
        student = campus.student(decided.student)
        assert student.status == "admitted" and student.program == "BSC"

    def test_reject_only_flips_status(self, campus):
        app = campus.submit_application("Alo", Contact(), "BSC")
        decided = campus.decide_application("ADM1", app.id, "reject")
        assert decided.status == "rejected" and decided.student is None

    def test_academic_staff_cannot_decide(self, campus):
        app = campus.submit_application("Alo", Contact(), "BSC")
        with pytest.raises(err.NotAuthorized):
            campus.decide_application("LEC1", app.id, "approve")

    def test_decide_twice(self, campus):
        app = campus.submit_application("Alo", Contact(), "BSC")
        campus.decide_application("ADM1", app.id, "approve")
        with pytest.raises(err.AlreadyDecided):
            campus.decide_application("ADM1", app.id, "approve")


class TestProfiles:
    def test_student_updates_own_profile(self, campus):
        campus.update_profile("S900", "S900", Contact(mobile_phone="999"))
        assert campus.get_profile("S900", "S900").contact.mobile_phone == "999"

    def test_other_fields_untouched(self, campus):
        before = campus.student("S900")
        campus.update_profile("S900", "S900", Contact(postal="Box 1"))
        after = campus.student("S900")
        assert (after.id, after.program, after.status) == (before.id, before.program, before.status)

    def test_student_cannot_update_other(self, campus):
        with pytest.raises(err.NotAuthorized):
            campus.update_profile("S900", "S901", Contact())

    def test_admin_updates_any(self, campus):
        campus.update_profile("ADM1", "S901", Contact(home_phone="123"))
        assert campus.student("S901").contact.home_phone == "123"

    def test_unknown_target(self, campus):
        with pytest.raises(err.UnknownPerson):
            campus.update_profile("ADM1", "GHOST", Contact())

    def test_student_cannot_view_other_profile(self, campus):
        with pytest.raises(err.NotAuthorized):
            campus.get_profile("S900", "S901")


class TestOfferings:
    def test_hod_activates(self, campus):
        offering = campus.activate_offering("HOD1", "CS100", "Labasa", TERM, 30, "LEC1")
        assert offering.active and offering.capacity == 30

    def test_duplicate_offering(self, campus):
        with pytest.raises(err.DuplicateOffering):
            campus.activate_offering("HOD1", "CS100", "Suva", TERM, 10)

    def test_dean_cannot_activate(self, campus):
        with pytest.raises(err.NotAuthorized):
            campus.activate_offering("DEAN1", "CS100", "Labasa", TERM, 10)

    def test_unknown_unit(self, campus):
        with pytest.raises(err.UnknownUnit):
            campus.activate_offering("HOD1", "XX999", "Suva", TERM, 10)

    def test_activation_records_teaching_assignment(self, campus):
        campus.activate_offering("HOD1", "CS100", "Labasa", TERM, 30, "LEC1")
        assignments = campus.staff("LEC1").teaching_assignments
        assert any(a.unit == "CS100" and a.campus == "Labasa" for a in assignments)


class TestEnrollment:
    def test_student_enrolls_prereq_free(self, campus):
        e = campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        assert e.status == "enrolled" and e.override_by is None
        assert campus.student("S900").status == "active"

    def test_prereq_unmet_then_staff_override(self, campus):
        with pytest.raises(err.PrerequisiteUnmet):
            campus.enroll("S900", "S900", "CS101", "Suva", TERM)
        e = campus.enroll("LEC1", "S900", "CS101", "Suva", TERM)
        assert e.override_by == "LEC1"

    def test_prereq_satisfied_after_pass(self, campus):
        complete_unit(campus, "S900", "CS100", "C")
        e = campus.enroll("S900", "S900", "CS101", "Suva", NEXT_TERM) if False else None
        # same term re-offering: enroll into the existing CS101 offering
        e = campus.enroll("S900", "S900", "CS101", "Suva", TERM)
        assert e.override_by is None

    def test_failing_grade_does_not_satisfy_prereq(self, campus):
        complete_unit(campus, "S900", "CS100", "E")
        with pytest.raises(err.PrerequisiteUnmet):
            campus.enroll("S900", "S900", "CS101", "Suva", TERM)

    def test_capacity_full(self, campus):
        campus.enroll("S902", "S902", "HS100", "Suva", TERM)  # capacity 1
        campus.register_student("ADM1", "S903", "Solo", "BA")
        with pytest.raises(err.CapacityFull):
            campus.enroll("S903", "S903", "HS100", "Suva", TERM)

    def test_staff_override_does_not_bypass_capacity(self, campus):
        campus.enroll("S902", "S902", "HS100", "Suva", TERM)
        campus.register_student("ADM1", "S903", "Solo", "BA")
        with pytest.raises(err.CapacityFull):
            campus.enroll("TUT1", "S903", "HS100", "Suva", TERM)

    def test_duplicate_enrollment(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        with pytest.raises(err.DuplicateEnrollment):
            campus.enroll("S900", "S900", "CS100", "Suva", TERM)

    def test_admin_cannot_enroll(self, campus):
        with pytest.raises(err.NotAuthorized):
            campus.enroll("ADM1", "S900", "CS100", "Suva", TERM)

    def test_student_cannot_enroll_other(self, campus):
        with pytest.raises(err.NotAuthorized):
            campus.enroll("S901", "S900", "CS100", "Suva", TERM)

    def test_unknown_offering(self, campus):
        with pytest.raises(err.UnknownOffering):
            campus.enroll("S900", "S900", "CS100", "Nadi", TERM)

    def test_inactive_offering(self, campus):
        offering = campus.state.get("offering", f"CS100|Suva|{TERM}")
        offering.active = False
        campus.state.put("offering", f"CS100|Suva|{TERM}", offering)
        with pytest.raises(err.OfferingInactive):
            campus.enroll("S900", "S900", "CS100", "Suva", TERM)

    def test_withdraw_then_reenroll(self, campus):
        campus.enroll("S902", "S902", "HS100", "Suva", TERM)
        campus.withdraw("S902", "S902", "HS100", "Suva", TERM)
        campus.register_student("ADM1", "S903", "Solo", "BA")
        campus.enroll("S903", "S903", "HS100", "Suva", TERM)  # slot released

    def test_withdraw_twice(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        campus.withdraw("S900", "S900", "CS100", "Suva", TERM)
        with pytest.raises(err.NotEnrolled):
            campus.withdraw("S900", "S900", "CS100", "Suva", TERM)

    def test_withdraw_completed(self, campus):
        complete_unit(campus, "S900", "CS100", "B")
        with pytest.raises(err.AlreadyCompleted):
            campus.withdraw("S900", "S900", "CS100", "Suva", TERM)


class TestCoursework:
    def test_teacher_submits(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        campus.enroll("S901", "S901", "CS100", "Suva", TERM)
        item = campus.submit_coursework("LEC1", "CS100", "Suva", TERM, "Midterm", 30,
                                        {"S900": 78, "S901": 65})
        assert item.weight == 30

    def test_weight_overflow(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        campus.submit_coursework("LEC1", "CS100", "Suva", TERM, "Midterm", 40, {"S900": 70})
        with pytest.raises(err.WeightOverflow):
            campus.submit_coursework("LEC1", "CS100", "Suva", TERM, "Final", 70, {"S900": 70})

    def test_resubmission_replaces(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        campus.submit_coursework("LEC1", "CS100", "Suva", TERM, "Midterm", 40, {"S900": 70})
        campus.submit_coursework("LEC1", "CS100", "Suva", TERM, "Midterm", 45, {"S900": 72})
        rows = campus.coursework_for_student("S900", TERM)
        assert rows == [("CS100", "Midterm", 45, 72)]

    def test_non_teacher_rejected(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        with pytest.raises(err.NotAuthorized):
            campus.submit_coursework("TUT1", "CS100", "Suva", TERM, "Quiz", 10, {"S900": 50})

    def test_score_for_unenrolled_student(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        with pytest.raises(err.NotEnrolledStudent):
            campus.submit_coursework("LEC1", "CS100", "Suva", TERM, "Quiz", 10, {"S901": 50})

    def test_student_view_filters_term(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        campus.submit_coursework("LEC1", "CS100", "Suva", TERM, "Midterm", 30, {"S900": 80})
        assert campus.coursework_for_student("S900", NEXT_TERM) == []
        assert len(campus.coursework_for_student("S900", TERM)) == 1

    def test_empty_view(self, campus):
        assert campus.coursework_for_student("S900", TERM) == []


class TestClassListAndGrades:
    def test_class_list_filters_withdrawn(self, campus):
        for s in ("S900", "S901"):
            campus.enroll(s, s, "CS100", "Suva", TERM)
        campus.register_student("ADM1", "S903", "Solo", "BSC")
        campus.enroll("S903", "S903", "CS100", "Suva", TERM)
        campus.withdraw("S903", "S903", "CS100", "Suva", TERM)
        rows = campus.class_list("LEC1", "CS100", "Suva", TERM)
        assert [r[0] for r in rows] == ["S900", "S901"]

    def test_student_cannot_view_class_list(self, campus):
        with pytest.raises(err.NotAuthorized):
            campus.class_list("S900", "CS100", "Suva", TERM)

    def test_finalize_and_overwrite(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        assert campus.finalize_grades("LEC1", "CS100", "Suva", TERM, {"S900": "B+"}) == 1
        history, _ = campus.academic_history("S900")
        assert history[0][2] == "B+"
        campus.finalize_grades("LEC1", "CS100", "Suva", TERM, {"S900": "A"})
        history, _ = campus.academic_history("S900")
        assert history[0][2] == "A"

    def test_grade_withdrawn_student(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        campus.withdraw("S900", "S900", "CS100", "Suva", TERM)
        with pytest.raises(err.NotEnrolledStudent):
            campus.finalize_grades("LEC1", "CS100", "Suva", TERM, {"S900": "A"})

    def test_admin_may_finalize(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        assert campus.finalize_grades("ADM1", "CS100", "Suva", TERM, {"S900": "C"}) == 1

    def test_invalid_grade(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        with pytest.raises(err.InvalidGrade):
            campus.finalize_grades("LEC1", "CS100", "Suva", TERM, {"S900": "Z"})


class TestHistoryAndGpa:
    def test_empty_history(self, campus):
        rows, gpa = campus.academic_history("S900")
        assert rows == [] and gpa is None

    def test_single_unit_gpa(self, campus):
        complete_unit(campus, "S900", "CS100", "A+")
        rows, gpa = campus.academic_history("S900")
        assert rows == [("CS100", TERM, "A+", 15)]
        assert gpa == Fraction(9, 2)

    def test_mixed_fixture_matches_hand_computed_mean(self, campus):
        # grades and credits chosen by hand:
        #   CS100 15cr A  (4.0) -> 60
        #   CS101 15cr B+ (3.5) -> 52.5
        #   CS200 20cr C  (2.0) -> 40
        #   HS100 10cr E  (0.0) -> 0
        #   MA100 5cr  A+ (4.5) -> 22.5
        # sum = 175 points over 65 credits -> 35/13
        campus.add_unit("ADM1", "MA100", "Calculus", [], 5)
        complete_unit(campus, "S900", "CS100", "A")
        complete_unit(campus, "S900", "CS101", "B+", teacher="LEC1")
        campus.activate_offering("HOD1", "CS200", "Suva", TERM, 100, "LEC1")
        campus.enroll("LEC1", "S900", "CS200", "Suva", TERM)  # override, prereq just graded
        campus.finalize_grades("LEC1", "CS200", "Suva", TERM, {"S900": "C"})
        complete_unit(campus, "S900", "HS100", "E", teacher="TUT1")
        complete_unit(campus, "S900", "MA100", "A+")
        rows, gpa = campus.academic_history("S900")
        assert len(rows) == 5
        assert gpa == Fraction(175 * 2, 65 * 2) == Fraction(35, 13)

    def test_history_sorted_by_term_then_unit(self, campus):
        campus.activate_offering("HOD1", "CS100", "Suva", NEXT_TERM, 100, "LEC1")
        campus.enroll("LEC1", "S900", "CS100", "Suva", NEXT_TERM)
        campus.finalize_grades("LEC1", "CS100", "Suva", NEXT_TERM, {"S900": "A"})
        complete_unit(campus, "S900", "HS100", "B", teacher="TUT1")
        rows, _ = campus.academic_history("S900")
        assert [(r[0], r[1]) for r in rows] == [("HS100", TERM), ("CS100", NEXT_TERM)]


class TestRequirements:
    def test_all_uncompleted_for_new_student(self, campus):
        rows = campus.program_requirements("S900")
        assert rows == [("CS100", False), ("CS101", False)]

    def test_completed_flag_set(self, campus):
        complete_unit(campus, "S900", "CS100", "C")
        assert ("CS100", True) in campus.program_requirements("S900")

    def test_major_adds_units(self, campus):
        rows = campus.program_requirements("S901")
        assert [r[0] for r in rows] == ["CS100", "CS101", "CS200"]

    def test_failing_grade_not_completed(self, campus):
        complete_unit(campus, "S900", "CS100", "D")  # D is below passing (C)
        assert ("CS100", False) in campus.program_requirements("S900")


class TestTimetable:
    def seed_entries(self, campus):
        campus.add_timetable_entry("ADM1", "CS100", "Suva", TERM, "class", "Mon", "09:00", "11:00", "R101")
        campus.add_timetable_entry("ADM1", "CS100", "Suva", TERM, "class", "Wed", "09:00", "10:00", "R101")
        campus.add_timetable_entry("ADM1", "CS100", "Suva", TERM, "final_exam", "Fri", "14:00", "16:00", "Hall A")

    def test_entries_for_enrolled_student(self, campus):
        self.seed_entries(campus)
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        entries = campus.timetable("S900", TERM)
        assert [(e.day, e.kind) for e in entries] == [("Mon", "class"), ("Wed", "class"), ("Fri", "final_exam")]

    def test_empty_when_not_enrolled(self, campus):
        self.seed_entries(campus)
        assert campus.timetable("S900", TERM) == []

    def test_term_filter(self, campus):
        self.seed_entries(campus)
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        assert campus.timetable("S900", NEXT_TERM) == []

    def test_second_final_exam_rejected(self, campus):
        self.seed_entries(campus)
        with pytest.raises(err.DuplicateTimetable):
            campus.add_timetable_entry("ADM1", "CS100", "Suva", TERM, "final_exam", "Sat", "09:00", "10:00", "B")

    def test_bad_times_rejected(self, campus):
        with pytest.raises(err.BadInput):
            campus.add_timetable_entry("ADM1", "CS100", "Suva", TERM, "class", "Mon", "11:00", "09:00", "R1")


class TestGraduation:
    def make_eligible(self, campus, student="S900"):
        complete_unit(campus, student, "CS100", "A")
        campus.enroll("LEC1", student, "CS101", "Suva", TERM)
        campus.finalize_grades("LEC1", "CS101", "Suva", TERM, {student: "B"})

    def test_eligibility_both_ways(self, campus):
        assert campus.graduation_eligibility("S900") == (False, ["CS100", "CS101"])
        self.make_eligible(campus)
        assert campus.graduation_eligibility("S900") == (True, [])

    def test_failing_required_unit_blocks(self, campus):
        complete_unit(campus, "S900", "CS100", "E")
        eligible, missing = campus.graduation_eligibility("S900")
        assert not eligible and "CS100" in missing

    def test_apply_approve_graduates(self, campus):
        self.make_eligible(campus)
        app = campus.apply_graduation("S900")
        decided = campus.decide_graduation("ADM1", app.id, "approve")
        assert decided.status == "approved" and decided.eligibility_snapshot
        assert campus.student("S900").status == "graduated"

    def test_ineligible_approval_blocked_rejection_allowed(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)  # active but incomplete
        app = campus.apply_graduation("S900")
        with pytest.raises(err.NotEligible):
            campus.decide_graduation("ADM1", app.id, "approve")
        decided = campus.decide_graduation("ADM1", app.id, "reject")
        assert decided.status == "rejected"

    def test_decide_twice(self, campus):
        self.make_eligible(campus)
        app = campus.apply_graduation("S900")
        campus.decide_graduation("ADM1", app.id, "approve")
        with pytest.raises(err.AlreadyDecided):
            campus.decide_graduation("ADM1", app.id, "reject")

    def test_apply_requires_active_status(self, campus):
        record = campus.student("S900")
        record.status = "admitted"
        campus.state.put("student", "S900", record)
        with pytest.raises(err.NotAuthorized):
            campus.apply_graduation("S900")


class TestProgramChange:
    def test_approve_rewrites_program(self, campus):
        req = campus.request_program_change("S900", "BA")
        campus.decide_program_change("ADM1", req.id, "approve")
        assert campus.student("S900").program == "BA"

    def test_reject_leaves_program(self, campus):
        req = campus.request_program_change("S900", "BA")
        campus.decide_program_change("ADM1", req.id, "reject")
        assert campus.student("S900").program == "BSC"

    def test_student_cannot_decide(self, campus):
        req = campus.request_program_change("S900", "BA")
        with pytest.raises(err.NotAuthorized):
            campus.decide_program_change("S900", req.id, "approve")

    def test_unknown_program(self, campus):
        with pytest.raises(err.UnknownProgram):
            campus.request_program_change("S900", "NOPE")

    def test_unknown_major(self, campus):
        with pytest.raises(err.UnknownMajor):
            campus.request_program_change("S900", "BA", "Literature")

    def test_major_change_applied(self, campus):
        req = campus.request_program_change("S900", "BSC", "Systems")
        campus.decide_program_change("ADM1", req.id, "approve")
        assert campus.student("S900").major == "Systems"


class TestFinance:
    def test_enrollment_creates_invoice_line(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        assert invoice.total_cents == 15 * 4000
        assert invoice.paid_cents == 0

    def test_second_enrollment_appends(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        campus.enroll("LEC1", "S900", "CS101", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        assert invoice.total_cents == 30 * 4000 and len(invoice.lines) == 2

    def test_withdraw_restores_total(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        campus.withdraw("S900", "S900", "CS100", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        assert invoice.total_cents == 0

    def test_full_payment(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        campus.pay_invoice("S900", invoice.id, invoice.total_cents, "4111-1111")
        (invoice,) = campus.invoices("S900")
        assert invoice.paid_cents == invoice.total_cents

    def test_overpayment(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        with pytest.raises(err.Overpayment):
            campus.pay_invoice("S900", invoice.id, invoice.total_cents + 1, "4111")

    def test_declined_card(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        with pytest.raises(err.GatewayDeclined):
            campus.pay_invoice("S900", invoice.id, 100, "DECLINE-ME")

    def test_not_yours(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        with pytest.raises(err.NotYours):
            campus.pay_invoice("S901", invoice.id, 100, "4111")

    def test_withdraw_after_payment_refunds(self, campus):
        campus.enroll("S900", "S900", "CS100", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        campus.pay_invoice("S900", invoice.id, invoice.total_cents, "4111")
        campus.withdraw("S900", "S900", "CS100", "Suva", TERM)
        (invoice,) = campus.invoices("S900")
        assert invoice.total_cents == 0 and invoice.paid_cents == 0
        assert check_invariants(campus.state, campus.config) == []


class TestReports:
    def test_empty_term(self, campus):
        table = campus.report("ADM1", "enrollment_counts", NEXT_TERM)
        assert table.rows == []

    def test_enrollment_counts_skip_withdrawn(self, campus):
        for s in ("S900", "S901"):
            campus.enroll(s, s, "CS100", "Suva", TERM)
        campus.enroll("S902", "S902", "HS100", "Suva", TERM)
        campus.register_student("ADM1", "S903", "Solo", "BSC")
        campus.enroll("S903", "S903", "CS100", "Suva", TERM)
        campus.withdraw("S903", "S903", "CS100", "Suva", TERM)
        table = campus.report("ADM1", "enrollment_counts", TERM)
        assert table.rows == [["CS100", "Suva", "2"], ["HS100", "Suva", "1"]]

    def test_pass_rate_half(self, campus):
        complete_unit(campus, "S900", "CS100", "A")
        campus.enroll("S901", "S901", "CS100", "Suva", TERM)
        campus.finalize_grades("LEC1", "CS100", "Suva", TERM, {"S901": "E"})
        table = campus.report("ADM1", "pass_rates", TERM)
        assert table.rows == [["CS100", "2", "0.5000"]]

    def test_application_funnel(self, campus):
        a = campus.submit_application("A", Contact(), "BSC")
        b = campus.submit_application("B", Contact(), "BSC")
        campus.submit_application("C", Contact(), "BSC")
        campus.decide_application("ADM1", a.id, "approve")
        campus.decide_application("ADM1", b.id, "reject")
        table = campus.report("ADM1", "application_funnel", TERM)
        assert table.rows == [["pending", "1"], ["approved", "1"], ["rejected", "1"]]

    def test_non_admin_rejected(self, campus):
        with pytest.raises(err.NotAuthorized):
            campus.report("LEC1", "enrollment_counts", TERM)


class TestStudentDetails:
    def test_staff_views_details(self, campus):
        complete_unit(campus, "S900", "CS100", "A")
        record, rows, gpa = campus.student_details("LEC1", "S900")
        assert record.id == "S900" and len(rows) == 1 and gpa == Fraction(4)

    def test_student_cannot_view_details(self, campus):
        with pytest.raises(err.NotAuthorized):
            campus.student_details("S900", "S901")

    def test_unknown_student(self, campus):
        with pytest.raises(err.UnknownPerson):
            campus.student_details("LEC1", "GHOST")


class TestStatusMachineFuzz:
    def test_one_decision_ever(self, campus):
        rng = random.Random("decisions")
        ids = []
        for i in range(10):
            ids.append(("application", campus.submit_application(f"P{i}", Contact(), "BSC").id))
            ids.append(("progchange", campus.request_program_change("S900", "BA").id))
        for kind, entity_id in ids:
            decided = 0
            for _ in range(6):
                decision = rng.choice(["approve", "reject"])
                try:
                    if kind == "application":
                        campus.decide_application("ADM1", entity_id, decision)
                    else:
                        campus.decide_program_change("ADM1", entity_id, decision)
                    decided += 1
                except err.AlreadyDecided:
                    pass
            assert decided == 1
        assert check_invariants(campus.state, campus.config) == []


class TestEligibilityOracle:
    """Brute-force set computation vs the real implementation on random catalogs."""

    def run_catalog(self, rng, seq):
        state = MemoryState()
        ops = CampusOps(state, DomainConfig(current_term=TERM))
        state.put("staff", "ADM1", StaffRecord("ADM1", "A", Contact(), "academic_services"))
        ops.add_staff("ADM1", "HOD1", "H", "head_of_department")
        ops.add_staff("ADM1", "LEC1", "L", "lecturer")
        n_units = rng.randint(1, 6)
        unit_codes = [f"U{i}" for i in range(n_units)]
        for i, code in enumerate(unit_codes):
            prereqs = [c for c in unit_codes[:i] if rng.random() < 0.3]
            ops.add_unit("ADM1", code, code, prereqs, rng.choice([5, 10, 15, 20]))
        required = [c for c in unit_codes if rng.random() < 0.7] or [unit_codes[0]]
        extra = [c for c in unit_codes if c not in required and rng.random() < 0.5]
        ops.add_program("ADM1", "PR", "Program", required, [Major("M", extra)])
        grades = ["A+", "A", "B+", "B", "C+", "C", "D", "E"]
        students = []
        completions = {}
        for s in range(rng.randint(1, 4)):
            sid = f"S{s}"
            major = "M" if rng.random() < 0.5 else None
            ops.register_student("ADM1", sid, sid, "PR", major=major)
            students.append((sid, major))
            completions[sid] = {}
            for code in unit_codes:
                if rng.random() < 0.5:
                    grade = rng.choice(grades)
                    ops.activate_offering("HOD1", code, f"C{sid}", TERM, 100, "LEC1") \
                        if state.get("offering", f"{code}|C{sid}|{TERM}") is None else None
                    ops.enroll("LEC1", sid, code, f"C{sid}", TERM)
                    ops.finalize_grades("LEC1", code, f"C{sid}", TERM, {sid: grade})
                    completions[sid][code] = grade

        passing = {"A+", "A", "B+", "B", "C+", "C"}
        for sid, major in students:
            expected_required = list(required) + ([c for c in extra if c not in required] if major else [])
            passed = {c for c, g in completions[sid].items() if g in passing}
            expected_missing = [c for c in expected_required if c not in passed]

            rows = ops.program_requirements(sid)
            assert [u for u, _ in rows] == expected_required, f"seed {seq}"
            assert [u for u, done in rows if not done] == expected_missing, f"seed {seq}"
            eligible, missing = ops.graduation_eligibility(sid)
            assert missing == expected_missing and eligible == (not expected_missing), f"seed {seq}"

            # GPA oracle: plain weighted mean over completions
            credits = {c: state.get("unit", c).credit_points for c in unit_codes}
            points = {"A+": Fraction(9, 2), "A": Fraction(4), "B+": Fraction(7, 2), "B": Fraction(3),
                      "C+": Fraction(5, 2), "C": Fraction(2), "D": Fraction(1), "E": Fraction(0)}
            total_credits = sum(credits[c] for c in completions[sid])
            _, gpa = ops.academic_history(sid)
            if total_credits == 0:
                assert gpa is None
            else:
                expected = sum(points[g] * credits[c] for c, g in completions[sid].items()) / total_credits
                assert gpa == expected, f"seed {seq}"

    def test_oracle_equivalence_over_random_catalogs(self):
        rng = random.Random("catalogs")
        for seq in range(60):
            self.run_catalog(rng, seq)
