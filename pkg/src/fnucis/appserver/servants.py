"""The seven servants: thin adapters from contract methods to domain calls.

Read-only methods run against the committed view; mutating methods run
inside exactly one store transaction on the single writer lane, committed
on success and rolled back on any domain error (which then travels as an
error reply, code for code).
"""

from __future__ import annotations

from fnucis.appserver import mapping as wire
from fnucis.appserver.auth import make_credential
from fnucis.domain.model import Contact, Credential, Term


def _term(value: dict) -> Term:
    return wire.term_entity(value)


def _contact(value: dict) -> Contact:
    return wire.contact_entity(value)


def _history_value(rows, gpa) -> dict:
    return {
        "rows": [
            {"unit": unit, "term": wire.term_value(term), "grade": grade, "credit_points": credits}
            for unit, term, grade, credits in rows
        ],
        "gpa": float(gpa) if gpa is not None else None,
    }


class AuthServant:
    def __init__(self, rt):
        self.rt = rt

    def login(self, username, password):
        with self.rt.reads() as ops:
            session = self.rt.auth.login(ops.state, username, password)
        return {"token": session.token, "subject": session.subject, "role": session.role,
                "expires_at": int(session.expires_at)}

    def logout(self, token):
        with self.rt.reads():
            self.rt.auth.sessions.revoke(token)
        return True

    def authorize(self, token, capability):
        with self.rt.reads():
            session = self.rt.auth.authorize(token, capability)
        return {"subject": session.subject, "role": session.role}

    def whoami(self, token):
        with self.rt.reads():
            session = self.rt.auth.sessions.lookup(token)
        return {"subject": session.subject, "role": session.role}


class AdmissionsServant:
    def __init__(self, rt):
        self.rt = rt

    def submit_application(self, name, contact, password, program):
        with self.rt.writes() as ops:
            application = ops.submit_application(name, _contact(contact), program)
            # applicant account: exists from day one, stays inactive until approval
            credential = make_credential(application.id, application.id, "applicant", password,
                                         self.rt.pbkdf2_iters, active=False)
            ops.state.put("cred", application.id, credential)
            return wire.application_value(application)

    def get_application(self, app_id):
        with self.rt.reads() as ops:
            return wire.application_value(ops.get_application(app_id))

    def list_applications(self, status):
        with self.rt.reads() as ops:
            return [wire.application_value(a) for a in ops.list_applications(status)]

    def decide_application(self, actor, app_id, decision):
        with self.rt.writes() as ops:
            application = ops.decide_application(actor, app_id, decision)
            if application.status == "approved":
                applicant_cred = ops.state.get("cred", app_id)
                student_id = application.student
                if applicant_cred is not None:
                    student_cred = Credential(student_id, student_id, "student",
                                              applicant_cred.salt, applicant_cred.pw_hash,
                                              applicant_cred.iterations, True)
                    ops.state.put("cred", student_id, student_cred)
            return wire.application_value(application)


class EnrollmentServant:
    def __init__(self, rt):
        self.rt = rt

    def add_program(self, actor, program_id, title, required_units, majors):
        with self.rt.writes() as ops:
            program = ops.add_program(actor, program_id, title, list(required_units),
                                      [wire.major_entity(m) for m in majors])
            return wire.program_value(program)

    def add_unit(self, actor, code, title, prerequisites, credit_points):
        with self.rt.writes() as ops:
            return wire.unit_value(ops.add_unit(actor, code, title, list(prerequisites), credit_points))

    def list_programs(self):
        with self.rt.reads() as ops:
            return [wire.program_value(p) for p in ops.list_programs()]

    def list_units(self):
        with self.rt.reads() as ops:
            return [wire.unit_value(u) for u in ops.list_units()]

    def get_program(self, program_id):
        with self.rt.reads() as ops:
            return wire.program_value(ops.get_program(program_id))

    def activate_offering(self, actor, unit, campus, term, capacity, teacher):
        with self.rt.writes() as ops:
            offering = ops.activate_offering(actor, unit, campus, _term(term), capacity, teacher)
            return wire.offering_value(offering)

    def list_offerings(self, term, active_only):
        with self.rt.reads() as ops:
            offerings = ops.list_offerings(_term(term) if term else None, active_only)
            return [wire.offering_value(o) for o in offerings]

    def enroll(self, actor, student, unit, campus, term):
        with self.rt.writes() as ops:
            return wire.enrollment_value(ops.enroll(actor, student, unit, campus, _term(term)))

    def withdraw(self, actor, student, unit, campus, term):
        with self.rt.writes() as ops:
            return wire.enrollment_value(ops.withdraw(actor, student, unit, campus, _term(term)))


class RecordsServant:
    def __init__(self, rt):
        self.rt = rt

    def submit_coursework(self, actor, unit, campus, term, assessment, weight, scores):
        with self.rt.writes() as ops:
            ops.submit_coursework(actor, unit, campus, _term(term), assessment, weight,
                                  {s["student"]: s["points"] for s in scores})
        return True

    def coursework_for_student(self, student, term):
        with self.rt.reads() as ops:
            rows = ops.coursework_for_student(student, _term(term))
        return [{"unit": u, "assessment": a, "weight": float(w), "score": float(s)} for u, a, w, s in rows]

    def class_list(self, actor, unit, campus, term):
        with self.rt.reads() as ops:
            rows = ops.class_list(actor, unit, campus, _term(term))
        return [{"student": sid, "name": name} for sid, name in rows]

    def finalize_grades(self, actor, unit, campus, term, grades):
        with self.rt.writes() as ops:
            return ops.finalize_grades(actor, unit, campus, _term(term),
                                       {g["student"]: g["grade"] for g in grades})

    def academic_history(self, student):
        with self.rt.reads() as ops:
            rows, gpa = ops.academic_history(student)
        return _history_value(rows, gpa)

    def program_requirements(self, student):
        with self.rt.reads() as ops:
            rows = ops.program_requirements(student)
        return [{"unit": unit, "completed": done} for unit, done in rows]

    def timetable(self, student, term):
        with self.rt.reads() as ops:
            entries = ops.timetable(student, _term(term))
        return [wire.timetable_value(e) for e in entries]

    def add_timetable_entry(self, actor, unit, campus, term, kind, day, start, end, room):
        with self.rt.writes() as ops:
            ops.add_timetable_entry(actor, unit, campus, _term(term), kind, day, start, end, room)
        return True

    def graduation_eligibility(self, student):
        with self.rt.reads() as ops:
            eligible, missing = ops.graduation_eligibility(student)
        return {"eligible": eligible, "missing": missing}

    def apply_graduation(self, actor):
        with self.rt.writes() as ops:
            return wire.graduation_value(ops.apply_graduation(actor))

    def list_graduations(self, status):
        with self.rt.reads() as ops:
            rows = []
            for g in ops.list_graduations(status):
                eligible, missing = ops.graduation_eligibility(g.student)
                rows.append({"id": g.id, "student": g.student, "name": ops.student(g.student).name,
                             "status": g.status, "eligible": eligible, "missing": missing})
            return rows

    def decide_graduation(self, actor, app_id, decision):
        with self.rt.writes() as ops:
            return wire.graduation_value(ops.decide_graduation(actor, app_id, decision))

    def request_program_change(self, actor, new_program, new_major):
        with self.rt.writes() as ops:
            return wire.progchange_value(ops.request_program_change(actor, new_program, new_major))

    def list_program_changes(self, status):
        with self.rt.reads() as ops:
            return [wire.progchange_value(r) for r in ops.list_program_changes(status)]

    def decide_program_change(self, actor, req_id, decision):
        with self.rt.writes() as ops:
            return wire.progchange_value(ops.decide_program_change(actor, req_id, decision))


class FinanceServant:
    def __init__(self, rt):
        self.rt = rt

    def invoices(self, student):
        with self.rt.reads() as ops:
            return [wire.invoice_value(i) for i in ops.invoices(student)]

    def pay(self, actor, invoice_id, amount_cents, card_ref):
        with self.rt.writes() as ops:
            return wire.payment_value(ops.pay_invoice(actor, invoice_id, amount_cents, card_ref))


class ReportingServant:
    def __init__(self, rt):
        self.rt = rt

    def report(self, actor, kind, term):
        with self.rt.reads() as ops:
            table = ops.report(actor, kind, _term(term))
        return {"kind": table.kind, "term": wire.term_value(table.term), "columns": table.columns,
                "rows": [{"cells": row} for row in table.rows]}


class DirectoryServant:
    def __init__(self, rt):
        self.rt = rt

    def get_profile(self, actor, person):
        with self.rt.reads() as ops:
            return wire.profile_value(ops.get_profile(actor, person))

    def update_profile(self, actor, person, contact):
        with self.rt.writes() as ops:
            ops.update_profile(actor, person, _contact(contact))
        return True

    def student_details(self, actor, student):
        with self.rt.reads() as ops:
            record, rows, gpa = ops.student_details(actor, student)
        return {"student": wire.student_value(record), "history": _history_value(rows, gpa)}

    def add_staff(self, actor, person, name, role, contact, password):
        with self.rt.writes() as ops:
            record = ops.add_staff(actor, person, name, role, _contact(contact))
            ops.state.put("cred", person,
                          make_credential(person, person, role, password, self.rt.pbkdf2_iters))
            return wire.profile_value(record)

    def register_student(self, actor, person, name, program, major, contact, password):
        with self.rt.writes() as ops:
            record = ops.register_student(actor, person, name, program, major, _contact(contact))
            ops.state.put("cred", person,
                          make_credential(person, person, "student", password, self.rt.pbkdf2_iters))
            return wire.profile_value(record)

    def current_term(self):
        return wire.term_value(self.rt.current_term)
