"""End-to-end smoke scenario and its canonical transcript.

The scenario drives the full student lifecycle over plain HTTP: apply,
approve, activate offerings, enroll (including a prerequisite rejection
and a staff override), timetable, coursework (including a weight-overflow
rejection), grades, history with GPA, the graduation gate both ways,
a program change, invoices and payments (including an overpayment
rejection), all three reports, plus the profile, class-list, student-
details and HR-stub options, so every portal menu item is exercised once.

Transcripts are normalized so runs compare byte for byte: JSON keys are
sorted and volatile values (tokens, expiries, timestamps) are replaced
with placeholders. Entity ids are deterministic counters on a fresh
store, so they need no scrubbing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from urllib.parse import urlencode

from fnucis.ops.httpapi import ApiError, HttpClient

SCRUB_KEYS = {"token": "<token>", "expires_at": 0, "timestamp": "<timestamp>"}


class StepFailed(Exception):
    def __init__(self, step: str, status, body):
        super().__init__(f"step {step!r}: unexpected response {status}: {body!r}")
        self.step = step
        self.status = status
        self.body = body


def scrub(value):
    if isinstance(value, dict):
        return {k: (SCRUB_KEYS[k] if k in SCRUB_KEYS else scrub(v)) for k, v in value.items()}
    if isinstance(value, list):
        return [scrub(v) for v in value]
    return value


def canonical_json(value) -> str:
    return json.dumps(scrub(value), sort_keys=True, separators=(",", ":"))


@dataclass
class Transcript:
    lines: list[str] = field(default_factory=lambda: ["# smoke transcript v1"])

    def record(self, step: str, method: str, path: str, body, status, response, location=None):
        self.lines.append(f"== {step}")
        self.lines.append(f"> {method} {path}")
        if body is not None:
            self.lines.append(f"> {canonical_json(body)}")
        self.lines.append(f"< {status}")
        if location is not None:
            self.lines.append(f"< location {location}")
        if response is not None:
            self.lines.append(f"< {canonical_json(response)}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


class Scenario:
    def __init__(self, gateway_url: str, admin_user: str, admin_password: str):
        self.gateway_url = gateway_url
        self.admin_user = admin_user
        self.admin_password = admin_password
        self.transcript = Transcript()
        self._clients: dict[str, HttpClient] = {}

    def client(self, who: str) -> HttpClient:
        if who not in self._clients:
            self._clients[who] = HttpClient(self.gateway_url)
        return self._clients[who]

    def step(self, name: str, who: str, method: str, path: str, body=None,
             query=None, expect: int = 200):
        client = self.client(who)
        try:
            status, response, headers = client.request(method, path, body, query=query)
        except ApiError as exc:
            status, response, headers = exc.status, exc.body, {}
        location = headers.get("Location") if status in (301, 302) else None
        shown_path = path + ("?" + urlencode(query) if query else "")
        self.transcript.record(name, method, shown_path, body, status, response, location)
        if status != expect:
            raise StepFailed(name, status, response)
        return response

    def login(self, name: str, who: str, username: str, password: str):
        session = self.step(name, who, "POST", "/api/login",
                            {"username": username, "password": password})
        self.client(who).token = session["token"]
        return session

    def run(self) -> Transcript:
        term = "2024-1"
        self.login("login-admin", "admin", self.admin_user, self.admin_password)

        # catalog and people
        self.step("add-staff-hod", "admin", "POST", "/api/people/staff",
                  {"id": "HOD1", "name": "Hana Vula", "role": "head_of_department", "password": "hod-pw"})
        self.step("add-staff-lecturer", "admin", "POST", "/api/people/staff",
                  {"id": "LEC1", "name": "Lata Naidu", "role": "lecturer", "password": "lec-pw"})
        self.step("add-unit-cs100", "admin", "POST", "/api/catalog/units",
                  {"code": "CS100", "title": "Computing Basics", "credit_points": 15})
        self.step("add-unit-cs101", "admin", "POST", "/api/catalog/units",
                  {"code": "CS101", "title": "Programming", "prerequisites": ["CS100"], "credit_points": 15})
        self.step("add-unit-hs100", "admin", "POST", "/api/catalog/units",
                  {"code": "HS100", "title": "Pacific History", "credit_points": 10})
        self.step("add-program-bsc", "admin", "POST", "/api/catalog/programs",
                  {"id": "BSC", "title": "Bachelor of Science", "required_units": ["CS100", "CS101"]})
        self.step("add-program-ba", "admin", "POST", "/api/catalog/programs",
                  {"id": "BA", "title": "Bachelor of Arts", "required_units": ["HS100"]})

        # offerings and timetable
        self.login("login-hod", "hod", "HOD1", "hod-pw")
        self.step("activate-cs100", "hod", "POST", "/api/offerings",
                  {"unit": "CS100", "campus": "Suva", "term": term, "capacity": 30, "teacher": "LEC1"})
        self.step("activate-cs101", "hod", "POST", "/api/offerings",
                  {"unit": "CS101", "campus": "Suva", "term": term, "capacity": 30, "teacher": "LEC1"})
        self.step("timetable-cs100-class", "admin", "POST", "/api/timetable",
                  {"unit": "CS100", "campus": "Suva", "term": term, "kind": "class",
                   "day": "Mon", "start": "09:00", "end": "11:00", "room": "R101"})
        self.step("timetable-cs100-exam", "admin", "POST", "/api/timetable",
                  {"unit": "CS100", "campus": "Suva", "term": term, "kind": "final_exam",
                   "day": "Fri", "start": "14:00", "end": "16:00", "room": "Hall A"})
        self.step("timetable-cs101-class", "admin", "POST", "/api/timetable",
                  {"unit": "CS101", "campus": "Suva", "term": term, "kind": "class",
                   "day": "Wed", "start": "13:00", "end": "15:00", "room": "R202"})

        # admission
        alice_app = self.step("apply-alice", "public", "POST", "/api/applications",
                              {"name": "Alice Prasad", "password": "alice-pw", "program": "BSC",
                               "contact": {"postal": "PO Box 12", "mobile_phone": "999-0001"}})
        self.step("applications-queue", "admin", "GET", "/api/applications", query={"status": "pending"})
        approved = self.step("approve-alice", "admin", "POST",
                             f"/api/applications/{alice_app['id']}/decision", {"decision": "approve"})
        alice_id = approved["student"]

        # student lifecycle
        self.login("login-alice", "alice", alice_id, "alice-pw")
        self.step("alice-update-profile", "alice", "PUT", f"/api/people/{alice_id}/profile",
                  {"contact": {"postal": "PO Box 12", "residential": "12 Ratu Rd",
                               "home_phone": "331-0000", "mobile_phone": "999-0001"}})
        self.step("alice-requirements", "alice", "GET", f"/api/students/{alice_id}/requirements")
        self.step("enroll-cs101-prereq-rejected", "alice", "POST", "/api/enrollments",
                  {"student": alice_id, "unit": "CS101", "campus": "Suva", "term": term}, expect=422)
        self.login("login-lecturer", "lecturer", "LEC1", "lec-pw")
        self.step("enroll-cs101-staff-override", "lecturer", "POST", "/api/enrollments",
                  {"student": alice_id, "unit": "CS101", "campus": "Suva", "term": term})
        self.step("enroll-cs100-self", "alice", "POST", "/api/enrollments",
                  {"student": alice_id, "unit": "CS100", "campus": "Suva", "term": term})
        self.step("alice-timetable", "alice", "GET", f"/api/students/{alice_id}/timetable",
                  query={"term": term})

        # finance
        invoices = self.step("alice-invoices", "alice", "GET", "/api/invoices")
        invoice_id = invoices[0]["id"]
        self.step("pay-overpayment-rejected", "alice", "POST", "/api/payments",
                  {"invoice": invoice_id, "amount_cents": 200000, "card_ref": "4111-0000"}, expect=422)
        self.step("pay-partial", "alice", "POST", "/api/payments",
                  {"invoice": invoice_id, "amount_cents": 50000, "card_ref": "4111-0000"})
        self.step("pay-balance", "alice", "POST", "/api/payments",
                  {"invoice": invoice_id, "amount_cents": 70000, "card_ref": "4111-0000"})

        # graduation gate: ineligible first
        grad_early = self.step("apply-graduation-early", "alice", "POST", "/api/graduation")
        self.step("approve-graduation-early-rejected", "admin", "POST",
                  f"/api/graduation/{grad_early['id']}/decision", {"decision": "approve"}, expect=422)
        self.step("reject-graduation-early", "admin", "POST",
                  f"/api/graduation/{grad_early['id']}/decision", {"decision": "reject"})

        # coursework
        self.step("coursework-midterm", "lecturer", "POST", "/api/coursework",
                  {"unit": "CS100", "campus": "Suva", "term": term, "assessment": "Midterm",
                   "weight": 30, "scores": {alice_id: 78}})
        self.step("coursework-overflow-rejected", "lecturer", "POST", "/api/coursework",
                  {"unit": "CS100", "campus": "Suva", "term": term, "assessment": "Final",
                   "weight": 80, "scores": {alice_id: 82}}, expect=409)
        self.step("coursework-final", "lecturer", "POST", "/api/coursework",
                  {"unit": "CS100", "campus": "Suva", "term": term, "assessment": "Final",
                   "weight": 70, "scores": {alice_id: 82}})
        self.step("alice-coursework", "alice", "GET", f"/api/students/{alice_id}/coursework",
                  query={"term": term})
        self.step("lecturer-classlist", "lecturer", "GET",
                  "/api/offerings/CS100~Suva~2024-1/classlist")

        # grades and history
        self.step("grades-cs100", "lecturer", "POST", "/api/grades",
                  {"unit": "CS100", "campus": "Suva", "term": term, "grades": {alice_id: "A"}})
        self.step("grades-cs101", "lecturer", "POST", "/api/grades",
                  {"unit": "CS101", "campus": "Suva", "term": term, "grades": {alice_id: "B+"}})
        self.step("alice-history-gpa", "alice", "GET", f"/api/students/{alice_id}/history")
        self.step("admin-student-details", "admin", "GET", f"/api/students/{alice_id}/details")

        # graduation gate: eligible now
        grad = self.step("apply-graduation", "alice", "POST", "/api/graduation")
        self.step("graduation-queue", "admin", "GET", "/api/graduation", query={"status": "pending"})
        self.step("approve-graduation", "admin", "POST",
                  f"/api/graduation/{grad['id']}/decision", {"decision": "approve"})

        # program change on a second admitted student
        bob_app = self.step("apply-bob", "public", "POST", "/api/applications",
                            {"name": "Bob Singh", "password": "bob-pw", "program": "BSC",
                             "contact": {"mobile_phone": "999-0002"}})
        bob = self.step("approve-bob", "admin", "POST",
                        f"/api/applications/{bob_app['id']}/decision", {"decision": "approve"})
        bob_id = bob["student"]
        self.login("login-bob", "bob", bob_id, "bob-pw")
        change = self.step("bob-program-change-request", "bob", "POST", "/api/program-change",
                           {"new_program": "BA"})
        self.step("program-change-queue", "admin", "GET", "/api/program-change",
                  query={"status": "pending"})
        self.step("approve-program-change", "admin", "POST",
                  f"/api/program-change/{change['id']}/decision", {"decision": "approve"})
        self.step("bob-profile-shows-ba", "bob", "GET", f"/api/people/{bob_id}/profile")

        # staff-side options
        self.step("lecturer-profile", "lecturer", "GET", "/api/people/LEC1/profile")
        self.step("lecturer-hr-redirect", "lecturer", "GET", "/api/hr", expect=302)

        # reports
        self.step("report-enrollment-counts", "admin", "GET", "/api/reports/enrollment_counts",
                  query={"term": term})
        self.step("report-pass-rates", "admin", "GET", "/api/reports/pass_rates",
                  query={"term": term})
        self.step("report-application-funnel", "admin", "GET", "/api/reports/application_funnel",
                  query={"term": term})

        # sign out
        self.step("logout-alice", "alice", "POST", "/api/logout")
        self.step("logout-admin", "admin", "POST", "/api/logout")
        return self.transcript


def run_scenario(gateway_url: str, admin_user: str, admin_password: str) -> str:
    return Scenario(gateway_url, admin_user, admin_password).run().text()
