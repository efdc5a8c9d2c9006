// Gateway API client. Every state change in the portal goes through here,
// one method per route; no other module talks to the network.

export interface Term {
  year: number;
  semester: number;
}

export interface Session {
  token: string;
  subject: string;
  role: string;
  expires_at: number;
}

export interface Contact {
  postal: string;
  residential: string;
  home_phone: string;
  mobile_phone: string;
}

export interface Profile {
  id: string;
  name: string;
  kind: "student" | "staff";
  role: string;
  contact: Contact;
  program: string | null;
  major: string | null;
  status: string | null;
}

export interface Offering {
  unit: string;
  campus: string;
  term: Term;
  capacity: number;
  active: boolean;
  teacher: string | null;
}

export interface RequirementRow {
  unit: string;
  completed: boolean;
}

export interface HistoryRow {
  unit: string;
  term: Term;
  grade: string;
  credit_points: number;
}

export interface History {
  rows: HistoryRow[];
  gpa: number | null;
}

export interface TimetableEntry {
  unit: string;
  campus: string;
  term: Term;
  kind: string;
  day: string;
  start: string;
  end: string;
  room: string;
}

export interface CourseworkRow {
  unit: string;
  assessment: string;
  weight: number;
  score: number;
}

export interface LineItem {
  description: string;
  amount_cents: number;
}

export interface Invoice {
  id: string;
  student: string;
  term: Term;
  lines: LineItem[];
  total_cents: number;
  paid_cents: number;
}

export interface Application {
  id: string;
  name: string;
  contact: Contact;
  program: string;
  status: string;
  decided_by: string | null;
  decided_term: Term | null;
  student: string | null;
}

export interface GraduationQueueRow {
  id: string;
  student: string;
  name: string;
  status: string;
  eligible: boolean;
  missing: string[];
}

export interface ProgramChange {
  id: string;
  student: string;
  new_program: string;
  new_major: string | null;
  status: string;
}

export interface Eligibility {
  eligible: boolean;
  missing: string[];
}

export interface ClassRow {
  student: string;
  name: string;
}

export interface Report {
  kind: string;
  term: Term;
  columns: string[];
  rows: { cells: string[] }[];
}

export interface PortalConfig {
  current_term: Term;
  hr_url: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export function termString(term: Term): string {
  return `${term.year}-${term.semester}`;
}

export class ApiClient {
  token: string | null = null;
  session: Session | null = null;
  errorTable: Record<string, string> = {};

  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { Accept: "application/json" };
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
      credentials: "same-origin",
      redirect: "manual",
    });
    const text = await response.text();
    const decoded = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const code = decoded && decoded.code ? decoded.code : "internal";
      const detail = decoded && decoded.message ? decoded.message : "";
      throw new ApiError(response.status, code, detail);
    }
    return decoded as T;
  }

  // the banner text for an error code comes from the shared table, never invented here
  bannerText(code: string, fallbackDetail: string): string {
    return this.errorTable[code] ?? fallbackDetail ?? code;
  }

  async loadErrorTable(): Promise<void> {
    this.errorTable = await this.request<Record<string, string>>("GET", "/api/errors");
  }

  config(): Promise<PortalConfig> {
    return this.request("GET", "/api/config");
  }

  async login(username: string, password: string): Promise<Session> {
    const session = await this.request<Session>("POST", "/api/login", { username, password });
    this.token = session.token;
    this.session = session;
    return session;
  }

  async logout(): Promise<void> {
    await this.request("POST", "/api/logout");
    this.token = null;
    this.session = null;
  }

  submitApplication(name: string, password: string, program: string, contact: Partial<Contact>) {
    return this.request<Application>("POST", "/api/applications", { name, password, program, contact });
  }

  applications(status: string): Promise<Application[]> {
    return this.request("GET", `/api/applications?status=${encodeURIComponent(status)}`);
  }

  decideApplication(id: string, decision: "approve" | "reject"): Promise<Application> {
    return this.request("POST", `/api/applications/${encodeURIComponent(id)}/decision`, { decision });
  }

  profile(person: string): Promise<Profile> {
    return this.request("GET", `/api/people/${encodeURIComponent(person)}/profile`);
  }

  updateProfile(person: string, contact: Contact): Promise<boolean> {
    return this.request("PUT", `/api/people/${encodeURIComponent(person)}/profile`, { contact });
  }

  requirements(student: string): Promise<RequirementRow[]> {
    return this.request("GET", `/api/students/${encodeURIComponent(student)}/requirements`);
  }

  history(student: string): Promise<History> {
    return this.request("GET", `/api/students/${encodeURIComponent(student)}/history`);
  }

  timetable(student: string, term: string): Promise<TimetableEntry[]> {
    return this.request("GET", `/api/students/${encodeURIComponent(student)}/timetable?term=${term}`);
  }

  coursework(student: string, term: string): Promise<CourseworkRow[]> {
    return this.request("GET", `/api/students/${encodeURIComponent(student)}/coursework?term=${term}`);
  }

  eligibility(student: string): Promise<Eligibility> {
    return this.request("GET", `/api/students/${encodeURIComponent(student)}/eligibility`);
  }

  studentDetails(student: string): Promise<{ student: Profile & { program: string }; history: History }> {
    return this.request("GET", `/api/students/${encodeURIComponent(student)}/details`);
  }

  offerings(term: string, activeOnly = true): Promise<Offering[]> {
    return this.request("GET", `/api/offerings?term=${term}&active=${activeOnly ? "1" : "0"}`);
  }

  activateOffering(unit: string, campus: string, term: string, capacity: number, teacher: string | null) {
    return this.request<Offering>("POST", "/api/offerings", { unit, campus, term, capacity, teacher });
  }

  classList(unit: string, campus: string, term: string): Promise<ClassRow[]> {
    const key = encodeURIComponent(`${unit}~${campus}~${term}`);
    return this.request("GET", `/api/offerings/${key}/classlist`);
  }

  enroll(student: string, unit: string, campus: string, term: string) {
    return this.request("POST", "/api/enrollments", { student, unit, campus, term });
  }

  withdraw(student: string, unit: string, campus: string, term: string) {
    return this.request("DELETE", "/api/enrollments", { student, unit, campus, term });
  }

  submitCoursework(unit: string, campus: string, term: string, assessment: string,
                   weight: number, scores: Record<string, number>) {
    return this.request("POST", "/api/coursework", { unit, campus, term, assessment, weight, scores });
  }

  finalizeGrades(unit: string, campus: string, term: string, grades: Record<string, string>) {
    return this.request<number>("POST", "/api/grades", { unit, campus, term, grades });
  }

  applyGraduation() {
    return this.request("POST", "/api/graduation");
  }

  graduationQueue(status: string): Promise<GraduationQueueRow[]> {
    return this.request("GET", `/api/graduation?status=${encodeURIComponent(status)}`);
  }

  decideGraduation(id: string, decision: "approve" | "reject") {
    return this.request("POST", `/api/graduation/${encodeURIComponent(id)}/decision`, { decision });
  }

  requestProgramChange(newProgram: string, newMajor: string | null) {
    return this.request<ProgramChange>("POST", "/api/program-change",
                                       { new_program: newProgram, new_major: newMajor });
  }

  programChangeQueue(status: string): Promise<ProgramChange[]> {
    return this.request("GET", `/api/program-change?status=${encodeURIComponent(status)}`);
  }

  decideProgramChange(id: string, decision: "approve" | "reject") {
    return this.request<ProgramChange>("POST", `/api/program-change/${encodeURIComponent(id)}/decision`,
                                       { decision });
  }

  invoices(): Promise<Invoice[]> {
    return this.request("GET", "/api/invoices");
  }

  pay(invoice: string, amountCents: number, cardRef: string) {
    return this.request("POST", "/api/payments", {
      invoice, amount_cents: amountCents, card_ref: cardRef,
    });
  }

  report(kind: string, term: string): Promise<Report> {
    return this.request("GET", `/api/reports/${encodeURIComponent(kind)}?term=${term}`);
  }

  programs(): Promise<{ id: string; title: string; required_units: string[] }[]> {
    return this.request("GET", "/api/catalog/programs");
  }
}
