// Role menus. Each role sees exactly its group's option list; the menu
// fidelity test snapshots these against test/fixtures/menus.json.

export interface MenuEntry {
  id: string;
  label: string;
}

const STUDENT_MENU: MenuEntry[] = [
  { id: "apply", label: "Application to Study" },
  { id: "profile", label: "Student Profile" },
  { id: "program-details", label: "Program Details" },
  { id: "graduation", label: "Graduation" },
  { id: "enrollment", label: "Enrollment" },
  { id: "timetable", label: "Timetable" },
  { id: "history", label: "Academic History" },
  { id: "coursework", label: "Course Work" },
  { id: "finance", label: "Finance" },
];

const ACADEMIC_MENU: MenuEntry[] = [
  { id: "profile", label: "Staff Profile" },
  { id: "enrolment", label: "Enrolment" },
  { id: "student-details", label: "Student Details" },
  { id: "coursework-submit", label: "Course Work" },
  { id: "classlist", label: "Class List" },
  { id: "hr", label: "HR" },
];

const ADMIN_MENU: MenuEntry[] = [
  { id: "profile", label: "Profile" },
  { id: "student-details", label: "Student Details" },
  { id: "unit-activation", label: "Unit Activation" },
  { id: "applications", label: "Applications" },
  { id: "graduations", label: "Graduations" },
  { id: "program-update", label: "Program Update" },
  { id: "reports", label: "Reports" },
];

export const ACADEMIC_ROLES = ["tutor", "assistant_lecturer", "lecturer", "senior_lecturer", "professor"];
export const ADMIN_ROLES = ["dean", "head_of_department", "academic_services"];

export type RoleGroup = "student" | "academic" | "admin";

export function groupOf(role: string): RoleGroup {
  if (ACADEMIC_ROLES.includes(role)) return "academic";
  if (ADMIN_ROLES.includes(role)) return "admin";
  return "student";
}

export function menuFor(role: string): MenuEntry[] {
  const group = groupOf(role);
  if (group === "academic") return ACADEMIC_MENU;
  if (group === "admin") return ADMIN_MENU;
  return STUDENT_MENU;
}
