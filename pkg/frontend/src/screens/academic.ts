import { termString } from "../api.js";
import { banner, clear, el, labeled, table } from "../dom.js";
import { Screen, ScreenContext, errorBanner } from "./context.js";
import { profileScreen } from "./student.js";

function offeringKeyInputs(): { unit: HTMLInputElement; campus: HTMLInputElement; holder: HTMLElement } {
  const unit = el("input", { placeholder: "CS100" });
  const campus = el("input", { placeholder: "Suva" });
  const holder = el("div", { class: "payrow" }, [labeled("Unit", unit), labeled("Campus", campus)]);
  return { unit, campus, holder };
}

export const staffEnrolmentScreen: Screen = async (ctx) => {
  ctx.container.append(el("h2", {}, ["Enrolment (staff override)"]));
  ctx.container.append(el("p", {}, [
    "Enroll a student into an active offering; prerequisite checks are bypassed and the override is recorded.",
  ]));
  const student = el("input", { placeholder: "S0001" });
  const { unit, campus, holder } = offeringKeyInputs();
  const status = el("div");
  const submit = el("button", {}, ["Enroll student"]);
  submit.addEventListener("click", async () => {
    clear(status);
    try {
      await ctx.api.enroll(student.value, unit.value, campus.value, ctx.term);
      status.append(banner("success", `Enrolled ${student.value} into ${unit.value}.`));
    } catch (err) {
      status.append(errorBanner(ctx, err));
    }
  });
  ctx.container.append(labeled("Student", student), holder, submit, status);
};

export const studentDetailsScreen: Screen = async (ctx) => {
  ctx.container.append(el("h2", {}, ["Student Details"]));
  const lookup = el("input", { placeholder: "S0001" });
  const go = el("button", {}, ["Look up"]);
  const result = el("div");
  go.addEventListener("click", async () => {
    clear(result);
    try {
      const details = await ctx.api.studentDetails(lookup.value);
      result.append(el("h3", {}, [`${details.student.name} (${details.student.id})`]));
      result.append(table(
        ["Field", "Value"],
        [["Program", details.student.program ?? ""], ["Status", details.student.status ?? ""]],
      ));
      result.append(table(
        ["Unit", "Term", "Grade", "Credits"],
        details.history.rows.map((r) => [r.unit, termString(r.term), r.grade, String(r.credit_points)]),
      ));
      result.append(el("p", {}, [
        details.history.gpa === null ? "No completed units." : `GPA: ${details.history.gpa}`,
      ]));
    } catch (err) {
      result.append(errorBanner(ctx, err));
    }
  });
  ctx.container.append(labeled("Student id", lookup), go, result);
};

export const courseworkSubmitScreen: Screen = async (ctx) => {
  ctx.container.append(el("h2", {}, ["Course Work (submit)"]));
  const { unit, campus, holder } = offeringKeyInputs();
  const loadButton = el("button", {}, ["Load class list"]);
  const status = el("div");
  const work = el("div");
  ctx.container.append(holder, loadButton, status, work);

  // weights already submitted this session, per offering key
  const sessionWeights = new Map<string, number>();

  loadButton.addEventListener("click", async () => {
    clear(status);
    clear(work);
    let classRows;
    try {
      classRows = await ctx.api.classList(unit.value, campus.value, ctx.term);
    } catch (err) {
      status.append(errorBanner(ctx, err));
      return;
    }
    const key = `${unit.value}~${campus.value}`;
    const assessment = el("input", { placeholder: "Midterm" });
    const weight = el("input", { type: "number", value: "0", min: "0", max: "100" });
    const indicator = el("span", { class: "weight-indicator" });
    const scoreInputs = new Map<string, HTMLInputElement>();
    const rows = classRows.map((row) => {
      const input = el("input", { type: "number", min: "0", max: "100", value: "0" });
      scoreInputs.set(row.student, input);
      return [row.student, row.name, input] as (string | Node)[];
    });
    const submit = el("button", {}, ["Submit coursework"]);

    const refreshIndicator = () => {
      const already = sessionWeights.get(key) ?? 0;
      const total = already + Number(weight.value || 0);
      indicator.textContent = `weight total: ${total} / 100`;
      const blocked = total > 100;
      indicator.className = blocked ? "weight-indicator over" : "weight-indicator";
      if (blocked) submit.setAttribute("disabled", "disabled");
      else submit.removeAttribute("disabled");
    };
    weight.addEventListener("input", refreshIndicator);
    refreshIndicator();

    submit.addEventListener("click", async () => {
      clear(status);
      const scores: Record<string, number> = {};
      for (const [student, input] of scoreInputs) scores[student] = Number(input.value || 0);
      try {
        await ctx.api.submitCoursework(unit.value, campus.value, ctx.term,
                                       assessment.value, Number(weight.value || 0), scores);
        sessionWeights.set(key, (sessionWeights.get(key) ?? 0) + Number(weight.value || 0));
        refreshIndicator();
        status.append(banner("success", `Recorded ${assessment.value}.`));
      } catch (err) {
        status.append(errorBanner(ctx, err)); // server re-validates weights
      }
    });

    work.append(labeled("Assessment", assessment), labeled("Weight", weight), indicator);
    work.append(table(["Student", "Name", "Score"], rows));
    work.append(submit);
  });
};

export const classListScreen: Screen = async (ctx) => {
  ctx.container.append(el("h2", {}, ["Class List"]));
  const { unit, campus, holder } = offeringKeyInputs();
  const go = el("button", {}, ["Show"]);
  const result = el("div");
  go.addEventListener("click", async () => {
    clear(result);
    try {
      const rows = await ctx.api.classList(unit.value, campus.value, ctx.term);
      result.append(table(["Student", "Name"], rows.map((r) => [r.student, r.name])));
    } catch (err) {
      result.append(errorBanner(ctx, err));
    }
  });
  ctx.container.append(holder, go, result);
};

export const hrScreen: Screen = async (ctx) => {
  ctx.container.append(el("h2", {}, ["HR"]));
  ctx.container.append(el("p", {}, ["Human-resources matters live in the institute's HR system."]));
  ctx.container.append(el("a", { href: "/api/hr", class: "external" }, ["Open the HR system"]));
};

export function academicScreens(): Record<string, Screen> {
  return {
    profile: profileScreen,
    enrolment: staffEnrolmentScreen,
    "student-details": studentDetailsScreen,
    "coursework-submit": courseworkSubmitScreen,
    classlist: classListScreen,
    hr: hrScreen,
  };
}
