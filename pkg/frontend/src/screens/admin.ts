import { ApiError } from "../api.js";
import { banner, clear, el, labeled, table } from "../dom.js";
import { Screen, ScreenContext, errorBanner } from "./context.js";
import { profileScreen } from "./student.js";
import { studentDetailsScreen } from "./academic.js";

export const unitActivationScreen: Screen = async (ctx) => {
  ctx.container.append(el("h2", {}, ["Unit Activation"]));
  ctx.container.append(el("p", {}, ["Activate a unit offering for a campus and term (heads of department only)."]));
  const unit = el("input", { placeholder: "CS100" });
  const campus = el("input", { placeholder: "Suva" });
  const term = el("input", { value: ctx.term });
  const capacity = el("input", { type: "number", value: "100" });
  const teacher = el("input", { placeholder: "staff id (optional)" });
  const status = el("div");
  const submit = el("button", {}, ["Activate"]);
  submit.addEventListener("click", async () => {
    clear(status);
    try {
      await ctx.api.activateOffering(unit.value, campus.value, term.value,
                                     Number(capacity.value || 0), teacher.value || null);
      status.append(banner("success", `Activated ${unit.value} at ${campus.value} for ${term.value}.`));
    } catch (err) {
      status.append(errorBanner(ctx, err));
    }
  });
  ctx.container.append(
    labeled("Unit", unit), labeled("Campus", campus), labeled("Term", term),
    labeled("Capacity", capacity), labeled("Teacher", teacher), submit, status,
  );
};

interface QueueSpec<Row> {
  title: string;
  load(): Promise<Row[]>;
  columns: string[];
  cells(row: Row): string[];
  id(row: Row): string;
  decide(id: string, decision: "approve" | "reject"): Promise<unknown>;
  approveDisabled?(row: Row): boolean;
}

function decisionQueue<Row>(ctx: ScreenContext, spec: QueueSpec<Row>): HTMLElement {
  const root = el("div", { class: "queue" }, [el("h2", {}, [spec.title])]);
  const status = el("div");
  const holder = el("div");
  root.append(status, holder);

  const refresh = async () => {
    clear(holder);
    const rows = await spec.load();
    if (!rows.length) {
      holder.append(el("p", { class: "empty" }, ["Nothing pending."]));
      return;
    }
    const rendered = rows.map((row) => {
      const approve = el("button", { class: "approve" }, ["Approve"]);
      const reject = el("button", { class: "reject" }, ["Reject"]);
      if (spec.approveDisabled?.(row)) approve.setAttribute("disabled", "disabled");
      const act = (decision: "approve" | "reject") => async () => {
        clear(status);
        try {
          await spec.decide(spec.id(row), decision);
          status.append(banner("success", `${decision === "approve" ? "Approved" : "Rejected"} ${spec.id(row)}.`));
        } catch (err) {
          // an already-decided row just needs a refresh to its decided state
          if (!(err instanceof ApiError && err.code === "already-decided")) {
            status.append(errorBanner(ctx, err));
          } else {
            status.append(banner("info", ctx.api.bannerText(err.code, err.detail)));
          }
        }
        await refresh();
      };
      approve.addEventListener("click", act("approve"));
      reject.addEventListener("click", act("reject"));
      const actions = el("span", {}, [approve, " ", reject]);
      return [...spec.cells(row), actions] as (string | Node)[];
    });
    holder.append(table([...spec.columns, "Decision"], rendered));
  };

  void refresh();
  return root;
}

export const applicationsScreen: Screen = async (ctx) => {
  ctx.container.append(decisionQueue(ctx, {
    title: "Applications",
    load: () => ctx.api.applications("pending"),
    columns: ["Id", "Name", "Program"],
    cells: (a) => [a.id, a.name, a.program],
    id: (a) => a.id,
    decide: (id, decision) => ctx.api.decideApplication(id, decision),
  }));
};

export const graduationsScreen: Screen = async (ctx) => {
  ctx.container.append(decisionQueue(ctx, {
    title: "Graduations",
    load: () => ctx.api.graduationQueue("pending"),
    columns: ["Id", "Student", "Name", "Eligible", "Missing units"],
    cells: (g) => [g.id, g.student, g.name, g.eligible ? "yes" : "no", g.missing.join(", ")],
    id: (g) => g.id,
    decide: (id, decision) => ctx.api.decideGraduation(id, decision),
    approveDisabled: (g) => !g.eligible, // server enforces this too
  }));
};

export const programUpdateScreen: Screen = async (ctx) => {
  ctx.container.append(decisionQueue(ctx, {
    title: "Program Update",
    load: () => ctx.api.programChangeQueue("pending"),
    columns: ["Id", "Student", "New program", "New major"],
    cells: (r) => [r.id, r.student, r.new_program, r.new_major ?? ""],
    id: (r) => r.id,
    decide: (id, decision) => ctx.api.decideProgramChange(id, decision),
  }));
};

export const reportsScreen: Screen = async (ctx) => {
  ctx.container.append(el("h2", {}, ["Reports"]));
  const kind = el("select", {}, [
    el("option", { value: "enrollment_counts" }, ["Enrollment counts"]),
    el("option", { value: "pass_rates" }, ["Pass rates"]),
    el("option", { value: "application_funnel" }, ["Application funnel"]),
  ]);
  const term = el("input", { value: ctx.term });
  const go = el("button", {}, ["Run report"]);
  const result = el("div");
  go.addEventListener("click", async () => {
    clear(result);
    try {
      const report = await ctx.api.report(kind.value, term.value);
      result.append(table(report.columns, report.rows.map((r) => [...r.cells])));
    } catch (err) {
      result.append(errorBanner(ctx, err));
    }
  });
  ctx.container.append(labeled("Report", kind), labeled("Term", term), go, result);
};

export function adminScreens(): Record<string, Screen> {
  return {
    profile: profileScreen,
    "student-details": studentDetailsScreen,
    "unit-activation": unitActivationScreen,
    applications: applicationsScreen,
    graduations: graduationsScreen,
    "program-update": programUpdateScreen,
    reports: reportsScreen,
  };
}
