import { Contact, Invoice, Offering, termString } from "../api.js";
import { banner, clear, dollars, el, labeled, table } from "../dom.js";
import { Screen, ScreenContext, errorBanner } from "./context.js";

function contactForm(initial: Contact, onSave: (contact: Contact) => Promise<void>): HTMLElement {
  const fields: (keyof Contact)[] = ["postal", "residential", "home_phone", "mobile_phone"];
  const labels: Record<string, string> = {
    postal: "Postal address",
    residential: "Residential address",
    home_phone: "Home phone",
    mobile_phone: "Mobile phone",
  };
  const inputs = new Map<string, HTMLInputElement>();
  const form = el("form", { class: "panel" });
  for (const field of fields) {
    const input = el("input", { name: field, value: initial[field] ?? "" });
    inputs.set(field, input);
    form.append(labeled(labels[field], input));
  }
  const status = el("div");
  const save = el("button", { type: "submit" }, ["Save"]);
  form.append(save, status);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    clear(status);
    const contact = Object.fromEntries(
      fields.map((f) => [f, inputs.get(f)!.value]),
    ) as unknown as Contact;
    try {
      await onSave(contact);
      status.append(banner("success", "Profile updated."));
    } catch (err) {
      status.append(banner("error", String(err)));
    }
  });
  return form;
}

export const profileScreen: Screen = async (ctx) => {
  const me = ctx.api.session!.subject;
  const profile = await ctx.api.profile(me);
  ctx.container.append(el("h2", {}, ["Profile"]));
  const facts: string[][] = [["Id", profile.id], ["Name", profile.name], ["Role", profile.role]];
  if (profile.program) facts.push(["Program", profile.program]);
  if (profile.major) facts.push(["Major", profile.major]);
  if (profile.status) facts.push(["Status", profile.status]);
  ctx.container.append(table(["Field", "Value"], facts));
  ctx.container.append(contactForm(profile.contact, (contact) => ctx.api.updateProfile(me, contact).then(() => undefined)));
};

export const programDetailsScreen: Screen = async (ctx) => {
  const me = ctx.api.session!.subject;
  const rows = await ctx.api.requirements(me);
  ctx.container.append(el("h2", {}, ["Program Details"]));
  ctx.container.append(
    table(["Unit", "Completed"], rows.map((r) => [r.unit, r.completed ? "yes" : "not yet"])),
  );
};

export const graduationScreen: Screen = async (ctx) => {
  const me = ctx.api.session!.subject;
  const eligibility = await ctx.api.eligibility(me);
  ctx.container.append(el("h2", {}, ["Graduation"]));
  ctx.container.append(
    eligibility.eligible
      ? banner("success", "You meet all program requirements.")
      : banner("info", `Still required: ${eligibility.missing.join(", ")}`),
  );
  const status = el("div");
  const apply = el("button", {}, ["Apply for graduation"]);
  apply.addEventListener("click", async () => {
    clear(status);
    try {
      await ctx.api.applyGraduation();
      status.append(banner("success", "Graduation application submitted."));
    } catch (err) {
      status.append(errorBanner(ctx, err));
    }
  });
  ctx.container.append(apply, status);
};

function invoicePanel(invoices: Invoice[]): HTMLElement {
  const rows = invoices.flatMap((invoice) =>
    invoice.lines.map((line) => [invoice.id, line.description, dollars(line.amount_cents)]),
  );
  for (const invoice of invoices) {
    rows.push([invoice.id, "total / paid", `${dollars(invoice.total_cents)} / ${dollars(invoice.paid_cents)}`]);
  }
  return table(["Invoice", "Item", "Amount"], rows);
}

export const enrollmentScreen: Screen = async (ctx) => {
  const me = ctx.api.session!.subject;
  ctx.container.append(el("h2", {}, [`Enrollment (${ctx.term})`]));
  const status = el("div");
  const timetablePanel = el("div", { class: "panel" });
  const financePanel = el("div", { class: "panel" });
  const offeringsPanel = el("div", { class: "panel" });
  ctx.container.append(status, offeringsPanel, timetablePanel, financePanel);

  const refreshSidePanels = async () => {
    clear(timetablePanel);
    clear(financePanel);
    const [entries, invoices] = await Promise.all([
      ctx.api.timetable(me, ctx.term),
      ctx.api.invoices(),
    ]);
    timetablePanel.append(el("h3", {}, ["My timetable"]));
    timetablePanel.append(table(
      ["Unit", "Kind", "Day", "Time", "Room"],
      entries.map((t) => [t.unit, t.kind, t.day, `${t.start}-${t.end}`, t.room]),
    ));
    financePanel.append(el("h3", {}, ["My invoices"]));
    financePanel.append(invoicePanel(invoices));
  };

  const renderOfferings = (offerings: Offering[]) => {
    clear(offeringsPanel);
    offeringsPanel.append(el("h3", {}, ["Active offerings"]));
    const rows = offerings.map((offering) => {
      const button = el("button", { class: "enroll" }, ["Enroll"]);
      button.addEventListener("click", async () => {
        clear(status);
        try {
          await ctx.api.enroll(me, offering.unit, offering.campus, termString(offering.term));
          status.append(banner("success", `Enrolled in ${offering.unit} at ${offering.campus}.`));
          await refreshSidePanels(); // success refreshes timetable and invoices
        } catch (err) {
          status.append(errorBanner(ctx, err)); // list stays as it was
        }
      });
      return [offering.unit, offering.campus, offering.teacher ?? "", button] as (string | Node)[];
    });
    offeringsPanel.append(table(["Unit", "Campus", "Teacher", ""], rows));
  };

  renderOfferings(await ctx.api.offerings(ctx.term));
  await refreshSidePanels();
};

export const timetableScreen: Screen = async (ctx) => {
  const me = ctx.api.session!.subject;
  const entries = await ctx.api.timetable(me, ctx.term);
  ctx.container.append(el("h2", {}, [`Timetable (${ctx.term})`]));
  ctx.container.append(table(
    ["Unit", "Kind", "Day", "Start", "End", "Room"],
    entries.map((t) => [t.unit, t.kind, t.day, t.start, t.end, t.room]),
  ));
};

export const historyScreen: Screen = async (ctx) => {
  const me = ctx.api.session!.subject;
  const history = await ctx.api.history(me);
  ctx.container.append(el("h2", {}, ["Academic History"]));
  ctx.container.append(table(
    ["Unit", "Term", "Grade", "Credit points"],
    history.rows.map((r) => [r.unit, termString(r.term), r.grade, String(r.credit_points)]),
  ));
  ctx.container.append(el("p", { class: "gpa" },
    [history.gpa === null ? "No completed units yet." : `GPA: ${history.gpa}`]));
};

export const courseworkScreen: Screen = async (ctx) => {
  const me = ctx.api.session!.subject;
  const rows = await ctx.api.coursework(me, ctx.term);
  ctx.container.append(el("h2", {}, [`Course Work (${ctx.term})`]));
  ctx.container.append(table(
    ["Unit", "Assessment", "Weight", "Score"],
    rows.map((r) => [r.unit, r.assessment, String(r.weight), String(r.score)]),
  ));
};

export const financeScreen: Screen = async (ctx) => {
  ctx.container.append(el("h2", {}, ["Finance"]));
  const status = el("div");
  const panel = el("div", { class: "panel" });
  ctx.container.append(status, panel);

  const refresh = async () => {
    clear(panel);
    const invoices = await ctx.api.invoices();
    panel.append(invoicePanel(invoices));
    for (const invoice of invoices) {
      const outstanding = invoice.total_cents - invoice.paid_cents;
      if (outstanding <= 0) continue;
      const amount = el("input", { type: "number", value: String(outstanding / 100), step: "0.01" });
      const card = el("input", { placeholder: "card number" });
      const payButton = el("button", {}, [`Pay ${invoice.id}`]);
      payButton.addEventListener("click", async () => {
        clear(status);
        try {
          await ctx.api.pay(invoice.id, Math.round(Number(amount.value) * 100), card.value);
          status.append(banner("success", "Payment accepted."));
          await refresh();
        } catch (err) {
          status.append(errorBanner(ctx, err));
        }
      });
      panel.append(el("div", { class: "payrow" },
        [labeled("Amount", amount), labeled("Card", card), payButton]));
    }
  };
  await refresh();
};

export function studentScreens(): Record<string, Screen> {
  return {
    profile: profileScreen,
    "program-details": programDetailsScreen,
    graduation: graduationScreen,
    enrollment: enrollmentScreen,
    timetable: timetableScreen,
    history: historyScreen,
    coursework: courseworkScreen,
    finance: financeScreen,
  };
}
