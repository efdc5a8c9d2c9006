import { ApiClient } from "../api.js";
import { banner, clear, el, labeled } from "../dom.js";
import { Screen, errorBanner } from "./context.js";

// the one screen usable without a session: the online application form
export function applicationForm(api: ApiClient, container: HTMLElement): void {
  container.append(el("h2", {}, ["Application to Study"]));
  const name = el("input", { placeholder: "Full name" });
  const program = el("select", {});
  const password = el("input", { type: "password", placeholder: "choose a password" });
  const mobile = el("input", { placeholder: "mobile phone" });
  const postal = el("input", { placeholder: "postal address" });
  const status = el("div");
  const submit = el("button", {}, ["Submit application"]);

  void api.programs().then((programs) => {
    for (const p of programs) {
      program.append(el("option", { value: p.id }, [`${p.id}: ${p.title}`]));
    }
  }).catch(() => {
    program.append(el("option", { value: "" }, ["(programs unavailable)"]));
  });

  submit.addEventListener("click", async () => {
    clear(status);
    try {
      const application = await api.submitApplication(name.value, password.value, program.value, {
        mobile_phone: mobile.value,
        postal: postal.value,
      });
      status.append(banner("success",
        `Application ${application.id} received. You can sign in with it once approved.`));
    } catch (err) {
      status.append(banner("error", String(err)));
    }
  });

  container.append(
    labeled("Name", name), labeled("Program", program), labeled("Password", password),
    labeled("Mobile", mobile), labeled("Postal address", postal), submit, status,
  );
}

export const applyScreen: Screen = async (ctx) => {
  applicationForm(ctx.api, ctx.container);
};
