// Portal shell: login, role menu, screen switching. Views always reflect a
// completed API response; nothing is optimistically updated.

import { ApiClient, termString } from "./api.js";
import { banner, clear, el, labeled } from "./dom.js";
import { menuFor, groupOf } from "./menu.js";
import { Screen, ScreenContext } from "./screens/context.js";
import { studentScreens } from "./screens/student.js";
import { academicScreens } from "./screens/academic.js";
import { adminScreens } from "./screens/admin.js";
import { applyScreen, applicationForm } from "./screens/apply.js";

export class PortalApp {
  private screens: Record<string, Screen> = {};
  private nav: HTMLElement;
  private main: HTMLElement;
  private term = "";
  private hrUrl = "";

  constructor(private api: ApiClient, private root: HTMLElement) {
    this.nav = el("nav", { id: "nav" });
    this.main = el("main", { id: "main" });
  }

  async start(): Promise<void> {
    clear(this.root);
    this.root.append(el("header", {}, [el("h1", {}, ["FNU Campus Portal"])]), this.nav, this.main);
    await this.api.loadErrorTable().catch(() => undefined);
    const config = await this.api.config().catch(() => null);
    if (config) {
      this.term = termString(config.current_term);
      this.hrUrl = config.hr_url;
    }
    this.renderLogin();
  }

  private renderLogin(message?: string): void {
    clear(this.nav);
    clear(this.main);
    const username = el("input", { name: "username", placeholder: "user id" });
    const password = el("input", { name: "password", type: "password" });
    const status = el("div");
    if (message) status.append(banner("info", message));
    const form = el("form", { id: "login" }, [
      el("h2", {}, ["Sign in"]),
      labeled("User", username),
      labeled("Password", password),
      el("button", { type: "submit" }, ["Sign in"]),
      status,
    ]);
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      clear(status);
      try {
        await this.api.login(username.value, password.value);
        this.renderPortal();
      } catch (err) {
        status.append(banner("error", String(err)));
      }
    });
    this.main.append(form);
    const publicApply = el("div", { id: "public-apply", class: "panel" });
    applicationForm(this.api, publicApply);
    this.main.append(publicApply);
  }

  renderPortal(): void {
    const session = this.api.session!;
    const group = groupOf(session.role);
    this.screens =
      group === "academic" ? academicScreens() :
      group === "admin" ? adminScreens() :
      { ...studentScreens(), apply: applyScreen };

    clear(this.nav);
    const entries = menuFor(session.role);
    for (const entry of entries) {
      const link = el("button", { class: "nav-entry", "data-screen": entry.id }, [entry.label]);
      if (entry.id === "hr") {
        link.addEventListener("click", () => {
          window.location.href = "/api/hr"; // external redirect stub
        });
      } else {
        link.addEventListener("click", () => void this.show(entry.id));
      }
      this.nav.append(link);
    }
    const who = el("span", { class: "whoami" }, [`${session.subject} (${session.role})`]);
    const logout = el("button", { class: "logout" }, ["Sign out"]);
    logout.addEventListener("click", async () => {
      await this.api.logout().catch(() => undefined);
      this.renderLogin("Signed out.");
    });
    this.nav.append(who, logout);
    void this.show(entries[0].id === "apply" ? "profile" : entries[0].id);
  }

  async show(screenId: string): Promise<void> {
    const screen = this.screens[screenId];
    clear(this.main);
    if (!screen) {
      this.main.append(banner("error", `No screen ${screenId}.`));
      return;
    }
    const ctx: ScreenContext = {
      api: this.api,
      term: this.term,
      hrUrl: this.hrUrl,
      container: this.main,
      show: (id) => this.show(id),
    };
    try {
      await screen(ctx);
    } catch (err) {
      clear(this.main);
      this.main.append(banner("error", String(err)));
    }
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  void new PortalApp(new ApiClient(""), root).start();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
