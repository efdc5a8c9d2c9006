// Live UI suite: drives the real portal DOM against a running deployment.
//
//   FNUCIS_BASE_URL=http://127.0.0.1:18080 npm test
//
// Expects a freshly seeded store (fixtures/demo.tsv): the admin account is
// root/root-password, S900/pw-900 is a student with CS100 unpassed, and
// LEC1/lec-pw teaches. Skipped entirely when FNUCIS_BASE_URL is unset.

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import { ApiClient } from "../src/api.js";
import { PortalApp } from "../src/app.js";

const BASE = process.env.FNUCIS_BASE_URL ?? "";

const fixture = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "menus.json"), "utf-8"),
) as Record<string, string[]>;

function mountApp(): { app: PortalApp; api: ApiClient; root: HTMLElement } {
  const root = document.createElement("div");
  document.body.append(root);
  const api = new ApiClient(BASE);
  return { app: new PortalApp(api, root), api, root };
}

async function login(username: string, password: string) {
  const { app, api, root } = mountApp();
  await app.start();
  (root.querySelector('input[name="username"]') as HTMLInputElement).value = username;
  (root.querySelector('input[name="password"]') as HTMLInputElement).value = password;
  const form = root.querySelector("form#login") as HTMLFormElement;
  form.dispatchEvent(new Event("submit", { cancelable: true }));
  await new Promise((resolve) => setTimeout(resolve, 400));
  return { app, api, root };
}

function navLabels(root: HTMLElement): string[] {
  return Array.from(root.querySelectorAll("button.nav-entry")).map((n) => n.textContent ?? "");
}

describe.skipIf(!BASE)("live portal flows", () => {
  it("admin login shows the administration menu and the applications queue", async () => {
    const { app, api, root } = await login("root", "root-password");
    expect(api.session?.role).toBe("academic_services");
    expect(navLabels(root)).toEqual(fixture.admin);
    await app.show("applications");
    expect(root.textContent).toContain("Applications");
  });

  it("academic login shows the academic menu", async () => {
    const { api, root } = await login("LEC1", "lec-pw");
    expect(api.session?.role).toBe("lecturer");
    expect(navLabels(root)).toEqual(fixture.academic);
  });

  it("student login shows the student menu", async () => {
    const { api, root } = await login("S900", "pw-900");
    expect(api.session?.role).toBe("student");
    expect(navLabels(root)).toEqual(fixture.student);
  });

  it("enrolling without the prerequisite shows the failure banner", async () => {
    const { app, root } = await login("S900", "pw-900");
    await app.show("enrollment");
    await new Promise((resolve) => setTimeout(resolve, 300));
    const rows = Array.from(root.querySelectorAll("tbody tr"));
    const cs101 = rows.find((row) => row.textContent?.includes("CS101"));
    expect(cs101, "CS101 offering should be listed").toBeTruthy();
    (cs101!.querySelector("button.enroll") as HTMLButtonElement).click();
    await new Promise((resolve) => setTimeout(resolve, 400));
    const bannerNode = root.querySelector(".banner-error") as HTMLElement;
    expect(bannerNode).toBeTruthy();
    expect(bannerNode.dataset.code).toBe("prereq-unmet");
    expect(bannerNode.textContent).toContain("CS100");
  });

  it("an admin can approve a fresh application from the queue", async () => {
    const applicant = `Live Test ${Date.now()}`;
    const publicApi = new ApiClient(BASE);
    const application = await publicApi.submitApplication(applicant, "live-pw", "BA", {});
    const { app, root } = await login("root", "root-password");
    await app.show("applications");
    await new Promise((resolve) => setTimeout(resolve, 400));
    const row = Array.from(root.querySelectorAll("tbody tr"))
      .find((r) => r.textContent?.includes(application.id));
    expect(row, `queue should list ${application.id}`).toBeTruthy();
    (row!.querySelector("button.approve") as HTMLButtonElement).click();
    await new Promise((resolve) => setTimeout(resolve, 400));
    expect(root.querySelector(".banner-success")?.textContent).toContain(application.id);
  });
});
