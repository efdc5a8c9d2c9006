import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, Session } from "../src/api.js";
import { applicationsScreen, graduationsScreen } from "../src/screens/admin.js";
import { ScreenContext } from "../src/screens/context.js";
import { ERROR_TABLE, FakeGateway, mount, settle } from "./fakegateway.js";

function adminClient(gateway: FakeGateway): ApiClient {
  const api = new ApiClient("", gateway.fetch);
  api.session = { token: "t", subject: "root", role: "academic_services", expires_at: 0 } as Session;
  api.token = "t";
  api.errorTable = { ...ERROR_TABLE };
  return api;
}

function ctxFor(api: ApiClient): ScreenContext {
  return { api, term: "2024-1", hrUrl: "", container: mount(), show: async () => {} };
}

const PENDING_APP = {
  id: "A0001", name: "Alice", program: "BSC", status: "pending",
  contact: { postal: "", residential: "", home_phone: "", mobile_phone: "" },
  decided_by: null, decided_term: null, student: null,
};

describe("admin decision queues", () => {
  let gateway: FakeGateway;

  beforeEach(() => {
    document.body.innerHTML = "";
    gateway = new FakeGateway();
  });

  it("approving an application empties the row and reports success", async () => {
    let decided = false;
    gateway.on("GET", "/api/applications?status=pending",
               () => ({ status: 200, body: decided ? [] : [PENDING_APP] }));
    gateway.on("POST", "/api/applications/A0001/decision", () => {
      decided = true;
      return { status: 200, body: { ...PENDING_APP, status: "approved", student: "S0001" } };
    });
    const ctx = ctxFor(adminClient(gateway));
    await applicationsScreen(ctx);
    await settle();
    expect(ctx.container.textContent).toContain("Alice");
    (ctx.container.querySelector("button.approve") as HTMLButtonElement).click();
    await settle();
    expect(ctx.container.querySelector(".banner-success")?.textContent).toContain("A0001");
    expect(ctx.container.textContent).toContain("Nothing pending");
  });

  it("ineligible graduations have a disabled approve button", async () => {
    gateway.on("GET", "/api/graduation?status=pending", {
      body: [
        { id: "G1", student: "S1", name: "Alice", status: "pending", eligible: false,
          missing: ["CS101"] },
        { id: "G2", student: "S2", name: "Bob", status: "pending", eligible: true, missing: [] },
      ],
    });
    const ctx = ctxFor(adminClient(gateway));
    await graduationsScreen(ctx);
    await settle();
    const buttons = Array.from(ctx.container.querySelectorAll("button.approve")) as HTMLButtonElement[];
    expect(buttons).toHaveLength(2);
    expect(buttons[0].disabled).toBe(true);   // ineligible row
    expect(buttons[1].disabled).toBe(false);
    expect(ctx.container.textContent).toContain("CS101"); // missing units shown
  });

  it("a second decision on the same row refreshes to its decided state", async () => {
    let calls = 0;
    gateway.on("GET", "/api/applications?status=pending",
               () => ({ status: 200, body: calls >= 2 ? [] : [PENDING_APP] }));
    gateway.on("POST", "/api/applications/A0001/decision", () => {
      calls += 1;
      if (calls === 1) return { status: 200, body: { ...PENDING_APP, status: "approved" } };
      return { status: 409, body: { code: "already-decided", message: "application A0001 is approved" } };
    });
    const ctx = ctxFor(adminClient(gateway));
    await applicationsScreen(ctx);
    await settle();
    const approve = ctx.container.querySelector("button.approve") as HTMLButtonElement;
    approve.click();          // first decision wins but the fake still shows the row once
    await settle();
    // simulate the second admin racing on a stale row
    calls = 1;
    await applicationsScreen(ctxFor(adminClient(gateway)));
    const stale = document.querySelectorAll("button.approve");
    (stale[stale.length - 1] as HTMLButtonElement).click();
    await settle();
    const infos = Array.from(document.querySelectorAll(".banner-info")).map((n) => n.textContent);
    expect(infos.some((t) => t?.includes(ERROR_TABLE["already-decided"]))).toBe(true);
    expect(document.body.textContent).toContain("Nothing pending");
  });
});
