import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, Session } from "../src/api.js";
import { courseworkSubmitScreen } from "../src/screens/academic.js";
import { ScreenContext } from "../src/screens/context.js";
import { ERROR_TABLE, FakeGateway, mount, settle } from "./fakegateway.js";

function teacherClient(gateway: FakeGateway): ApiClient {
  const api = new ApiClient("", gateway.fetch);
  api.session = { token: "t", subject: "LEC1", role: "lecturer", expires_at: 0 } as Session;
  api.token = "t";
  api.errorTable = { ...ERROR_TABLE };
  return api;
}

describe("coursework submission", () => {
  let gateway: FakeGateway;
  let ctx: ScreenContext;

  beforeEach(async () => {
    document.body.innerHTML = "";
    gateway = new FakeGateway();
    gateway.on("GET", "/api/offerings/CS100~Suva~2024-1/classlist", {
      body: [{ student: "S1", name: "Alice" }, { student: "S2", name: "Bob" }],
    });
    gateway.on("POST", "/api/coursework", { body: true });
    ctx = { api: teacherClient(gateway), term: "2024-1", hrUrl: "", container: mount(), show: async () => {} };
    await courseworkSubmitScreen(ctx);
    const inputs = ctx.container.querySelectorAll("input");
    (inputs[0] as HTMLInputElement).value = "CS100";
    (inputs[1] as HTMLInputElement).value = "Suva";
    (ctx.container.querySelectorAll("button")[0] as HTMLButtonElement).click();
    await settle();
  });

  function weightInput(): HTMLInputElement {
    return ctx.container.querySelector('input[type="number"][max="100"]') as HTMLInputElement;
  }

  function submitButton(): HTMLButtonElement {
    const buttons = Array.from(ctx.container.querySelectorAll("button"));
    return buttons.find((b) => b.textContent === "Submit coursework") as HTMLButtonElement;
  }

  it("renders the class list with per-student score entry", () => {
    expect(ctx.container.textContent).toContain("Alice");
    expect(ctx.container.textContent).toContain("Bob");
  });

  it("weight sum over 100 disables submission with an indicator", async () => {
    const weight = weightInput();
    weight.value = "110";
    weight.dispatchEvent(new Event("input"));
    await settle();
    expect(submitButton().disabled).toBe(true);
    const indicator = ctx.container.querySelector(".weight-indicator") as HTMLElement;
    expect(indicator.className).toContain("over");
    expect(indicator.textContent).toContain("110 / 100");
  });

  it("session total accumulates so a later overflow is blocked client-side", async () => {
    const weight = weightInput();
    weight.value = "60";
    weight.dispatchEvent(new Event("input"));
    submitButton().click();
    await settle();
    expect(gateway.mutations()).toHaveLength(1);
    weight.value = "50";
    weight.dispatchEvent(new Event("input"));
    await settle();
    expect(submitButton().disabled).toBe(true); // 60 + 50 > 100, blocked before any request
    expect(gateway.mutations()).toHaveLength(1);
  });
});
