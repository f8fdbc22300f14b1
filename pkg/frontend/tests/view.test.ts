// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { Store } from "../src/state";
import { mountApp, type App } from "../src/view";
import { bankRecord, batch, jsonResponse, question, report } from "./helpers";

type Responder = (path: string, init?: RequestInit) => Response | Promise<Response>;

function makeApp(responder: Responder): App {
  const client = new ApiClient("", async (path, init) => responder(path, init));
  const root = document.createElement("div");
  document.body.replaceChildren(root);
  return mountApp(root, client, new Store());
}

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

function submitGenerate(app: App, topic: string): Promise<void> {
  app.root.querySelector<HTMLInputElement>("#topic")!.value = topic;
  app.root
    .querySelector<HTMLFormElement>("#compose")!
    .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
  return flush();
}

describe("compose-and-generate", () => {
  it("renders one candidate card per accepted question, with badges", async () => {
    const app = makeApp(() => jsonResponse(200, batch(["a", "b", "c"])));
    await submitGenerate(app, "trigonometric identities");
    const cards = app.root.querySelectorAll("#col-candidate .card");
    expect(cards).toHaveLength(3);
    const first = cards[0] as HTMLElement;
    expect(first.querySelector('[data-kind="unique"]')).not.toBeNull();
    expect(first.querySelectorAll(".katex").length).toBeGreaterThan(0);
  });

  it("blocks an empty topic client-side without a network call", async () => {
    const app = makeApp(() => jsonResponse(200, batch(["a"])));
    await submitGenerate(app, "   ");
    expect(app.client.calls).toHaveLength(0);
    expect(app.root.querySelector<HTMLElement>("#banner")!.hidden).toBe(false);
  });

  it("shows the taxonomy code in the error banner on backend exhaustion", async () => {
    const app = makeApp(() =>
      jsonResponse(502, { code: "BackendExhausted", message: "gave up", detail: "" }),
    );
    await submitGenerate(app, "trig");
    const banner = app.root.querySelector<HTMLElement>("#banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("BackendExhausted");
  });
});

describe("decide", () => {
  it("moves the card only after the server confirms", async () => {
    let release!: () => void;
    const gate = new Promise<void>((resolve) => (release = resolve));
    const app = makeApp(async (path) => {
      if (path.includes("/decision")) {
        await gate;
        return jsonResponse(200, bankRecord("a", "approved", "nice"));
      }
      return jsonResponse(200, batch(["a"]));
    });
    await submitGenerate(app, "trig");
    const card = app.root.querySelector<HTMLElement>("#col-candidate .card")!;
    card.querySelector<HTMLInputElement>(".note-input")!.value = "nice";
    card.querySelectorAll("button")[0]!.click(); // Approve
    await flush();
    // server has not answered yet: no optimistic move
    expect(app.root.querySelectorAll("#col-approved .card")).toHaveLength(0);
    expect(app.store.get("a")!.status).toBe("candidate");
    release();
    await flush();
    expect(app.root.querySelectorAll("#col-approved .card")).toHaveLength(1);
    expect(app.root.querySelector("#col-approved .note")!.textContent).toContain("nice");
  });

  it("shows a conflict banner on a double decision", async () => {
    const app = makeApp((path) => {
      if (path.includes("/decision")) {
        return jsonResponse(409, { code: "Conflict", message: "already approved", detail: "" });
      }
      return jsonResponse(200, batch(["a"]));
    });
    await submitGenerate(app, "trig");
    app.root.querySelectorAll<HTMLButtonElement>("#col-candidate .card button")[0]!.click();
    await flush();
    const banner = app.root.querySelector<HTMLElement>("#banner")!;
    expect(banner.textContent).toContain("Conflict");
    expect(app.store.get("a")!.status).toBe("candidate");
  });
});

describe("tune-and-regenerate", () => {
  it("offers regeneration on rejected cards and swaps in the replacement", async () => {
    const app = makeApp((path) => {
      if (path.includes("/decision")) return jsonResponse(200, bankRecord("a", "rejected"));
      if (path.includes("/regenerate")) {
        return jsonResponse(200, {
          question: question("a2"),
          report: report("a2"),
          replaces: "a",
        });
      }
      return jsonResponse(200, batch(["a"]));
    });
    await submitGenerate(app, "trig");
    // reject first (second button on the candidate card)
    app.root.querySelectorAll<HTMLButtonElement>("#col-candidate .card button")[1]!.click();
    await flush();
    const rejected = app.root.querySelector<HTMLElement>("#col-rejected .card")!;
    const regen = rejected.querySelector<HTMLButtonElement>("button.regen")!;
    regen.click();
    await flush();
    expect(app.store.get("a2")!.replaces).toBe("a");
    expect(app.root.querySelectorAll("#col-candidate .card")).toHaveLength(1);
    const regenCall = app.client.calls.find((c) => c.path === "/api/regenerate");
    expect(regenCall).toBeDefined();
  });

  it("never offers regeneration on an approved card", async () => {
    const app = makeApp((path) => {
      if (path.includes("/decision")) return jsonResponse(200, bankRecord("a", "approved"));
      return jsonResponse(200, batch(["a"]));
    });
    await submitGenerate(app, "trig");
    app.root.querySelectorAll<HTMLButtonElement>("#col-candidate .card button")[0]!.click();
    await flush();
    const approved = app.root.querySelector<HTMLElement>("#col-approved .card")!;
    expect(approved.querySelector("button.regen")).toBeNull();
    expect(app.store.canRegenerate("a")).toBe(false);
  });
});

describe("network discipline", () => {
  it("issues no state-changing request without an explicit action", async () => {
    const app = makeApp(() => jsonResponse(200, batch(["a"])));
    await submitGenerate(app, "trig");
    const before = app.client.calls.length;
    // re-render churn: poke the store observer without any user action
    app.store.applyBank([]);
    await flush();
    expect(app.client.calls.length).toBe(before);
    expect(app.client.calls.every((c) => c.path === "/api/generate")).toBe(true);
  });
});
