import { describe, expect, it } from "vitest";

import { badgesFor, dispositionBadge } from "../src/badges";
import { report } from "./helpers";

describe("badgesFor", () => {
  it("mirrors a clean report as a single ok badge", () => {
    const badges = badgesFor(report());
    expect(badges).toHaveLength(1);
    expect(badges[0]).toMatchObject({ kind: "unique", tone: "ok" });
  });

  it("names the offending options on a duplicate key", () => {
    const badges = badgesFor(
      report("q", { uniqueness: { kind: "duplicate_key", option_ids: ["C"] } }),
    );
    expect(badges[0]).toMatchObject({ kind: "duplicate_key", tone: "error" });
    expect(badges[0]!.label).toContain("C");
  });

  it("surfaces feedback and structural problems as error badges", () => {
    const badges = badgesFor(
      report("q", { feedback_ok: false, structural_issues: ["options B and C coincide"] }),
    );
    const kinds = badges.map((b) => b.kind);
    expect(kinds).toContain("feedback");
    expect(kinds).toContain("structural");
    expect(badges.filter((b) => b.tone === "error")).toHaveLength(2);
  });

  it("marks inconclusive sampling as a warning", () => {
    const badges = badgesFor(
      report("q", { uniqueness: { kind: "inconclusive", option_ids: ["B"] } }),
    );
    expect(badges[0]).toMatchObject({ kind: "inconclusive", tone: "warn" });
  });

  it("never invents a verdict absent from the report", () => {
    const r = report("q", {
      option_verdicts: {
        B: { verdict: "inconclusive", reason: "too few samples", exact: null },
        C: { verdict: "distinct", reason: "", exact: null },
      },
    });
    const badges = badgesFor(r);
    const inconclusive = badges.find((b) => b.kind === "inconclusive_options");
    expect(inconclusive?.label).toContain("B");
    expect(inconclusive?.label).not.toContain("C");
  });
});

describe("dispositionBadge", () => {
  it("maps the three dispositions to distinct tones", () => {
    expect(dispositionBadge(report()).tone).toBe("ok");
    expect(dispositionBadge(report("q", { disposition: "human_review" })).tone).toBe("warn");
    expect(dispositionBadge(report("q", { disposition: "regenerate" })).tone).toBe("error");
  });
});
