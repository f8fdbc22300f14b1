/** Map a server validation report to display badges.
 *
 * Pure projection: every badge is read off the report verbatim; nothing
 * is recomputed client-side.
 */

import type { ValidationReport } from "./types";

export type BadgeTone = "ok" | "warn" | "error";

export interface Badge {
  kind: string;
  label: string;
  tone: BadgeTone;
}

const UNIQUENESS_BADGES: Record<string, Badge> = {
  unique: { kind: "unique", label: "Unique key", tone: "ok" },
  duplicate_key: { kind: "duplicate_key", label: "Duplicate key", tone: "error" },
  no_correct: { kind: "no_correct", label: "No correct option", tone: "error" },
  inconclusive: { kind: "inconclusive", label: "Inconclusive", tone: "warn" },
};

export function badgesFor(report: ValidationReport): Badge[] {
  const badges: Badge[] = [];
  const uniq = UNIQUENESS_BADGES[report.uniqueness.kind];
  if (uniq) {
    const ids = report.uniqueness.option_ids;
    badges.push(ids.length ? { ...uniq, label: `${uniq.label} (${ids.join(", ")})` } : uniq);
  }
  if (!report.feedback_ok) {
    badges.push({ kind: "feedback", label: "Feedback issues", tone: "error" });
  }
  for (const issue of report.structural_issues) {
    badges.push({ kind: "structural", label: issue, tone: "error" });
  }
  const inconclusive = Object.entries(report.option_verdicts)
    .filter(([, v]) => v.verdict === "inconclusive")
    .map(([id]) => id);
  if (report.uniqueness.kind !== "inconclusive" && inconclusive.length) {
    badges.push({
      kind: "inconclusive_options",
      label: `Inconclusive options (${inconclusive.join(", ")})`,
      tone: "warn",
    });
  }
  return badges;
}

export function dispositionBadge(report: ValidationReport): Badge {
  switch (report.disposition) {
    case "accept":
      return { kind: "disposition", label: "Accepted by validator", tone: "ok" };
    case "human_review":
      return { kind: "disposition", label: "Needs human review", tone: "warn" };
    case "regenerate":
      return { kind: "disposition", label: "Flagged for regeneration", tone: "error" };
  }
}
