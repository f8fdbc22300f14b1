import type {
  BankRecord,
  Question,
  ValidatedBatch,
  ValidationReport,
} from "../src/types";

export function question(id = "q-1", overrides: Partial<Question> = {}): Question {
  return {
    id,
    stem: "What is the exact value of $\\sin\\left(\\frac{\\pi}{6}\\right)$?",
    options: [
      { id: "A", latex: "\\frac{1}{2}", feedback: "Correct.", is_correct: true },
      { id: "B", latex: "-\\frac{1}{2}", feedback: "Sign error.", is_correct: false },
      { id: "C", latex: "\\frac{\\sqrt{3}}{2}", feedback: "Cofunction.", is_correct: false },
      { id: "D", latex: "2", feedback: "Reciprocal.", is_correct: false },
    ],
    correct_option_id: "A",
    topic: "trigonometry",
    difficulty: "medium",
    distractor_strategies: [],
    provenance: "mock",
    created_at: 0,
    ...overrides,
  };
}

export function report(
  id = "q-1",
  overrides: Partial<ValidationReport> = {},
): ValidationReport {
  return {
    question_id: id,
    structural_issues: [],
    option_verdicts: {
      B: { verdict: "distinct", reason: "", exact: null },
      C: { verdict: "distinct", reason: "", exact: null },
      D: { verdict: "distinct", reason: "", exact: null },
    },
    uniqueness: { kind: "unique", option_ids: [] },
    feedback_ok: true,
    disposition: "accept",
    reasons: [],
    key_latex: "\\frac{1}{2}",
    ...overrides,
  };
}

export function batch(ids: string[]): ValidatedBatch {
  return {
    accepted: ids.map((id) => ({ question: question(id), report: report(id) })),
    rejected: [],
    attempts_used: 1,
    attempts: [{ attempt: 1, prompt_metadata: {} }],
  };
}

export function bankRecord(
  id: string,
  status: BankRecord["status"],
  note = "",
): BankRecord {
  return {
    question: question(id),
    status,
    reviewer_note: note,
    validation_report: report(id),
    prompt_metadata: {},
  };
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
