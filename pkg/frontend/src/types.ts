/** Shapes of the JSON bodies served by the question-bank API. */

export interface QuestionOption {
  id: string;
  latex: string;
  feedback: string;
  is_correct: boolean;
}

export interface Question {
  id: string;
  stem: string;
  options: QuestionOption[];
  correct_option_id: string;
  topic: string | null;
  difficulty: string | null;
  distractor_strategies: string[];
  provenance: string | null;
  created_at: number;
}

export interface OptionVerdict {
  verdict: "equivalent" | "distinct" | "inconclusive";
  reason: string;
  exact: string | null;
}

export interface Uniqueness {
  kind: "unique" | "duplicate_key" | "no_correct" | "inconclusive";
  option_ids: string[];
}

export interface ValidationReport {
  question_id: string;
  structural_issues: string[];
  option_verdicts: Record<string, OptionVerdict>;
  uniqueness: Uniqueness;
  feedback_ok: boolean;
  disposition: "accept" | "regenerate" | "human_review";
  reasons: string[];
  key_latex: string;
}

export interface BatchItem {
  question: Question;
  report: ValidationReport;
}

export interface ValidatedBatch {
  accepted: BatchItem[];
  rejected: { question: Question | Record<string, unknown>; reason: string }[];
  attempts_used: number;
  attempts: { attempt: number; prompt_metadata: Record<string, unknown> }[];
}

export interface BankRecord {
  question: Question;
  status: "candidate" | "approved" | "rejected";
  reviewer_note: string;
  validation_report: ValidationReport | null;
  prompt_metadata: Record<string, unknown> | null;
}

export interface PromptSpecInput {
  topic: string;
  count?: number;
  function_constraints?: string[];
  difficulty?: string;
  distractor_strategies?: string[];
  extra_clauses?: string[];
}

export interface RegenerateResult {
  question: Question;
  report: ValidationReport;
  replaces: string;
}

export interface RenderedOption {
  id: string;
  latex: string;
  feedback: string;
  is_correct: boolean;
}

export interface RenderedQuestion {
  id: string;
  stem: string;
  options: RenderedOption[];
  status: string;
  validation_report: ValidationReport | null;
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: string;
}
