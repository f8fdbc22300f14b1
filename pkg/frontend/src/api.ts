/** Thin typed client over the question-bank HTTP API.
 *
 * Every request is appended to `calls`, so tests can assert that UI
 * interactions either did or did not reach the server. Non-2xx responses
 * raise `ApiFault` carrying the server's taxonomy code.
 */

import type {
  BankRecord,
  ErrorBody,
  PromptSpecInput,
  RegenerateResult,
  RenderedQuestion,
  ValidatedBatch,
  ValidationReport,
  Question,
} from "./types";

export class ApiFault extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly detail: string = "",
  ) {
    super(message);
    this.name = "ApiFault";
  }
}

export interface CallRecord {
  method: string;
  path: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly calls: CallRecord[] = [];

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    this.calls.push({ method, path });
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const resp = await this.fetchFn(this.baseUrl + path, init);
    const payload = (await resp.json().catch(() => null)) as unknown;
    if (!resp.ok) {
      const err = (payload ?? {}) as Partial<ErrorBody>;
      throw new ApiFault(
        resp.status,
        err.code ?? "TransportError",
        err.message ?? `request failed with status ${resp.status}`,
        err.detail ?? "",
      );
    }
    return payload as T;
  }

  generate(
    spec: PromptSpecInput,
    opts: { backend?: string; seed?: number; fault_script?: string[] } = {},
  ): Promise<ValidatedBatch> {
    return this.request("POST", "/api/generate", { spec, ...opts });
  }

  validate(question: Question): Promise<ValidationReport> {
    return this.request("POST", "/api/validate", { question });
  }

  regenerate(
    questionId: string,
    opts: {
      difficulty?: string;
      extra_clause?: string;
      backend?: string;
      seed?: number;
      fault_script?: string[];
    } = {},
  ): Promise<RegenerateResult> {
    return this.request("POST", "/api/regenerate", { question_id: questionId, ...opts });
  }

  bank(status?: string): Promise<{ records: BankRecord[]; skipped_lines: number }> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    return this.request("GET", `/api/bank${query}`);
  }

  decide(questionId: string, decision: "approved" | "rejected", note = ""): Promise<BankRecord> {
    return this.request("POST", `/api/bank/${encodeURIComponent(questionId)}/decision`, {
      decision,
      note,
    });
  }

  render(questionId: string): Promise<RenderedQuestion> {
    return this.request("GET", `/api/questions/${encodeURIComponent(questionId)}/render`);
  }

  health(): Promise<{ status: string; version: string; bank_records: number }> {
    return this.request("GET", "/api/health");
  }
}
