/** Client-side view state for the review loop.
 *
 * The store mirrors server-confirmed facts only: a card's status changes
 * exclusively through `applyDecision`/`applyReplacement`, which callers
 * invoke with the server's response. There is no optimistic path.
 */

import type { BankRecord, Question, ValidatedBatch, ValidationReport } from "./types";

export type CardStatus = "candidate" | "approved" | "rejected";

export interface Card {
  question: Question;
  report: ValidationReport;
  status: CardStatus;
  note: string;
  /** id of the card this one replaced, when it came from regeneration */
  replaces?: string;
}

export class Store {
  private cards = new Map<string, Card>();
  private order: string[] = [];
  private listeners: (() => void)[] = [];

  subscribe(fn: () => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  list(status?: CardStatus): Card[] {
    const all = this.order
      .map((id) => this.cards.get(id))
      .filter((c): c is Card => c !== undefined);
    return status ? all.filter((c) => c.status === status) : all;
  }

  get(id: string): Card | undefined {
    return this.cards.get(id);
  }

  /** Merge a freshly generated batch; new cards start as candidates. */
  applyBatch(batch: ValidatedBatch): void {
    for (const item of batch.accepted) {
      this.put({ question: item.question, report: item.report, status: "candidate", note: "" });
    }
    this.notify();
  }

  /** Load server bank records (e.g. on page load). */
  applyBank(records: BankRecord[]): void {
    for (const record of records) {
      if (!record.validation_report) continue;
      this.put({
        question: record.question,
        report: record.validation_report,
        status: record.status,
        note: record.reviewer_note,
      });
    }
    this.notify();
  }

  /** Record a decision the server has confirmed. */
  applyDecision(record: BankRecord): void {
    const card = this.cards.get(record.question.id);
    if (!card) return;
    card.status = record.status as CardStatus;
    card.note = record.reviewer_note;
    this.notify();
  }

  /** Swap in a regenerated replacement the server has validated. */
  applyReplacement(replacedId: string, question: Question, report: ValidationReport): void {
    const at = this.order.indexOf(replacedId);
    this.cards.delete(replacedId);
    const card: Card = { question, report, status: "candidate", note: "", replaces: replacedId };
    this.cards.set(question.id, card);
    if (at >= 0) this.order[at] = question.id;
    else this.order.push(question.id);
    this.notify();
  }

  /** Only undecided candidates may be approved or rejected. */
  canDecide(id: string): boolean {
    return this.cards.get(id)?.status === "candidate";
  }

  /** Regeneration applies to rejected or validator-flagged cards, never
   * to approved ones. */
  canRegenerate(id: string): boolean {
    const card = this.cards.get(id);
    if (!card) return false;
    if (card.status === "approved") return false;
    return card.status === "rejected" || card.report.disposition !== "accept";
  }

  private put(card: Card): void {
    if (!this.cards.has(card.question.id)) this.order.push(card.question.id);
    this.cards.set(card.question.id, card);
  }
}
