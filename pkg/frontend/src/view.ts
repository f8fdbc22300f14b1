/** DOM rendering and event wiring for the review app.
 *
 * All mutations round-trip through the ApiClient; the view re-renders
 * from the store only after the server has answered.
 */

import { ApiClient, ApiFault } from "./api";
import { badgesFor, dispositionBadge, type Badge } from "./badges";
import { renderMath, renderStem } from "./math";
import { Store, type Card } from "./state";

export interface App {
  root: HTMLElement;
  store: Store;
  client: ApiClient;
}

export function mountApp(root: HTMLElement, client: ApiClient, store = new Store()): App {
  root.innerHTML = `
    <header><h1>Question review</h1></header>
    <section class="banner" id="banner" hidden></section>
    <form id="compose">
      <label>Topic <input name="topic" id="topic" required placeholder="trigonometric identities"></label>
      <label>Count <input name="count" id="count" type="number" min="1" max="10" value="3"></label>
      <label>Difficulty
        <select name="difficulty" id="difficulty">
          <option value="low">low</option>
          <option value="medium" selected>medium</option>
          <option value="high">high</option>
        </select>
      </label>
      <label>Functions <input name="functions" id="functions" placeholder="sine, cosine"></label>
      <label>Seed <input name="seed" id="seed" type="number" value="0"></label>
      <button type="submit" id="generate">Generate</button>
      <span id="progress" hidden>Generating…</span>
    </form>
    <main>
      <section class="column" id="col-candidate"><h2>Candidates</h2><div class="cards"></div></section>
      <section class="column" id="col-approved"><h2>Approved</h2><div class="cards"></div></section>
      <section class="column" id="col-rejected"><h2>Rejected</h2><div class="cards"></div></section>
    </main>`;

  const app: App = { root, store, client };
  store.subscribe(() => renderColumns(app));

  const form = root.querySelector<HTMLFormElement>("#compose")!;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void handleGenerate(app);
  });

  renderColumns(app);
  return app;
}

export function showBanner(root: HTMLElement, tone: "error" | "info", text: string): void {
  const banner = root.querySelector<HTMLElement>("#banner")!;
  banner.hidden = false;
  banner.className = `banner banner-${tone}`;
  banner.textContent = text;
}

function clearBanner(root: HTMLElement): void {
  const banner = root.querySelector<HTMLElement>("#banner")!;
  banner.hidden = true;
  banner.textContent = "";
}

function faultText(fault: ApiFault): string {
  const detail = fault.detail ? ` — ${fault.detail}` : "";
  return `${fault.code}: ${fault.message}${detail}`;
}

export async function handleGenerate(app: App): Promise<void> {
  const { root, client, store } = app;
  const topic = root.querySelector<HTMLInputElement>("#topic")!.value.trim();
  if (!topic) {
    showBanner(root, "error", "Topic is required.");
    return;
  }
  clearBanner(root);
  const progress = root.querySelector<HTMLElement>("#progress")!;
  progress.hidden = false;
  try {
    const functions = root
      .querySelector<HTMLInputElement>("#functions")!
      .value.split(",")
      .map((s) => s.trim())
      .filter(Boolean);
    const batch = await client.generate(
      {
        topic,
        count: Number(root.querySelector<HTMLInputElement>("#count")!.value || "3"),
        difficulty: root.querySelector<HTMLSelectElement>("#difficulty")!.value,
        function_constraints: functions,
      },
      {
        backend: "mock",
        seed: Number(root.querySelector<HTMLInputElement>("#seed")!.value || "0"),
      },
    );
    store.applyBatch(batch);
  } catch (err) {
    if (err instanceof ApiFault) showBanner(root, "error", faultText(err));
    else showBanner(root, "error", `Request failed: ${String(err)}`);
  } finally {
    progress.hidden = true;
  }
}

function renderColumns(app: App): void {
  for (const status of ["candidate", "approved", "rejected"] as const) {
    const host = app.root.querySelector<HTMLElement>(`#col-${status} .cards`)!;
    host.innerHTML = "";
    for (const card of app.store.list(status)) {
      host.appendChild(renderCard(app, card));
    }
  }
}

function badgeSpan(badge: Badge): string {
  return `<span class="badge badge-${badge.tone}" data-kind="${badge.kind}">${badge.label}</span>`;
}

function renderCard(app: App, card: Card): HTMLElement {
  const el = document.createElement("article");
  el.className = `card card-${card.status}`;
  el.dataset.questionId = card.question.id;
  const badges = [dispositionBadge(card.report), ...badgesFor(card.report)];
  const options = card.question.options
    .map((o) => {
      const marker = o.id === card.question.correct_option_id ? " (key)" : "";
      return `<li data-option-id="${o.id}">
        <strong>${o.id}${marker}</strong>
        <span class="option-math">${renderMath(o.latex)}</span>
        <p class="feedback">${renderStem(o.feedback)}</p>
      </li>`;
    })
    .join("");
  el.innerHTML = `
    <div class="stem">${renderStem(card.question.stem)}</div>
    <div class="badges">${badges.map(badgeSpan).join("")}</div>
    <ol class="options">${options}</ol>
    ${card.note ? `<p class="note">Note: ${renderStem(card.note)}</p>` : ""}
    <div class="actions"></div>`;

  const actions = el.querySelector<HTMLElement>(".actions")!;
  if (app.store.canDecide(card.question.id)) {
    const note = document.createElement("input");
    note.placeholder = "reviewer note";
    note.className = "note-input";
    const approve = button("Approve", () => void decide(app, card, "approved", note.value));
    const reject = button("Reject", () => void decide(app, card, "rejected", note.value));
    actions.append(note, approve, reject);
  }
  if (app.store.canRegenerate(card.question.id)) {
    const regen = button("Raise difficulty & regenerate", () => void regenerate(app, card));
    regen.className = "regen";
    actions.append(regen);
  }
  return el;
}

function button(label: string, onClick: () => void): HTMLButtonElement {
  const b = document.createElement("button");
  b.type = "button";
  b.textContent = label;
  b.addEventListener("click", onClick);
  return b;
}

export async function decide(
  app: App,
  card: Card,
  decision: "approved" | "rejected",
  note: string,
): Promise<void> {
  clearBanner(app.root);
  try {
    const record = await app.client.decide(card.question.id, decision, note);
    app.store.applyDecision(record);
  } catch (err) {
    if (err instanceof ApiFault && err.status === 409) {
      showBanner(app.root, "error", `Already decided — ${faultText(err)}`);
    } else if (err instanceof ApiFault) {
      showBanner(app.root, "error", faultText(err));
    } else {
      showBanner(app.root, "error", `Request failed: ${String(err)}`);
    }
  }
}

export async function regenerate(app: App, card: Card): Promise<void> {
  if (!app.store.canRegenerate(card.question.id)) return;
  clearBanner(app.root);
  try {
    const result = await app.client.regenerate(card.question.id, {
      difficulty: "high",
      backend: "mock",
      seed: Date.now() % 100000,
    });
    app.store.applyReplacement(card.question.id, result.question, result.report);
  } catch (err) {
    if (err instanceof ApiFault) showBanner(app.root, "error", faultText(err));
    else showBanner(app.root, "error", `Request failed: ${String(err)}`);
  }
}
