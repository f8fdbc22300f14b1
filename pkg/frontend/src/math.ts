/** Client-side math typesetting of server-provided LaTeX.
 *
 * Display only: all semantic judgements (correctness, equivalence,
 * uniqueness) come from the server's validation report and are never
 * re-derived here.
 */

import katex from "katex";

export function renderMath(latex: string, displayMode = false): string {
  return katex.renderToString(latex, {
    displayMode,
    throwOnError: false,
    output: "htmlAndMathml",
  });
}

/** Strict variant used by tests: a typesetting error throws. */
export function renderMathStrict(latex: string, displayMode = false): string {
  return katex.renderToString(latex, {
    displayMode,
    throwOnError: true,
    strict: "error",
    output: "htmlAndMathml",
  });
}

/** Typeset the $...$ inline-math segments of a question stem, escaping
 * the plain-text parts. Unterminated `$` is left as literal text. */
export function renderStem(stem: string, render: (latex: string) => string = renderMath): string {
  const parts: string[] = [];
  let rest = stem;
  for (;;) {
    const open = rest.indexOf("$");
    if (open < 0) break;
    const close = rest.indexOf("$", open + 1);
    if (close < 0) break;
    parts.push(escapeHtml(rest.slice(0, open)));
    parts.push(render(rest.slice(open + 1, close)));
    rest = rest.slice(close + 1);
  }
  parts.push(escapeHtml(rest));
  return parts.join("");
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
