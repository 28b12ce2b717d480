// Full re-render of the app into its root node. The row list is small
// (one chapter at a time), so rebuilding the DOM on every state change
// is simpler and safer than patching.

import type { RowView } from "./api.js";
import { KEY_HELP } from "./keyboard.js";
import {
  AppState,
  flaggedRemaining,
  isContext,
  validatedCount,
  visibleRows,
} from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderHeader(doc: Document, state: AppState): HTMLElement {
  const header = el(doc, "header");
  header.appendChild(el(doc, "h1", undefined, "abridger review"));

  const select = el(doc, "select");
  select.id = "chapter-select";
  for (const chapter of state.chapters) {
    const option = el(doc, "option", undefined, chapter.chapter_id);
    option.value = chapter.chapter_id;
    option.selected = chapter.chapter_id === state.chapterId;
    select.appendChild(option);
  }
  header.appendChild(select);

  const progress = el(
    doc,
    "span",
    "progress",
    `validated ${validatedCount(state.rows)}/${state.rows.length}` +
      ` · flagged remaining ${flaggedRemaining(state.rows)}`,
  );
  progress.id = "progress";
  header.appendChild(progress);

  const filter = el(doc, "span", "filter", `view: ${state.filter}`);
  filter.id = "filter";
  header.appendChild(filter);
  return header;
}

function renderSentences(
  doc: Document,
  side: "original" | "abridged",
  sentences: { index: number; text: string }[],
): HTMLElement {
  const list = el(doc, "ul", side);
  if (sentences.length === 0) {
    const item = el(doc, "li", "dropped", "(nothing on this side)");
    list.appendChild(item);
    return list;
  }
  for (const sentence of sentences) {
    const item = el(doc, "li", undefined, sentence.text);
    item.dataset.side = side;
    item.dataset.sentIndex = String(sentence.index);
    list.appendChild(item);
  }
  return list;
}

function renderRow(doc: Document, state: AppState, row: RowView, selected: boolean): HTMLElement {
  const classes = ["row"];
  if (row.flagged) classes.push("flagged");
  if (row.validated) classes.push("validated");
  if (selected) classes.push("selected");
  if (isContext(state, row)) classes.push("context");
  const article = el(doc, "article", classes.join(" "));
  article.dataset.rowIndex = String(row.row_index);

  const head = el(doc, "div", "row-head");
  head.appendChild(
    el(doc, "span", "row-id", `#${row.row_index} (${row.o_len},${row.a_len})`),
  );
  head.appendChild(el(doc, "span", "score", `score ${row.score.toFixed(2)}`));
  if (row.flagged) head.appendChild(el(doc, "span", "badge flag", "flagged"));
  if (row.validated) head.appendChild(el(doc, "span", "badge ok", "validated"));
  article.appendChild(head);

  const body = el(doc, "div", "row-body");
  body.appendChild(renderSentences(doc, "original", row.o_sentences));
  body.appendChild(renderSentences(doc, "abridged", row.a_sentences));
  article.appendChild(body);
  return article;
}

export function render(root: HTMLElement, state: AppState): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  root.appendChild(renderHeader(doc, state));

  const banner = el(doc, "div", "error-banner", state.error ?? "");
  banner.id = "error";
  if (!state.error) banner.hidden = true;
  root.appendChild(banner);

  const container = el(doc, "div");
  container.id = "rows";
  const visible = visibleRows(state);
  if (visible.length === 0) {
    const empty = el(
      doc,
      "p",
      "empty-state",
      state.filter === "flagged" ? "No flagged rows remaining." : "No rows.",
    );
    empty.id = "empty-state";
    container.appendChild(empty);
  }
  visible.forEach((row, i) => {
    container.appendChild(renderRow(doc, state, row, i === state.cursor));
  });
  root.appendChild(container);

  root.appendChild(el(doc, "footer", "help", KEY_HELP));
}
