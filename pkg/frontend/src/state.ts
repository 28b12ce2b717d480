// Pure view state. Row data only ever enters through withRows, i.e. from
// a confirmed server response; everything else is cursor and chrome.

import type { ChapterSummary, RowView } from "./api.js";

export type Filter = "all" | "flagged";

export interface AppState {
  chapters: ChapterSummary[];
  chapterId: string | null;
  rows: RowView[];
  filter: Filter;
  /** Index into visibleRows(state), -1 when nothing is visible. */
  cursor: number;
  error: string | null;
  busy: boolean;
}

export function initialState(): AppState {
  return {
    chapters: [],
    chapterId: null,
    rows: [],
    filter: "all",
    cursor: -1,
    error: null,
    busy: false,
  };
}

export function validatedCount(rows: RowView[]): number {
  return rows.filter((r) => r.validated).length;
}

/** Flagged rows still awaiting a validator's approve. */
export function flaggedRemaining(rows: RowView[]): number {
  return rows.filter((r) => r.flagged && !r.validated).length;
}

/** Rows shown under the current filter. The flagged filter keeps each
 * flagged row's direct neighbors as context. */
export function visibleRows(state: AppState): RowView[] {
  if (state.filter === "all") return state.rows;
  const keep = new Set<number>();
  state.rows.forEach((row, i) => {
    if (!row.flagged) return;
    if (i > 0) keep.add(i - 1);
    keep.add(i);
    if (i + 1 < state.rows.length) keep.add(i + 1);
  });
  return state.rows.filter((_, i) => keep.has(i));
}

/** True when the row appears in the flagged view only as a neighbor. */
export function isContext(state: AppState, row: RowView): boolean {
  return state.filter === "flagged" && !row.flagged;
}

export function currentRow(state: AppState): RowView | null {
  const visible = visibleRows(state);
  return state.cursor >= 0 && state.cursor < visible.length ? visible[state.cursor] : null;
}

function clampCursor(state: AppState): AppState {
  const count = visibleRows(state).length;
  const cursor = count === 0 ? -1 : Math.min(Math.max(state.cursor, 0), count - 1);
  return { ...state, cursor };
}

export function moveCursor(state: AppState, delta: number): AppState {
  return clampCursor({ ...state, cursor: state.cursor + delta });
}

/** Advance to the next unvalidated flagged row after the cursor, wrapping. */
export function jumpNextFlagged(state: AppState): AppState {
  const visible = visibleRows(state);
  if (visible.length === 0) return state;
  for (let step = 1; step <= visible.length; step++) {
    const i = (state.cursor + step + visible.length) % visible.length;
    if (visible[i].flagged && !visible[i].validated) return { ...state, cursor: i };
  }
  return state;
}

/** Replace row state with a server response, keeping the cursor sane. */
export function withRows(state: AppState, rows: RowView[]): AppState {
  return clampCursor({ ...state, rows, error: null });
}

export function withChapter(state: AppState, chapterId: string, rows: RowView[]): AppState {
  return clampCursor({ ...state, chapterId, rows, cursor: 0, error: null });
}

export function withError(state: AppState, message: string): AppState {
  return { ...state, error: message };
}

export function toggleFilter(state: AppState): AppState {
  const filter: Filter = state.filter === "all" ? "flagged" : "all";
  return clampCursor({ ...state, filter, cursor: 0 });
}
