// Keyboard-first bindings. Moves always act on an edge sentence of the
// selected row: , . shift the abridged side, < > the original side.

import type { Side } from "./api.js";

export type Action =
  | { kind: "nav"; delta: 1 | -1 }
  | { kind: "next-flagged" }
  | { kind: "approve" }
  | { kind: "toggle-filter" }
  | { kind: "refresh" }
  | { kind: "move"; side: Side; direction: "prev" | "next" };

export interface KeyStroke {
  key: string;
  ctrlKey?: boolean;
  metaKey?: boolean;
  altKey?: boolean;
}

const BINDINGS: Record<string, Action> = {
  j: { kind: "nav", delta: 1 },
  ArrowDown: { kind: "nav", delta: 1 },
  k: { kind: "nav", delta: -1 },
  ArrowUp: { kind: "nav", delta: -1 },
  f: { kind: "next-flagged" },
  a: { kind: "approve" },
  v: { kind: "toggle-filter" },
  r: { kind: "refresh" },
  ",": { kind: "move", side: "abridged", direction: "prev" },
  ".": { kind: "move", side: "abridged", direction: "next" },
  "<": { kind: "move", side: "original", direction: "prev" },
  ">": { kind: "move", side: "original", direction: "next" },
};

export const KEY_HELP =
  "j/k rows · f next flagged · a approve · , . move abridged · < > move original · v flagged view · r refresh";

export function actionForKey(stroke: KeyStroke): Action | null {
  if (stroke.ctrlKey || stroke.metaKey || stroke.altKey) return null;
  return BINDINGS[stroke.key] ?? null;
}
