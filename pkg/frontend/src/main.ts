// Wire the API client, state, renderer and keyboard together. All row
// mutations go to the server first; local state changes only on the
// server's response.

import { ApiClient, ApiError, Correction, RowView } from "./api.js";
import { Action, actionForKey } from "./keyboard.js";
import { render } from "./render.js";
import {
  AppState,
  currentRow,
  initialState,
  jumpNextFlagged,
  moveCursor,
  toggleFilter,
  withChapter,
  withError,
  withRows,
} from "./state.js";

export interface BootOptions {
  baseUrl?: string;
  fetchFn?: (input: string, init?: RequestInit) => Promise<Response>;
}

export class App {
  state: AppState = initialState();
  private queue: Promise<void> = Promise.resolve();

  constructor(
    readonly root: HTMLElement,
    readonly api: ApiClient,
  ) {}

  /** Resolves once every dispatched action has finished its round trip. */
  idle(): Promise<void> {
    return this.queue;
  }

  dispatch(action: Action): Promise<void> {
    this.queue = this.queue.then(() => this.run(action));
    return this.queue;
  }

  async loadChapters(): Promise<void> {
    this.state = { ...this.state, chapters: await this.api.chapters() };
    const first = this.state.chapters[0];
    if (first) await this.openChapter(first.chapter_id);
    this.paint();
  }

  async openChapter(chapterId: string): Promise<void> {
    try {
      const rows = await this.api.rows(chapterId);
      this.state = withChapter(this.state, chapterId, rows);
    } catch (err) {
      this.state = withError(this.state, describe(err));
    }
    this.paint();
  }

  private async run(action: Action): Promise<void> {
    switch (action.kind) {
      case "nav":
        this.state = { ...this.state, error: null };
        this.state = moveCursor(this.state, action.delta);
        break;
      case "next-flagged":
        this.state = jumpNextFlagged({ ...this.state, error: null });
        break;
      case "toggle-filter":
        this.state = toggleFilter(this.state);
        break;
      case "refresh":
        if (this.state.chapterId) {
          try {
            const rows = await this.api.rows(this.state.chapterId);
            this.state = withRows(this.state, rows);
          } catch (err) {
            this.state = withError(this.state, describe(err));
          }
        }
        break;
      case "approve":
        await this.correct((row) => ({ kind: "approve", source_row: row.row_index }));
        break;
      case "move":
        await this.correct((row) => {
          const sentences = action.side === "original" ? row.o_sentences : row.a_sentences;
          const target =
            action.direction === "prev" ? row.row_index - 1 : row.row_index + 1;
          const edge =
            action.direction === "prev" ? sentences[0] : sentences[sentences.length - 1];
          if (!edge) throw new ApiError(0, `row has no ${action.side} sentence to move`);
          return {
            kind: "move_sentence",
            source_row: row.row_index,
            target_row: target,
            side: action.side,
            sent_index: edge.index,
          };
        });
        break;
    }
    this.paint();
  }

  /** Build a correction off the selected row, round-trip it, adopt the
   * server's rows. On rejection the old state stays and the reason shows. */
  private async correct(build: (row: RowView) => Correction): Promise<void> {
    const row = currentRow(this.state);
    const chapterId = this.state.chapterId;
    if (!row || !chapterId) {
      this.state = withError(this.state, "no row selected");
      return;
    }
    try {
      const correction = build(row);
      const rows = await this.api.correct(chapterId, correction);
      this.state = withRows(this.state, rows);
    } catch (err) {
      this.state = withError(this.state, describe(err));
    }
  }

  paint(): void {
    render(this.root, this.state);
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  return String(err);
}

export async function boot(root: HTMLElement, options: BootOptions = {}): Promise<App> {
  const api = new ApiClient(options.baseUrl ?? "", options.fetchFn);
  const app = new App(root, api);
  await app.loadChapters();

  const doc = root.ownerDocument;
  doc.addEventListener("keydown", (event) => {
    const target = event.target as HTMLElement | null;
    if (target && target.tagName === "SELECT") return;
    const action = actionForKey(event);
    if (action) {
      event.preventDefault();
      void app.dispatch(action);
    }
  });
  root.addEventListener("change", (event) => {
    const target = event.target as HTMLSelectElement | null;
    if (target && target.id === "chapter-select") {
      void app.openChapter(target.value);
    }
  });
  return app;
}
