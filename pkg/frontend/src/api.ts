// Typed client for the review service. Every mutation round-trips; the
// caller only ever sees server-confirmed row state.

export interface SentenceView {
  index: number;
  text: string;
}

export interface RowView {
  row_index: number;
  o_start: number;
  o_len: number;
  a_start: number;
  a_len: number;
  score: number;
  flagged: boolean;
  validated: boolean;
  o_sentences: SentenceView[];
  a_sentences: SentenceView[];
}

export interface ChapterSummary {
  chapter_id: string;
  row_count: number;
  flagged_count: number;
  validated_count: number;
}

export type Side = "original" | "abridged";

export interface Correction {
  kind: "move_sentence" | "merge_rows" | "split_row" | "approve";
  source_row: number;
  target_row?: number;
  side?: Side;
  sent_index?: number;
}

/** Server rejection or transport failure, with the server's reason when given. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchFn = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = `${response.status} ${response.statusText}`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  chapters(): Promise<ChapterSummary[]> {
    return this.request("/api/chapters");
  }

  rows(chapterId: string): Promise<RowView[]> {
    return this.request(`/api/chapters/${encodeURIComponent(chapterId)}/rows`);
  }

  async text(chapterId: string, side: Side): Promise<string> {
    const payload = await this.request<{ text: string }>(
      `/api/chapters/${encodeURIComponent(chapterId)}/text?side=${side}`,
    );
    return payload.text;
  }

  /** POST a correction; resolves to the chapter's corrected rows. */
  async correct(chapterId: string, correction: Correction): Promise<RowView[]> {
    const payload = await this.request<{ rows: RowView[] }>(
      `/api/chapters/${encodeURIComponent(chapterId)}/corrections`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(correction),
      },
    );
    return payload.rows;
  }

  async exportText(): Promise<string> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + "/api/export");
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }
}
