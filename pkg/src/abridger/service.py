"""HTTP service over a RowStore: the review API plus static UI assets.

All mutation goes through the store's correction path, so everything the
service serves is reproducible from rows.jsonl + corrections.jsonl.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .aligner import AlignmentRow
from .store import Correction, CorrectionError, NotFoundError, RowStore


def _row_view(store: RowStore, chapter_id: str, index: int, row: AlignmentRow) -> dict:
    pair = store.chapters[chapter_id]
    return {
        "row_index": index,
        "o_start": row.o_start,
        "o_len": row.o_len,
        "a_start": row.a_start,
        "a_len": row.a_len,
        "score": row.score,
        "flagged": row.flagged,
        "validated": row.validated,
        "o_sentences": [
            {"index": i, "text": pair.original.sentence_text(i)}
            for i in range(row.o_start, row.o_start + row.o_len)
        ],
        "a_sentences": [
            {"index": j, "text": pair.abridged.sentence_text(j)}
            for j in range(row.a_start, row.a_start + row.a_len)
        ],
    }


def _chapter_rows(store: RowStore, chapter_id: str) -> list[dict]:
    return [
        _row_view(store, chapter_id, i, row) for i, row in enumerate(store.rows(chapter_id))
    ]


def create_app(store: RowStore, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="abridger review service")

    @app.get("/api/chapters")
    def chapters() -> list[dict]:
        return store.summary()

    @app.get("/api/chapters/{chapter_id}/rows")
    def chapter_rows(chapter_id: str, flagged: bool = False) -> list[dict]:
        try:
            views = _chapter_rows(store, chapter_id)
        except (NotFoundError, KeyError):
            raise HTTPException(status_code=404, detail=f"unknown chapter {chapter_id!r}")
        if flagged:
            views = [v for v in views if v["flagged"]]
        return views

    @app.get("/api/chapters/{chapter_id}/text")
    def chapter_text(chapter_id: str, side: str) -> dict:
        if side not in ("original", "abridged"):
            raise HTTPException(status_code=400, detail="side must be original or abridged")
        if chapter_id not in store.chapters:
            raise HTTPException(status_code=404, detail=f"unknown chapter {chapter_id!r}")
        pair = store.chapters[chapter_id]
        document = pair.original if side == "original" else pair.abridged
        return {"chapter_id": chapter_id, "side": side, "text": document.raw_text}

    @app.post("/api/chapters/{chapter_id}/corrections")
    def post_correction(chapter_id: str, payload: dict = Body(...)) -> dict:
        payload = dict(payload)
        payload["chapter_id"] = chapter_id
        try:
            correction = Correction.from_record(payload)
            store.apply(correction)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (CorrectionError, ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"chapter_id": chapter_id, "rows": _chapter_rows(store, chapter_id)}

    @app.get("/api/export")
    def export() -> PlainTextResponse:
        return PlainTextResponse(store.export_text(), media_type="application/x-ndjson")

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def serve(
    store: RowStore,
    static_dir: str | Path | None = None,
    port: int = 8176,
    host: str = "127.0.0.1",
) -> None:
    """Run the service until interrupted; ABRIDGER_PORT overrides port."""
    import uvicorn

    port = int(os.environ.get("ABRIDGER_PORT", port))
    uvicorn.run(create_app(store, static_dir), host=host, port=port, log_level="warning")
