"""Line-delimited JSON artifact formats shared by the CLI and service.

Serialization is deterministic (sorted keys, compact separators, UTF-8)
so repeated exports of the same state are byte-identical and the files
diff cleanly under version control.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from pathlib import Path

from .aligner import AlignmentRow
from .ingest import ChapterPair, Document


def dump_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(path: str | Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(dump_line(rec) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def chapter_record(book_id: str, chapter_id: str, side: str, document: Document) -> dict:
    return {
        "book_id": book_id,
        "chapter_id": chapter_id,
        "side": side,
        "text": document.raw_text,
        "sentence_spans": [list(s) for s in document.sentence_spans],
        "paragraph_spans": [list(s) for s in document.paragraph_spans],
    }


def chapter_records(pairs: Iterable[ChapterPair]) -> list[dict]:
    records = []
    for pair in pairs:
        records.append(chapter_record(pair.book_id, pair.chapter_id, "original", pair.original))
        records.append(chapter_record(pair.book_id, pair.chapter_id, "abridged", pair.abridged))
    return records


def document_from_record(rec: dict) -> Document:
    return Document(
        id=f"{rec['chapter_id']}/{rec['side']}",
        raw_text=rec["text"],
        sentence_spans=tuple((s, e) for s, e in rec["sentence_spans"]),
        paragraph_spans=tuple((s, e) for s, e in rec["paragraph_spans"]),
    )


def pairs_from_records(records: Iterable[dict]) -> list[ChapterPair]:
    """Rebuild chapter pairs from chapters.jsonl records, in file order."""
    sides: dict[str, dict[str, Document]] = {}
    books: dict[str, str] = {}
    order: list[str] = []
    for rec in records:
        cid = rec["chapter_id"]
        if cid not in sides:
            sides[cid] = {}
            order.append(cid)
            books[cid] = rec.get("book_id", "")
        sides[cid][rec["side"]] = document_from_record(rec)
    pairs = []
    for cid in order:
        if "original" not in sides[cid] or "abridged" not in sides[cid]:
            raise ValueError(f"chapter {cid!r} lacks one of its two sides")
        pairs.append(
            ChapterPair(
                chapter_id=cid,
                book_id=books[cid],
                original=sides[cid]["original"],
                abridged=sides[cid]["abridged"],
            )
        )
    return pairs


def row_record(book_id: str, chapter_id: str, row_index: int, row: AlignmentRow) -> dict:
    return {
        "book_id": book_id,
        "chapter_id": chapter_id,
        "row_index": row_index,
        "o_start": row.o_start,
        "o_len": row.o_len,
        "a_start": row.a_start,
        "a_len": row.a_len,
        "score": row.score,
        "flagged": row.flagged,
        "validated": row.validated,
    }


def row_from_record(rec: dict) -> AlignmentRow:
    return AlignmentRow(
        o_start=rec["o_start"],
        o_len=rec["o_len"],
        a_start=rec["a_start"],
        a_len=rec["a_len"],
        score=rec.get("score", 0.0),
        flagged=rec.get("flagged", False),
        validated=rec.get("validated", False),
    )


def rows_by_chapter(records: Iterable[dict]) -> tuple[list[str], dict[str, str], dict[str, list[AlignmentRow]]]:
    """Group rows.jsonl records; returns (chapter order, books, rows)."""
    order: list[str] = []
    books: dict[str, str] = {}
    rows: dict[str, list[AlignmentRow]] = {}
    for rec in records:
        cid = rec["chapter_id"]
        if cid not in rows:
            order.append(cid)
            rows[cid] = []
            books[cid] = rec.get("book_id", "")
        rows[cid].append(row_from_record(rec))
    return order, books, rows


def row_records(book_id: str, chapter_id: str, rows: Iterable[AlignmentRow]) -> list[dict]:
    return [row_record(book_id, chapter_id, i, row) for i, row in enumerate(rows)]
