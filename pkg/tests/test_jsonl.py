"""Artifact serialization round trips."""

from __future__ import annotations

import json

import pytest

from abridger.aligner import AlignmentRow
from abridger.ingest import Document
from abridger.jsonl import (
    chapter_record,
    chapter_records,
    document_from_record,
    dump_line,
    pairs_from_records,
    read_jsonl,
    row_from_record,
    row_record,
    row_records,
    rows_by_chapter,
    write_jsonl,
)
from test_aligner import fixture_rows
from test_extract import make_pair


def test_dump_line_is_deterministic():
    line = dump_line({"b": 1, "a": [1, 2], "c": "café"})
    assert line == '{"a":[1,2],"b":1,"c":"café"}'
    assert json.loads(line) == {"a": [1, 2], "b": 1, "c": "café"}


def test_write_read_round_trip(tmp_path):
    path = tmp_path / "records.jsonl"
    records = [{"n": i, "text": f"line {i}"} for i in range(5)]
    write_jsonl(path, records)
    assert read_jsonl(path) == records
    # blank lines are tolerated
    path.write_text(path.read_text() + "\n\n")
    assert read_jsonl(path) == records


def test_chapter_record_round_trip():
    doc = Document.from_text("c1/original", "First one. Second one.\n\nThird one.")
    rec = chapter_record("b", "c1", "original", doc)
    back = document_from_record(json.loads(dump_line(rec)))
    assert back.raw_text == doc.raw_text
    assert back.sentence_spans == doc.sentence_spans
    assert back.paragraph_spans == doc.paragraph_spans


def test_pairs_round_trip():
    pair = make_pair("Long original text here.", "Short text.")
    records = chapter_records([pair])
    assert [r["side"] for r in records] == ["original", "abridged"]
    (back,) = pairs_from_records(records)
    assert back.chapter_id == pair.chapter_id
    assert back.book_id == pair.book_id
    assert back.original.raw_text == pair.original.raw_text
    assert back.abridged.sentence_spans == pair.abridged.sentence_spans


def test_missing_side_rejected():
    pair = make_pair("One side only.", "Other.")
    records = chapter_records([pair])[:1]
    with pytest.raises(ValueError, match="lacks"):
        pairs_from_records(records)


def test_row_record_round_trip():
    row = AlignmentRow(o_start=3, o_len=2, a_start=1, a_len=1, score=0.625, flagged=True, validated=True)
    rec = row_record("b", "c", 7, row)
    assert rec["row_index"] == 7
    assert row_from_record(json.loads(dump_line(rec))) == row


def test_rows_by_chapter_keeps_file_order():
    recs = row_records("b", "c2", fixture_rows()[:2]) + row_records("b", "c1", fixture_rows()[:1])
    order, books, rows = rows_by_chapter(recs)
    assert order == ["c2", "c1"]
    assert books == {"c2": "b", "c1": "b"}
    assert len(rows["c2"]) == 2 and len(rows["c1"]) == 1
