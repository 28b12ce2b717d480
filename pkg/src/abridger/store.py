"""Persistent row storage for the human validation workflow.

State lives in two plain files: the base rows.jsonl written by the
aligner and an append-only corrections.jsonl log. The served state is
always base + replayed log, so a restart reproduces it exactly and both
files stay diffable. Mutations are serialized by a single writer lock;
readers get immutable per-chapter snapshots.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace
from pathlib import Path

from .aligner import AlignmentRow, flag_rows, validate_partition
from .ingest import ChapterPair
from .jsonl import dump_line, read_jsonl, row_record, row_from_record, write_jsonl
from .passages import row_span_tokens
from .similarity import SimilarityConfig, span_similarity

CORRECTION_KINDS = ("move_sentence", "merge_rows", "split_row", "approve")


class CorrectionError(ValueError):
    """Correction rejected: applying it would break the row invariants."""


class NotFoundError(KeyError):
    """Unknown chapter or row."""


@dataclass(frozen=True)
class Correction:
    """One validator action against a chapter's rows."""

    chapter_id: str
    kind: str
    source_row: int
    target_row: int | None = None
    side: str | None = None
    sent_index: int | None = None
    timestamp: str | None = None
    validator_id: str | None = None

    def to_record(self) -> dict:
        return {
            "chapter_id": self.chapter_id,
            "kind": self.kind,
            "source_row": self.source_row,
            "target_row": self.target_row,
            "side": self.side,
            "sent_index": self.sent_index,
            "timestamp": self.timestamp,
            "validator_id": self.validator_id,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Correction":
        if rec.get("kind") not in CORRECTION_KINDS:
            raise CorrectionError(f"unknown correction kind {rec.get('kind')!r}")
        return cls(
            chapter_id=rec["chapter_id"],
            kind=rec["kind"],
            source_row=int(rec["source_row"]),
            target_row=None if rec.get("target_row") is None else int(rec["target_row"]),
            side=rec.get("side"),
            sent_index=None if rec.get("sent_index") is None else int(rec["sent_index"]),
            timestamp=rec.get("timestamp"),
            validator_id=rec.get("validator_id"),
        )


class RowStore:
    """In-memory rows over (rows.jsonl, corrections.jsonl), replayed on load."""

    def __init__(
        self,
        rows_path: str | Path,
        corrections_path: str | Path,
        chapters: dict[str, ChapterPair],
        threshold: float = 0.9,
        similarity: SimilarityConfig = SimilarityConfig(),
    ):
        self.rows_path = Path(rows_path)
        self.corrections_path = Path(corrections_path)
        self.chapters = chapters
        self.threshold = threshold
        self.similarity = similarity
        self._lock = threading.Lock()
        self._books: dict[str, str] = {}
        self._order: list[str] = []
        self._rows: dict[str, tuple[AlignmentRow, ...]] = {}
        self._load()

    def _load(self) -> None:
        for rec in read_jsonl(self.rows_path):
            cid = rec["chapter_id"]
            if cid not in self._rows:
                if cid not in self.chapters:
                    raise NotFoundError(f"rows reference unknown chapter {cid!r}")
                self._order.append(cid)
                self._rows[cid] = ()
                self._books[cid] = rec.get("book_id", "")
            self._rows[cid] = self._rows[cid] + (row_from_record(rec),)
        for cid, rows in self._rows.items():
            validate_partition(list(rows))
        if self.corrections_path.exists():
            for rec in read_jsonl(self.corrections_path):
                correction = Correction.from_record(rec)
                rows = self._apply(list(self._rows[self._require(correction.chapter_id)]), correction)
                self._rows[correction.chapter_id] = tuple(rows)

    def _require(self, chapter_id: str) -> str:
        if chapter_id not in self._rows:
            raise NotFoundError(f"unknown chapter {chapter_id!r}")
        return chapter_id

    # -- reads ---------------------------------------------------------

    def chapter_ids(self) -> list[str]:
        return list(self._order)

    def book_id(self, chapter_id: str) -> str:
        return self._books[self._require(chapter_id)]

    def rows(self, chapter_id: str) -> list[AlignmentRow]:
        return [replace(r) for r in self._rows[self._require(chapter_id)]]

    def summary(self) -> list[dict]:
        out = []
        for cid in self._order:
            rows = self._rows[cid]
            out.append(
                {
                    "chapter_id": cid,
                    "row_count": len(rows),
                    "flagged_count": sum(1 for r in rows if r.flagged),
                    "validated_count": sum(1 for r in rows if r.validated),
                }
            )
        return out

    def export_text(self) -> str:
        """The current state in rows.jsonl form, byte-deterministic."""
        lines = []
        for cid in self._order:
            for idx, row in enumerate(self._rows[cid]):
                lines.append(dump_line(row_record(self._books[cid], cid, idx, row)))
        return "".join(line + "\n" for line in lines)

    # -- mutation ------------------------------------------------------

    def apply(self, correction: Correction) -> list[AlignmentRow]:
        """Apply one correction, append it to the log, return the chapter rows."""
        with self._lock:
            cid = self._require(correction.chapter_id)
            rows = self._apply(list(self._rows[cid]), correction)
            with open(self.corrections_path, "a", encoding="utf-8") as fh:
                fh.write(dump_line(correction.to_record()) + "\n")
            self._rows[cid] = tuple(rows)
            return [replace(r) for r in rows]

    # -- correction semantics ------------------------------------------

    def _apply(self, rows: list[AlignmentRow], c: Correction) -> list[AlignmentRow]:
        if not 0 <= c.source_row < len(rows):
            raise NotFoundError(f"row {c.source_row} out of range")
        if c.kind == "approve":
            rows[c.source_row] = replace(rows[c.source_row], validated=True)
            return rows
        if c.kind == "move_sentence":
            rows = self._move(rows, c)
        elif c.kind == "merge_rows":
            rows = self._merge(rows, c)
        elif c.kind == "split_row":
            rows = self._split(rows, c)
        else:
            raise CorrectionError(f"unknown correction kind {c.kind!r}")
        rows = self._normalize(c.chapter_id, rows)
        return rows

    def _move(self, rows: list[AlignmentRow], c: Correction) -> list[AlignmentRow]:
        if c.target_row is None or c.side not in ("original", "abridged") or c.sent_index is None:
            raise CorrectionError("move_sentence needs side, sent_index and target_row")
        if abs(c.target_row - c.source_row) != 1:
            raise CorrectionError("sentences move only between adjacent rows")
        if not 0 <= c.target_row < len(rows):
            raise NotFoundError(f"row {c.target_row} out of range")
        src = rows[c.source_row]
        dst = rows[c.target_row]
        toward_prev = c.target_row < c.source_row
        if c.side == "original":
            start, length = src.o_start, src.o_len
        else:
            start, length = src.a_start, src.a_len
        if length == 0:
            raise CorrectionError(f"row {c.source_row} has no {c.side} sentences")
        edge = start if toward_prev else start + length - 1
        if c.sent_index != edge:
            raise CorrectionError(
                f"only the {'first' if toward_prev else 'last'} {c.side} sentence "
                f"(index {edge}) can move to row {c.target_row}"
            )
        if c.side == "original":
            if length == 1:
                if src.a_len > 0:
                    raise CorrectionError(
                        "cannot move the last original sentence away from a row "
                        "with a non-empty abridged span"
                    )
                # the (1,0) row disappears into its neighbor
                rows[c.target_row] = self._grow(dst, "original", toward_prev)
                del rows[c.source_row]
                return rows
            rows[c.source_row] = self._shrink(src, "original", toward_prev)
            rows[c.target_row] = self._grow(dst, "original", toward_prev)
        else:
            rows[c.source_row] = self._shrink(src, "abridged", toward_prev)
            rows[c.target_row] = self._grow(dst, "abridged", toward_prev)
        return rows

    @staticmethod
    def _shrink(row: AlignmentRow, side: str, from_front: bool) -> AlignmentRow:
        if side == "original":
            return replace(
                row,
                o_start=row.o_start + (1 if from_front else 0),
                o_len=row.o_len - 1,
                validated=False,
            )
        return replace(
            row,
            a_start=row.a_start + (1 if from_front else 0),
            a_len=row.a_len - 1,
            validated=False,
        )

    @staticmethod
    def _grow(row: AlignmentRow, side: str, at_end: bool) -> AlignmentRow:
        # a sentence moving toward the previous row lands at that row's end
        if side == "original":
            return replace(
                row,
                o_start=row.o_start - (0 if at_end else 1),
                o_len=row.o_len + 1,
                validated=False,
            )
        if row.a_len == 0:
            # empty rows carry a placeholder a_start; the incoming sentence
            # index is fixed up by renumbering in _normalize
            return replace(row, a_len=1, validated=False)
        return replace(
            row,
            a_start=row.a_start - (0 if at_end else 1),
            a_len=row.a_len + 1,
            validated=False,
        )

    def _merge(self, rows: list[AlignmentRow], c: Correction) -> list[AlignmentRow]:
        if c.target_row is None or abs(c.target_row - c.source_row) != 1:
            raise CorrectionError("merge_rows needs an adjacent target_row")
        if not 0 <= c.target_row < len(rows):
            raise NotFoundError(f"row {c.target_row} out of range")
        first, second = sorted((c.source_row, c.target_row))
        a, b = rows[first], rows[second]
        merged = AlignmentRow(
            o_start=a.o_start,
            o_len=a.o_len + b.o_len,
            a_start=a.a_start if a.a_len else b.a_start,
            a_len=a.a_len + b.a_len,
        )
        rows[first : second + 1] = [merged]
        return rows

    def _split(self, rows: list[AlignmentRow], c: Correction) -> list[AlignmentRow]:
        if c.side != "original":
            raise CorrectionError("rows split on the original side only")
        if c.sent_index is None:
            raise CorrectionError("split_row needs the sent_index starting the new part")
        src = rows[c.source_row]
        if not src.o_start < c.sent_index < src.o_start + src.o_len:
            raise CorrectionError(
                f"split point {c.sent_index} not inside row {c.source_row}"
            )
        head = AlignmentRow(
            o_start=src.o_start,
            o_len=c.sent_index - src.o_start,
            a_start=src.a_start,
            a_len=src.a_len,
        )
        tail = [
            AlignmentRow(o_start=i, o_len=1, a_start=0, a_len=0)
            for i in range(c.sent_index, src.o_start + src.o_len)
        ]
        rows[c.source_row : c.source_row + 1] = [head] + tail
        return rows

    def _normalize(self, chapter_id: str, rows: list[AlignmentRow]) -> list[AlignmentRow]:
        """Re-derive the chapter to a canonical, invariant-satisfying form.

        Multi-sentence rows with an empty abridged side break up into
        (1, 0) rows; abridged starts are renumbered in order; scores and
        flags are recomputed.
        """
        pair = self.chapters[chapter_id]
        out: list[AlignmentRow] = []
        for row in rows:
            if row.a_len == 0 and row.o_len > 1:
                out.extend(
                    AlignmentRow(o_start=i, o_len=1, a_start=0, a_len=0)
                    for i in range(row.o_start, row.o_start + row.o_len)
                )
            else:
                out.append(row)
        a_next = 0
        for i, row in enumerate(out):
            if row.a_len:
                out[i] = replace(row, a_start=a_next)
                a_next += row.a_len
            else:
                out[i] = replace(row, a_start=a_next, score=0.0)
        counts = validate_partition(out)
        expected = (pair.original.num_sentences, pair.abridged.num_sentences)
        if counts != expected:
            raise CorrectionError(
                f"correction leaves {counts} sentences covered, expected {expected}"
            )
        for i, row in enumerate(out):
            if row.a_len:
                o_toks, a_toks = row_span_tokens(pair.original, pair.abridged, row)
                score = span_similarity(
                    [t.text for t in o_toks], [t.text for t in a_toks], self.similarity
                )
                out[i] = replace(row, score=score)
        flag_rows(out, self.threshold)
        return out


def open_store(
    rows_path: str | Path,
    chapters: dict[str, ChapterPair],
    corrections_path: str | Path | None = None,
    threshold: float = 0.9,
    similarity: SimilarityConfig = SimilarityConfig(),
) -> RowStore:
    rows_path = Path(rows_path)
    if corrections_path is None:
        corrections_path = rows_path.with_name("corrections.jsonl")
    return RowStore(rows_path, corrections_path, chapters, threshold, similarity)
