"""Passage-level views of an aligned chapter.

Built on top of alignment rows: slices (verbatim word runs shared by the
two sides of a row, located by character range), passage abridgements
(the abridged stretch covering a fixed original passage), bounded
paragraph chunks, and per-token preserved or removed labels.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum, IntEnum

from .aligner import AlignmentRow
from .ingest import Document, Token, is_word_token


@dataclass(frozen=True)
class Slice:
    """A common word run: original chars [o_i, o_j) match abridged [a_i, a_j).

    Both ranges cover the same lowercased token sequence; ``word_count``
    is its length in tokens.
    """

    o_i: int
    o_j: int
    a_i: int
    a_j: int
    word_count: int


def _longest_run(
    o_texts: list[str],
    a_texts: list[str],
    o_lo: int,
    o_hi: int,
    a_lo: int,
    a_hi: int,
) -> tuple[int, int, int] | None:
    """Longest common token run between o[o_lo:o_hi] and a[a_lo:a_hi].

    Returns (length, o_start, a_start), favoring the earliest original
    then abridged position on length ties; None when nothing matches.
    """
    width = a_hi - a_lo
    prev = [0] * (width + 1)
    best: tuple[int, int, int] | None = None
    for i in range(o_lo, o_hi):
        cur = [0] * (width + 1)
        text = o_texts[i]
        for jj in range(width):
            if text == a_texts[a_lo + jj]:
                length = prev[jj] + 1
                cur[jj + 1] = length
                if best is None or length > best[0]:
                    best = (length, i - length + 1, a_lo + jj - length + 1)
        prev = cur
    return best


def _carve(intervals: list[tuple[int, int]], lo: int, hi: int) -> list[tuple[int, int]]:
    out = []
    for start, end in intervals:
        if start <= lo and hi <= end:
            if start < lo:
                out.append((start, lo))
            if hi < end:
                out.append((hi, end))
        else:
            out.append((start, end))
    return out


def _token_runs(o_texts: list[str], a_texts: list[str]) -> list[tuple[int, int, int]]:
    """Greedy longest-first common runs; each token is used at most once.

    Repeatedly takes the longest run between any still-unused stretches
    of the two sides (ties broken toward the earliest original, then
    abridged, position) until no shared token remains. Runs may cross,
    which is what makes reordering detectable downstream.
    """
    o_free = [(0, len(o_texts))]
    a_free = [(0, len(a_texts))]
    runs = []
    while True:
        best: tuple[int, int, int] | None = None
        for o_lo, o_hi in o_free:
            for a_lo, a_hi in a_free:
                found = _longest_run(o_texts, a_texts, o_lo, o_hi, a_lo, a_hi)
                if found is None:
                    continue
                if (
                    best is None
                    or found[0] > best[0]
                    or (found[0] == best[0] and (found[1], found[2]) < (best[1], best[2]))
                ):
                    best = found
        if best is None:
            return runs
        length, o_start, a_start = best
        runs.append(best)
        o_free = _carve(o_free, o_start, o_start + length)
        a_free = _carve(a_free, a_start, a_start + length)


def _trim_punct(texts: list[str], start: int, end: int) -> tuple[int, int]:
    """Shrink [start, end) past leading/trailing punctuation-only tokens."""
    while start < end and not is_word_token(texts[start]):
        start += 1
    while end > start and not is_word_token(texts[end - 1]):
        end -= 1
    return start, end


def matching_slices(o_tokens: Sequence[Token], a_tokens: Sequence[Token]) -> list[Slice]:
    """Common word runs between two token sequences, as character slices.

    Runs are discovered greedily longest-first without an ordering
    constraint between them (see :func:`_token_runs`), then trimmed of
    punctuation-only tokens at their edges so a passage abridgement never
    starts or ends on stray punctuation; fully punctuation runs are
    dropped. Slices come back sorted by original position.
    """
    o_texts = [t.text for t in o_tokens]
    a_texts = [t.text for t in a_tokens]
    slices = []
    for length, o_start, a_start in _token_runs(o_texts, a_texts):
        lo, hi = _trim_punct(o_texts, o_start, o_start + length)
        if lo == hi:
            continue
        shift = lo - o_start
        count = hi - lo
        a_lo = a_start + shift
        slices.append(
            Slice(
                o_i=o_tokens[lo].char_start,
                o_j=o_tokens[hi - 1].char_end,
                a_i=a_tokens[a_lo].char_start,
                a_j=a_tokens[a_lo + count - 1].char_end,
                word_count=count,
            )
        )
    slices.sort(key=lambda s: (s.o_i, s.a_i))
    return slices


def row_span_tokens(
    original: Document, abridged: Document, row: AlignmentRow
) -> tuple[list[Token], list[Token]]:
    """Token sequences (with chapter-level offsets) of a row's two spans."""
    o_tokens = [
        t for s in range(row.o_start, row.o_start + row.o_len) for t in original.sentence_tokens(s)
    ]
    a_tokens = [
        t for s in range(row.a_start, row.a_start + row.a_len) for t in abridged.sentence_tokens(s)
    ]
    return o_tokens, a_tokens


def chapter_slices(
    original: Document, abridged: Document, rows: list[AlignmentRow]
) -> list[Slice]:
    """All row-level slices of a chapter, in original order."""
    slices = []
    for row in rows:
        if row.a_len == 0:
            continue
        o_tokens, a_tokens = row_span_tokens(original, abridged, row)
        slices.extend(matching_slices(o_tokens, a_tokens))
    slices.sort(key=lambda s: (s.o_i, s.a_i))
    return slices


def passage_abridgement(
    slices: list[Slice], o_l: int, o_m: int
) -> tuple[int, int] | None:
    """Abridged char range covering original passage chars [o_l, o_m).

    Takes the slices fully enclosed by the passage and spans from the
    earliest to the latest abridged position among them; None when the
    passage encloses no slice.
    """
    a_lo = None
    a_hi = None
    for sl in slices:
        if sl.o_i >= o_l and sl.o_j <= o_m:
            a_lo = sl.a_i if a_lo is None else min(a_lo, sl.a_i)
            a_hi = sl.a_j if a_hi is None else max(a_hi, sl.a_j)
    if a_lo is None:
        return None
    return (a_lo, a_hi)


class PassageUnit(str, Enum):
    ROW = "row"
    SENTENCE = "sentence"
    PARAGRAPH = "paragraph"
    CHUNK = "chunk"


@dataclass(frozen=True)
class ChunkConfig:
    """Paragraph-grouping bound: chunks hold at most max_sentences."""

    max_sentences: int = 10

    def __post_init__(self):
        if self.max_sentences < 1:
            raise ValueError("max_sentences must be >= 1")


@dataclass(frozen=True)
class PassagePair:
    """A fixed original passage and the abridged char range covering it."""

    unit: PassageUnit
    o_start_char: int
    o_end_char: int
    o_sent_start: int
    o_sent_end: int
    a_range: tuple[int, int] | None


def paragraph_sentence_ranges(document: Document) -> list[tuple[int, int]]:
    """[start, end) sentence index range of each paragraph."""
    ranges = []
    sent = 0
    for p_start, p_end in document.paragraph_spans:
        first = sent
        while sent < document.num_sentences and document.sentence_spans[sent][1] <= p_end:
            if document.sentence_spans[sent][0] < p_start:
                raise ValueError("sentence crosses a paragraph boundary")
            sent += 1
        ranges.append((first, sent))
    return ranges


def sentence_chunks(
    document: Document, config: ChunkConfig = ChunkConfig()
) -> list[tuple[int, int]]:
    """Group whole paragraphs into sentence ranges of bounded size.

    Paragraphs accumulate greedily while the running sentence count stays
    within the bound; a single paragraph over the bound becomes its own
    chunk. Returns [start, end) sentence ranges.
    """
    chunks = []
    start = 0
    current = 0
    for p_lo, p_hi in paragraph_sentence_ranges(document):
        size = p_hi - p_lo
        if current and current + size > config.max_sentences:
            chunks.append((start, start + current))
            start += current
            current = 0
        current += size
        if current >= config.max_sentences:
            chunks.append((start, start + current))
            start += current
            current = 0
    if current:
        chunks.append((start, start + current))
    return chunks


def make_passages(
    document: Document,
    unit: PassageUnit,
    chunk_config: ChunkConfig = ChunkConfig(),
    rows: list[AlignmentRow] | None = None,
) -> list[tuple[int, int]]:
    """Original-side passages as [start, end) sentence ranges."""
    if unit is PassageUnit.SENTENCE:
        return [(i, i + 1) for i in range(document.num_sentences)]
    if unit is PassageUnit.PARAGRAPH:
        return paragraph_sentence_ranges(document)
    if unit is PassageUnit.CHUNK:
        return sentence_chunks(document, chunk_config)
    if unit is PassageUnit.ROW:
        if rows is None:
            raise ValueError("row passages need the chapter's alignment rows")
        return [(r.o_start, r.o_start + r.o_len) for r in rows]
    raise ValueError(f"unknown passage unit {unit!r}")


def passage_pairs(
    original: Document,
    abridged: Document,
    rows: list[AlignmentRow],
    unit: PassageUnit,
    chunk_config: ChunkConfig = ChunkConfig(),
) -> list[PassagePair]:
    """Map every passage of ``unit`` to its abridged char range."""
    slices = chapter_slices(original, abridged, rows)
    pairs = []
    for sent_lo, sent_hi in make_passages(original, unit, chunk_config, rows):
        if sent_hi <= sent_lo:
            continue
        o_lo, o_hi = original.span_range(sent_lo, sent_hi - sent_lo)
        pairs.append(
            PassagePair(
                unit=unit,
                o_start_char=o_lo,
                o_end_char=o_hi,
                o_sent_start=sent_lo,
                o_sent_end=sent_hi,
                a_range=passage_abridgement(slices, o_lo, o_hi),
            )
        )
    return pairs


class Label(IntEnum):
    PRESERVED = 0
    REMOVED = 1


@dataclass(frozen=True)
class TokenLabel:
    token: Token
    label: Label


def label_tokens(o_tokens: Sequence[Token], a_tokens: Sequence[Token]) -> list[TokenLabel]:
    """Label each original token preserved when its text occurs anywhere in
    the abridged span (type membership), removed otherwise."""
    kept = {t.text for t in a_tokens}
    return [
        TokenLabel(t, Label.PRESERVED if t.text in kept else Label.REMOVED) for t in o_tokens
    ]


def chapter_labels(
    original: Document, abridged: Document, rows: list[AlignmentRow]
) -> list[TokenLabel]:
    """Labels for every original token of a chapter, in document order."""
    out = []
    for row in rows:
        o_tokens, a_tokens = row_span_tokens(original, abridged, row)
        out.extend(label_tokens(o_tokens, a_tokens))
    return out
