"""Load raw book text and turn it into chapter documents.

A book file is split into chapters by matching heading lines against a set
of regular expressions. Each chapter body becomes a :class:`Document` whose
sentence and paragraph boundaries are stored as character offsets into the
raw text, so that all original whitespace (most importantly the line breaks
that mark paragraphs) survives every later processing step. Offsets count
Unicode code points, i.e. plain Python string indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

Span = tuple[int, int]


class ConfigurationError(ValueError):
    """Bad user-supplied configuration (e.g. an invalid heading pattern)."""


class PairingError(ValueError):
    """Original and abridged books do not have matching chapter structure."""


# Words after which a period does not end a sentence. Honorifics and other
# abbreviations common in 18th/19th century English prose; compared
# case-insensitively against the word preceding the period. Single letters
# (initials like "W. M. Thackeray") are suppressed separately.
ABBREVIATIONS = frozenset({
    "mr", "mrs", "ms", "dr", "st", "prof", "rev", "fr", "capt", "col",
    "gen", "maj", "lieut", "lt", "sgt", "hon", "esq", "messrs", "mme",
    "mlle", "sr", "jr", "vs", "etc", "viz", "cf", "no", "nos", "vol",
    "vols", "ch", "chap", "pp", "p", "ed", "eds", "e.g", "i.e", "al",
})

# A word is a run of letters/digits, optionally carrying internal hyphens
# or apostrophes ("re-established", "it's"). Any other non-space character
# is a token of its own.
_WORD_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*|\S", re.UNICODE)

# Sentence terminator: .!? runs plus any closing quotes/brackets.
_TERMINATOR_RE = re.compile(r"[.?!]+[\"'’”)\]]*")


@dataclass(frozen=True)
class Token:
    """A lowercased word or punctuation mark with its source offsets."""

    text: str
    char_start: int
    char_end: int


@dataclass(frozen=True)
class Document:
    """One chapter of one side (original or abridged) of a book.

    ``sentence_spans`` and ``paragraph_spans`` are half-open [start, end)
    ranges into ``raw_text``; sentence spans are strictly increasing and
    separated only by whitespace, paragraph spans cover whole sentences and
    are delimited by blank lines.
    """

    id: str
    raw_text: str
    sentence_spans: tuple[Span, ...]
    paragraph_spans: tuple[Span, ...]

    @classmethod
    def from_text(cls, doc_id: str, text: str) -> "Document":
        sentences = segment_sentences(text)
        paragraphs = _paragraph_spans(text, sentences)
        return cls(doc_id, text, tuple(sentences), tuple(paragraphs))

    @property
    def num_sentences(self) -> int:
        return len(self.sentence_spans)

    def sentence_text(self, index: int) -> str:
        start, end = self.sentence_spans[index]
        return self.raw_text[start:end]

    def sentence_tokens(self, index: int) -> list[Token]:
        return tokenize_words(self, self.sentence_spans[index])

    def span_range(self, first: int, count: int) -> Span:
        """Character range covering ``count`` sentences starting at ``first``."""
        if count <= 0:
            raise ValueError("span must cover at least one sentence")
        return (self.sentence_spans[first][0], self.sentence_spans[first + count - 1][1])


@dataclass(frozen=True)
class ChapterPair:
    """An original chapter paired with its abridged counterpart."""

    chapter_id: str
    book_id: str
    original: Document
    abridged: Document


def _line_spans(text: str) -> list[Span]:
    spans = []
    start = 0
    while start <= len(text):
        nl = text.find("\n", start)
        if nl == -1:
            if start < len(text):
                spans.append((start, len(text)))
            break
        spans.append((start, nl))
        start = nl + 1
    return spans


def segment_sentences(text: str) -> list[Span]:
    """Rule-based sentence segmentation returning character ranges.

    Boundaries fall after runs of ``.?!`` (plus trailing closing quotes or
    brackets) that are followed by whitespace, except when the preceding
    word is a known abbreviation or a single-letter initial, or when an
    ellipsis is continued by a lowercase letter. A blank line always forces
    a boundary. Text without a final terminator still yields a sentence.
    """
    spans: list[Span] = []
    for block_start, block_end in _paragraph_blocks(text):
        spans.extend(_segment_block(text, block_start, block_end))
    return spans


def _paragraph_blocks(text: str) -> list[Span]:
    """Maximal runs of consecutive non-blank lines."""
    blocks = []
    current: Span | None = None
    for start, end in _line_spans(text):
        if text[start:end].strip():
            current = (current[0], end) if current else (start, end)
        elif current:
            blocks.append(current)
            current = None
    if current:
        blocks.append(current)
    return blocks


def _is_abbreviation(text: str, period_pos: int) -> bool:
    """True when the word ending at text[period_pos] == '.' is an abbreviation."""
    start = period_pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start:period_pos].lstrip("\"'‘“([")
    if not word:
        return False
    word = word.lower()
    if word in ABBREVIATIONS:
        return True
    # single-letter initials, possibly a chain like "e.g" handled above
    return len(word) == 1 and word.isalpha()


def _segment_block(text: str, start: int, end: int) -> list[Span]:
    spans = []
    pos = start
    while pos < end and text[pos].isspace():
        pos += 1
    sent_start = pos
    for match in _TERMINATOR_RE.finditer(text, pos, end):
        if match.start() < sent_start:
            continue
        term_end = match.end()
        if term_end < end and not text[term_end].isspace():
            continue  # mid-token period ("3.5", "Mr.Guppy" style), no break
        terminator = match.group()
        if terminator[0] == "." and len(terminator.rstrip("\"'’”)]")) == 1:
            if _is_abbreviation(text, match.start()):
                continue
        if terminator.startswith(".."):
            follow = text[term_end:end].lstrip()
            if follow and follow[0].islower():
                continue  # ellipsis trailing into a continuation
        spans.append((sent_start, term_end))
        sent_start = term_end
        while sent_start < end and text[sent_start].isspace():
            sent_start += 1
    # unterminated trailing text becomes the final sentence
    tail = text[sent_start:end].rstrip()
    if tail:
        spans.append((sent_start, sent_start + len(tail)))
    return spans


def _paragraph_spans(text: str, sentences: list[Span]) -> list[Span]:
    paragraphs = []
    sent_iter = iter(sentences)
    pending = next(sent_iter, None)
    for block_start, block_end in _paragraph_blocks(text):
        first = last = None
        while pending and pending[0] >= block_start and pending[1] <= block_end:
            first = pending if first is None else first
            last = pending
            pending = next(sent_iter, None)
        if first and last:
            paragraphs.append((first[0], last[1]))
    return paragraphs


def is_word_token(text: str) -> bool:
    """True for tokens with at least one letter or digit; punctuation is False."""
    return any(ch.isalnum() for ch in text)


def word_tokens(text: str, start: int = 0, end: int | None = None) -> list[Token]:
    """Tokenize ``text[start:end]`` into lowercased word/punctuation tokens."""
    if end is None:
        end = len(text)
    return [
        Token(m.group().lower(), m.start(), m.end())
        for m in _WORD_RE.finditer(text, start, end)
    ]


def tokenize_words(document: Document, char_range: Span | None = None) -> list[Token]:
    """Tokens of a document (or of one of its character ranges)."""
    if char_range is None:
        return word_tokens(document.raw_text)
    start, end = char_range
    if not (0 <= start <= end <= len(document.raw_text)):
        raise ValueError(f"char range ({start}, {end}) outside document")
    return word_tokens(document.raw_text, start, end)


def token_texts(text: str) -> list[str]:
    return [t.text for t in word_tokens(text)]


def load_heading_patterns(path) -> list[str]:
    """Read heading patterns, one regex per line; '#' starts a comment line."""
    patterns = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            patterns.append(line)
    if not patterns:
        raise ConfigurationError(f"no heading patterns found in {path}")
    return patterns


def default_heading_patterns() -> list[str]:
    source = resources.files("abridger.data").joinpath("heading_patterns.txt")
    patterns = []
    for line in source.read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            patterns.append(line)
    return patterns


def detect_chapters(
    raw_text: str, patterns: list[str]
) -> list[tuple[str, Span]]:
    """Split a book into (heading, body range) chapters by heading lines.

    A line is a heading when any pattern matches it in full. Chapter bodies
    tile the text after the first heading; heading lines are excluded. When
    nothing matches, the whole text is one chapter under a synthetic
    heading.
    """
    if not patterns:
        raise ConfigurationError("at least one heading pattern is required")
    compiled = []
    for pattern in patterns:
        try:
            compiled.append(re.compile(pattern))
        except re.error as err:
            raise ConfigurationError(f"invalid heading pattern {pattern!r}: {err}") from err

    headings: list[tuple[str, Span]] = []  # (heading text, heading line span)
    for start, end in _line_spans(raw_text):
        line = raw_text[start:end].rstrip("\r")
        if line and any(rx.fullmatch(line) for rx in compiled):
            headings.append((line, (start, end)))

    if not headings:
        return [("(untitled)", (0, len(raw_text)))]

    chapters = []
    for i, (heading, (_, line_end)) in enumerate(headings):
        body_start = min(line_end + 1, len(raw_text))  # skip the newline
        body_end = headings[i + 1][1][0] if i + 1 < len(headings) else len(raw_text)
        chapters.append((heading, (body_start, body_end)))
    return chapters


def _dedupe_ids(headings: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    ids = []
    for heading in headings:
        base = heading.strip() or "(untitled)"
        count = seen.get(base, 0) + 1
        seen[base] = count
        ids.append(base if count == 1 else f"{base} ({count})")
    return ids


def pair_chapters(
    original_chapters: list[tuple[str, str]],
    abridged_chapters: list[tuple[str, str]],
    book_id: str = "book",
) -> list[ChapterPair]:
    """Pair chapters positionally; each entry is (heading, body text).

    Chapter ids come from the original headings (deduplicated when a book
    repeats them). A count mismatch is an error naming the first heading
    without a counterpart.
    """
    n_orig, n_abr = len(original_chapters), len(abridged_chapters)
    if n_orig != n_abr:
        longer = original_chapters if n_orig > n_abr else abridged_chapters
        unmatched = longer[min(n_orig, n_abr)][0]
        raise PairingError(
            f"chapter count mismatch: {n_orig} original vs {n_abr} abridged; "
            f"first unmatched heading: {unmatched!r}"
        )
    ids = _dedupe_ids([heading for heading, _ in original_chapters])
    pairs = []
    for chapter_id, (_, orig_body), (_, abr_body) in zip(
        ids, original_chapters, abridged_chapters
    ):
        pairs.append(
            ChapterPair(
                chapter_id=chapter_id,
                book_id=book_id,
                original=Document.from_text(f"{chapter_id}/original", orig_body),
                abridged=Document.from_text(f"{chapter_id}/abridged", abr_body),
            )
        )
    return pairs


def ingest_book_pair(
    original_text: str,
    abridged_text: str,
    patterns: list[str] | None = None,
    book_id: str = "book",
) -> list[ChapterPair]:
    """Detect chapters on both sides of a book and pair them positionally."""
    patterns = patterns if patterns is not None else default_heading_patterns()
    chapters = []
    for text in (original_text, abridged_text):
        bodies = [
            (heading, text[start:end])
            for heading, (start, end) in detect_chapters(text, patterns)
        ]
        chapters.append(bodies)
    return pair_chapters(chapters[0], chapters[1], book_id=book_id)
