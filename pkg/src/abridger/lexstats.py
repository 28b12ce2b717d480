"""Corpus characterization: sizes, row-size and score distributions,
lexical preservation/removal/addition relations, and a coarse
function/content word split.

Word identity is the tokenizer's lowercased type; relation counts are
per-row type counts, accumulated across rows. Because reasonable readers
disagree on whether such percentages should weight each type once or
each occurrence, the relation report carries both a type-based and a
token-based variant, labeled.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from importlib import resources

from .aligner import AlignmentRow
from .ingest import ChapterPair, Token, is_word_token, tokenize_words
from .passages import matching_slices, row_span_tokens

SCORE_BIN_LABELS = ("0.0", "(0,0.25]", "(0.25,0.5]", "(0.5,0.75]", "(0.75,1.0)", "1.0")
SIZE_CATEGORIES = ("(1,1)", "(1,0)", "(2+,1)", "(1,2+)", "(2+,2+)")


@dataclass(frozen=True)
class LexRelation:
    """Type-level word relations of one row.

    Counts split the original types into removed + preserved and the
    abridged types into added + preserved; the has_* booleans say whether
    each operation occurs at all in the row.
    """

    o_rmv: int
    o_prsv: int
    a_add: int
    a_prsv: int
    has_rmv: bool
    has_prsv: bool
    has_add: bool
    has_reord: bool


def detect_reordering(o_tokens: Sequence[Token], a_tokens: Sequence[Token]) -> bool:
    """True when at least two slices appear in a different order on the
    abridged side than on the original side."""
    slices = matching_slices(o_tokens, a_tokens)
    if len(slices) <= 1:
        return False
    by_abridged = sorted(slices, key=lambda s: s.a_i)
    return any(
        later.o_i <= earlier.o_i for earlier, later in zip(by_abridged, by_abridged[1:])
    )


def lexical_relations(o_tokens: Sequence[Token], a_tokens: Sequence[Token]) -> LexRelation:
    """Removed/preserved/added type counts for one row's spans."""
    o_types = {t.text for t in o_tokens}
    a_types = {t.text for t in a_tokens}
    o_rmv = len(o_types - a_types)
    a_add = len(a_types - o_types)
    return LexRelation(
        o_rmv=o_rmv,
        o_prsv=len(o_types) - o_rmv,
        a_add=a_add,
        a_prsv=len(a_types) - a_add,
        has_rmv=o_rmv > 0,
        has_prsv=len(o_types) - o_rmv > 0,
        has_add=a_add > 0,
        has_reord=detect_reordering(o_tokens, a_tokens),
    )


def score_bin(score: float) -> str:
    """Bin label for a row score; exact 0 and exact 1 get their own bins."""
    if score <= 0.0:
        return "0.0"
    if score >= 1.0:
        return "1.0"
    if score <= 0.25:
        return "(0,0.25]"
    if score <= 0.5:
        return "(0.25,0.5]"
    if score <= 0.75:
        return "(0.5,0.75]"
    return "(0.75,1.0)"


def score_bins(rows: Sequence[AlignmentRow]) -> dict:
    """Percentage of rows per score bin; count 0 marks empty input."""
    counts = Counter(score_bin(r.score) for r in rows)
    total = len(rows)
    percent = {
        label: (100.0 * counts.get(label, 0) / total if total else 0.0)
        for label in SCORE_BIN_LABELS
    }
    return {"count": total, "percent": percent}


def size_category(row: AlignmentRow) -> str:
    if row.a_len == 0:
        if row.o_len != 1:
            raise ValueError(f"unexpected ({row.o_len}, 0) row; empty rows must have o_len 1")
        return "(1,0)"
    if row.a_len == 1:
        return "(1,1)" if row.o_len == 1 else "(2+,1)"
    return "(1,2+)" if row.o_len == 1 else "(2+,2+)"


def size_distribution(rows: Sequence[AlignmentRow]) -> dict:
    """Percentage of rows per (o_len, a_len) category."""
    counts = Counter(size_category(r) for r in rows)
    total = len(rows)
    percent = {
        label: (100.0 * counts.get(label, 0) / total if total else 0.0)
        for label in SIZE_CATEGORIES
    }
    return {"count": total, "percent": percent}


def load_lexicon(path) -> frozenset[str]:
    """Closed-class word list: one lowercase word per line, '#' comments."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                words.add(word)
    return frozenset(words)


def default_lexicon() -> frozenset[str]:
    ref = resources.files("abridger.data") / "closed_class.txt"
    with resources.as_file(ref) as path:
        return load_lexicon(path)


def is_function_word(text: str, lexicon: frozenset[str]) -> bool:
    """Punctuation and closed-class words count as function words."""
    return not is_word_token(text) or text in lexicon


RowTokens = tuple[Sequence[Token], Sequence[Token]]


def relation_report(row_tokens: Iterable[RowTokens]) -> dict:
    """Corpus-level removal/preservation/addition percentages.

    The type variant weights each per-row word type once; the token
    variant weights every occurrence. Row percentages count rows where
    each operation appears at least once.
    """
    type_counts = Counter()
    token_counts = Counter()
    row_counts = Counter()
    rows = 0
    for o_tokens, a_tokens in row_tokens:
        rows += 1
        rel = lexical_relations(o_tokens, a_tokens)
        type_counts.update(
            o_rmv=rel.o_rmv, o_prsv=rel.o_prsv, a_add=rel.a_add, a_prsv=rel.a_prsv
        )
        o_types = {t.text for t in o_tokens}
        a_types = {t.text for t in a_tokens}
        token_counts["o_rmv"] += sum(1 for t in o_tokens if t.text not in a_types)
        token_counts["o_prsv"] += sum(1 for t in o_tokens if t.text in a_types)
        token_counts["a_add"] += sum(1 for t in a_tokens if t.text not in o_types)
        token_counts["a_prsv"] += sum(1 for t in a_tokens if t.text in o_types)
        for name, flag in (
            ("rmv", rel.has_rmv),
            ("prsv", rel.has_prsv),
            ("add", rel.has_add),
            ("reord", rel.has_reord),
        ):
            if flag:
                row_counts[name] += 1

    def shares(counts: Counter) -> dict[str, float]:
        o_total = counts["o_rmv"] + counts["o_prsv"]
        a_total = counts["a_add"] + counts["a_prsv"]
        return {
            "o_rmv": 100.0 * counts["o_rmv"] / o_total if o_total else 0.0,
            "o_prsv": 100.0 * counts["o_prsv"] / o_total if o_total else 0.0,
            "a_add": 100.0 * counts["a_add"] / a_total if a_total else 0.0,
            "a_prsv": 100.0 * counts["a_prsv"] / a_total if a_total else 0.0,
        }

    return {
        "rows": rows,
        "by_type": shares(type_counts),
        "by_token": shares(token_counts),
        "rows_percent": {
            name: (100.0 * row_counts[name] / rows if rows else 0.0)
            for name in ("rmv", "prsv", "add", "reord")
        },
    }


def category_stats(row_tokens: Iterable[RowTokens], lexicon: frozenset[str]) -> dict:
    """Function vs content shares among all original words (O), removed
    words (O_rmv), abridged words (A), and added words (A_add).

    Populations are per-row type sets accumulated across rows, matching
    the relation counts.
    """
    func = Counter()
    totals = Counter()
    for o_tokens, a_tokens in row_tokens:
        o_types = {t.text for t in o_tokens}
        a_types = {t.text for t in a_tokens}
        groups = {
            "O": o_types,
            "O_rmv": o_types - a_types,
            "A": a_types,
            "A_add": a_types - o_types,
        }
        for name, types in groups.items():
            totals[name] += len(types)
            func[name] += sum(1 for t in types if is_function_word(t, lexicon))
    out = {}
    for name in ("O", "O_rmv", "A", "A_add"):
        total = totals[name]
        share = 100.0 * func[name] / total if total else 0.0
        out[name] = {
            "count": total,
            "function": share,
            "content": 100.0 - share if total else 0.0,
        }
    return out


@dataclass(frozen=True)
class CorpusSummary:
    """Aggregate sizes of an aligned dataset plus the two distributions."""

    chapters: int
    rows: int
    totals: dict[str, int]
    per_chapter_mean: dict[str, float]
    pct_a_sents: float
    pct_a_words: float
    row_sizes: dict
    bins: dict


def _doc_counts(document) -> tuple[int, int, int]:
    return (
        len(document.paragraph_spans),
        document.num_sentences,
        len(tokenize_words(document)),
    )


def corpus_summary(dataset: Sequence[tuple[ChapterPair, list[AlignmentRow]]]) -> CorpusSummary:
    """Totals, per-chapter means, and size/score distributions."""
    totals = Counter()
    all_rows: list[AlignmentRow] = []
    for pair, rows in dataset:
        o_pars, o_sents, o_wrds = _doc_counts(pair.original)
        a_pars, a_sents, a_wrds = _doc_counts(pair.abridged)
        totals.update(
            o_pars=o_pars, o_sents=o_sents, o_wrds=o_wrds,
            a_pars=a_pars, a_sents=a_sents, a_wrds=a_wrds,
        )
        all_rows.extend(rows)
    chapters = len(dataset)
    keys = ("o_pars", "a_pars", "o_sents", "a_sents", "o_wrds", "a_wrds")
    return CorpusSummary(
        chapters=chapters,
        rows=len(all_rows),
        totals={k: totals[k] for k in keys},
        per_chapter_mean={k: (totals[k] / chapters if chapters else 0.0) for k in keys},
        pct_a_sents=100.0 * totals["a_sents"] / totals["o_sents"] if totals["o_sents"] else 0.0,
        pct_a_words=100.0 * totals["a_wrds"] / totals["o_wrds"] if totals["o_wrds"] else 0.0,
        row_sizes=size_distribution(all_rows),
        bins=score_bins(all_rows),
    )


def stats_report(
    dataset: Sequence[tuple[ChapterPair, list[AlignmentRow]]],
    lexicon: frozenset[str],
) -> dict:
    """Full statistics report over an aligned dataset, as plain dicts."""
    summary = corpus_summary(dataset)
    row_tokens = [
        row_span_tokens(pair.original, pair.abridged, row)
        for pair, rows in dataset
        for row in rows
    ]
    return {
        "summary": {
            "chapters": summary.chapters,
            "rows": summary.rows,
            "totals": summary.totals,
            "per_chapter_mean": summary.per_chapter_mean,
            "pct_a_sents": summary.pct_a_sents,
            "pct_a_words": summary.pct_a_words,
        },
        "row_sizes": summary.row_sizes,
        "score_bins": summary.bins,
        "lexical_relations": relation_report(row_tokens),
        "categories": category_stats(row_tokens, lexicon),
    }
