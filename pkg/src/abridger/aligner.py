"""Monotone span alignment between original and abridged chapters.

The aligner segments both sentence sequences of a chapter into consecutive
span pairs ("rows") via dynamic programming. A candidate pair of an
original span of ``o_len`` sentences and an abridged span of ``a_len``
sentences scores ``max(0, sim - (max(o_len, a_len) - 1) * pn)``: similar
pairs score high, oversized pairs are penalized so that minimal alignments
win. Dropped original sentences pair with an empty abridged span, one
sentence per row. The optimal segmentation maximizes the summed penalized
scores over the whole chapter.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .ingest import ChapterPair, Document
from .similarity import SimilarityConfig, span_similarity


class AlignmentError(ValueError):
    pass


@dataclass(frozen=True)
class AlignerConfig:
    """Span-size limits and size penalty for the alignment search."""

    o_max: int = 3
    a_max: int = 5
    pn: float = 0.175
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)

    def __post_init__(self):
        if self.o_max < 1:
            raise ValueError("o_max must be >= 1")
        if self.a_max < 0:
            raise ValueError("a_max must be >= 0")
        if not 0.0 <= self.pn <= 1.0:
            raise ValueError("pn must be in [0, 1]")


@dataclass
class AlignmentRow:
    """One aligned (original span, abridged span) pair.

    ``score`` is the raw (unpenalized) span similarity; review state lives
    in ``flagged``/``validated``.
    """

    o_start: int
    o_len: int
    a_start: int
    a_len: int
    score: float = 0.0
    flagged: bool = False
    validated: bool = False

    def o_range(self) -> tuple[int, int]:
        return (self.o_start, self.o_start + self.o_len)

    def a_range(self) -> tuple[int, int]:
        return (self.a_start, self.a_start + self.a_len)


def pair_score(sim: float, o_len: int, a_len: int, pn: float) -> float:
    """Penalized span-pair score: larger pairs lose ``pn`` per extra sentence."""
    size = max(o_len, a_len)
    return max(0.0, sim - (size - 1) * pn)


class _SpanScorer:
    """Caches per-sentence token counts so span similarities stay cheap."""

    def __init__(self, o_sents: list[list[str]], a_sents: list[list[str]], config: SimilarityConfig):
        self.o_sents = o_sents
        self.a_sents = a_sents
        self.config = config
        self._cache: dict[tuple[int, int, int, int], float] = {}

    def similarity(self, i: int, o_len: int, j: int, a_len: int) -> float:
        """sim of o sentences [i-o_len, i) against a sentences [j-a_len, j)."""
        if a_len == 0:
            return 0.0
        key = (i, o_len, j, a_len)
        score = self._cache.get(key)
        if score is None:
            o_tokens = [t for s in self.o_sents[i - o_len : i] for t in s]
            a_tokens = [t for s in self.a_sents[j - a_len : j] for t in s]
            score = span_similarity(o_tokens, a_tokens, self.config)
            self._cache[key] = score
        return score


def align_sentences(
    o_sents: list[list[str]],
    a_sents: list[list[str]],
    config: AlignerConfig = AlignerConfig(),
) -> list[AlignmentRow]:
    """Align two tokenized sentence sequences into rows.

    Every original sentence lands in exactly one row (1..o_max per row);
    abridged sentences partition across the non-empty rows (1..a_max per
    row); a dropped original sentence forms its own (1, 0) row. Candidate
    spans at each position are scanned smallest-first and replaced only on
    a strictly better accumulated score, so ties go to minimal rows.
    """
    n_o, n_a = len(o_sents), len(a_sents)
    if n_o == 0:
        raise AlignmentError("original chapter has no sentences")
    if config.a_max == 0 and n_a > 0:
        raise AlignmentError("a_max=0 cannot cover a non-empty abridged chapter")
    if n_a > n_o * max(config.a_max, 1):
        raise AlignmentError(
            f"abridged chapter too long to align: {n_a} sentences vs "
            f"{n_o} original with a_max={config.a_max}"
        )

    scorer = _SpanScorer(o_sents, a_sents, config.similarity)
    neg = float("-inf")
    # best[i][j]: max total penalized score covering o[:i] and a[:j]
    best = [[neg] * (n_a + 1) for _ in range(n_o + 1)]
    back: list[list[tuple[int, int] | None]] = [[None] * (n_a + 1) for _ in range(n_o + 1)]
    best[0][0] = 0.0

    for i in range(1, n_o + 1):
        for j in range(n_a + 1):
            for o_len in range(1, min(config.o_max, i) + 1):
                for a_len in range(min(config.a_max, j) + 1):
                    if a_len == 0 and o_len != 1:
                        continue
                    prev = best[i - o_len][j - a_len]
                    if prev == neg:
                        continue
                    sim = scorer.similarity(i, o_len, j, a_len)
                    cand = prev + pair_score(sim, o_len, a_len, config.pn)
                    if cand > best[i][j]:
                        best[i][j] = cand
                        back[i][j] = (o_len, a_len)

    if best[n_o][n_a] == neg:
        raise AlignmentError("no feasible alignment under the span-size limits")

    rows: list[AlignmentRow] = []
    i, j = n_o, n_a
    while i > 0 or j > 0:
        step = back[i][j]
        assert step is not None
        o_len, a_len = step
        i -= o_len
        j -= a_len
        sim = scorer.similarity(i + o_len, o_len, j + a_len, a_len)
        rows.append(AlignmentRow(o_start=i, o_len=o_len, a_start=j, a_len=a_len, score=sim))
    rows.reverse()
    return rows


def align_chapter(pair: ChapterPair, config: AlignerConfig = AlignerConfig()) -> list[AlignmentRow]:
    """Align one chapter pair; see :func:`align_sentences`."""
    o_sents = _sentence_token_texts(pair.original)
    a_sents = _sentence_token_texts(pair.abridged)
    return align_sentences(o_sents, a_sents, config)


def _sentence_token_texts(document: Document) -> list[list[str]]:
    return [[t.text for t in document.sentence_tokens(i)] for i in range(document.num_sentences)]


def flag_rows(rows: list[AlignmentRow], threshold: float = 0.9) -> list[AlignmentRow]:
    """Mark rows that warrant human review.

    A row is flagged when its score is below ``threshold`` and it either
    has a multi-sentence abridged span or sits next to a row whose
    abridged span is empty. Only the ``flagged`` field is touched.
    """
    for k, row in enumerate(rows):
        empty_neighbor = (k > 0 and rows[k - 1].a_len == 0) or (
            k + 1 < len(rows) and rows[k + 1].a_len == 0
        )
        row.flagged = row.score < threshold and (row.a_len >= 2 or empty_neighbor)
    return rows


def validate_partition(rows: list[AlignmentRow]) -> tuple[int, int]:
    """Check the row-partition invariants; returns (#original, #abridged).

    Original ranges must tile [0, n_o) in order; abridged ranges of the
    non-empty rows must tile [0, n_a) in order.
    """
    o_next = 0
    a_next = 0
    for row in rows:
        if row.o_len < 1 or row.a_len < 0:
            raise AlignmentError(f"bad row sizes ({row.o_len}, {row.a_len})")
        if row.o_start != o_next:
            raise AlignmentError(
                f"original spans do not tile: expected start {o_next}, got {row.o_start}"
            )
        o_next += row.o_len
        if row.a_len > 0:
            if row.a_start != a_next:
                raise AlignmentError(
                    f"abridged spans do not tile: expected start {a_next}, got {row.a_start}"
                )
            a_next += row.a_len
    return o_next, a_next


def _positive_pairs(rows: list[AlignmentRow]) -> set[tuple[int, int]]:
    pairs = set()
    for row in rows:
        for i in range(row.o_start, row.o_start + row.o_len):
            for j in range(row.a_start, row.a_start + row.a_len):
                pairs.add((i, j))
    return pairs


def row_f1(
    pred_rows: list[AlignmentRow], gold_rows: list[AlignmentRow]
) -> tuple[float, float, float]:
    """Precision/recall/F1 of predicted rows against gold rows.

    Every (original sentence, abridged sentence) pair sharing a row is a
    positive; the score compares predicted positives against gold
    positives. Both row lists must partition the same chapter.
    """
    pred_counts = validate_partition(pred_rows)
    gold_counts = validate_partition(gold_rows)
    if pred_counts != gold_counts:
        raise AlignmentError(
            f"row lists cover different chapters: {pred_counts} vs {gold_counts} sentences"
        )
    pred = _positive_pairs(pred_rows)
    gold = _positive_pairs(gold_rows)
    if not pred and not gold:
        return (1.0, 1.0, 1.0)
    if not pred or not gold:
        return (0.0, 0.0, 0.0)
    correct = len(pred & gold)
    precision = correct / len(pred)
    recall = correct / len(gold)
    if precision + recall == 0:
        return (0.0, 0.0, 0.0)
    return (precision, recall, 2 * precision * recall / (precision + recall))


@dataclass(frozen=True)
class AnnotationSet:
    """Binary labels from several raters over a shared set of items.

    ``labels`` maps item id -> {rater id -> 0/1}; every rater must label
    every item.
    """

    labels: dict[str, dict[str, int]]

    def raters(self) -> list[str]:
        raters: set[str] = set()
        for per_item in self.labels.values():
            raters.update(per_item)
        return sorted(raters)


def fleiss_kappa(annotations: AnnotationSet) -> float:
    """Chance-corrected agreement over two categories.

    Raises when the matrix is incomplete, has fewer than two raters, or is
    degenerate (every rating identical, which makes expected agreement 1).
    """
    items = list(annotations.labels)
    if not items:
        raise ValueError("no items to compute agreement over")
    raters = annotations.raters()
    if len(raters) < 2:
        raise ValueError("at least two raters are required")
    for item in items:
        per_item = annotations.labels[item]
        missing = [r for r in raters if r not in per_item]
        if missing:
            raise ValueError(f"item {item!r} lacks labels from raters {missing}")
        bad = [v for v in per_item.values() if v not in (0, 1)]
        if bad:
            raise ValueError(f"item {item!r} has non-binary labels {bad}")

    n = len(raters)
    category_totals = Counter()
    agreement_sum = 0.0
    for item in items:
        counts = Counter(annotations.labels[item][r] for r in raters)
        category_totals.update(counts)
        agreement_sum += (sum(c * c for c in counts.values()) - n) / (n * (n - 1))
    p_bar = agreement_sum / len(items)
    total = n * len(items)
    p_e = sum((count / total) ** 2 for count in category_totals.values())
    if p_e >= 1.0:
        raise ValueError(
            "expected agreement is 1 (all ratings identical); kappa is undefined"
        )
    return (p_bar - p_e) / (1 - p_e)
