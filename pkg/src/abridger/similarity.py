"""Word-overlap similarity scores used for alignment and evaluation.

N-gram precision uses clipped multiset counts (each reference n-gram can be
matched at most as often as it occurs). ROUGE-L is the F1 over the longest
common subsequence of two whole token sequences, with no stemming or
stopword filtering.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum


class SimilarityKind(str, Enum):
    ROUGE1_PRECISION = "rouge1_precision"
    ROUGE2_PRECISION = "rouge2_precision"

    @property
    def n(self) -> int:
        return 1 if self is SimilarityKind.ROUGE1_PRECISION else 2

    @classmethod
    def from_cli_name(cls, name: str) -> "SimilarityKind":
        table = {"rouge1p": cls.ROUGE1_PRECISION, "rouge2p": cls.ROUGE2_PRECISION}
        try:
            return table[name]
        except KeyError:
            raise ValueError(f"unknown similarity {name!r}; expected rouge1p or rouge2p")


@dataclass(frozen=True)
class SimilarityConfig:
    kind: SimilarityKind = SimilarityKind.ROUGE1_PRECISION


def ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n_precision(hyp_tokens: list[str], ref_tokens: list[str], n: int) -> float:
    """Fraction of hypothesis n-grams present in the reference (clipped)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = len(hyp_tokens) - n + 1
    if total <= 0:
        return 0.0
    hyp_counts = ngram_counts(hyp_tokens, n)
    ref_counts = ngram_counts(ref_tokens, n)
    matched = sum(min(count, ref_counts[gram]) for gram, count in hyp_counts.items())
    return matched / total


def lcs_length(a: list[str], b: list[str]) -> int:
    """Longest common subsequence length (O(len(b)) memory)."""
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    previous = [0] * (len(b) + 1)
    for item in a:
        current = [0]
        for j, other in enumerate(b, start=1):
            if item == other:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l_f1(pred_tokens: list[str], ref_tokens: list[str]) -> float:
    """LCS-based F1 between two token sequences; 0 when either is empty."""
    if not pred_tokens or not ref_tokens:
        return 0.0
    lcs = lcs_length(pred_tokens, ref_tokens)
    if lcs == 0:
        return 0.0
    precision = lcs / len(pred_tokens)
    recall = lcs / len(ref_tokens)
    return 2 * precision * recall / (precision + recall)


def span_similarity(
    o_span_tokens: list[str],
    a_span_tokens: list[str],
    config: SimilarityConfig = SimilarityConfig(),
) -> float:
    """Similarity of an (original span, abridged span) pair.

    The abridged span is the hypothesis and the original span the
    reference, so the score is the proportion of abridged n-grams that the
    original span covers. An empty abridged span scores 0.
    """
    return rouge_n_precision(a_span_tokens, o_span_tokens, config.kind.n)
