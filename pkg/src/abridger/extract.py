"""Candidate abridgers: copy, random-token, and extractive baselines.

All methods are word-based and deterministic (the random one is seeded).
Token-stream outputs are joined with single spaces; no detokenization is
attempted since downstream metrics only look at words.
"""

from __future__ import annotations

import math
import random
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

from .ingest import Document, tokenize_words
from .passages import Label, TokenLabel


class LabelMismatchError(ValueError):
    pass


class ExtractMethod(str, Enum):
    COPY = "copy"
    RAND_TOKS = "rand"
    EXT_TOKS = "tokens"
    PERFECT_EXT_TOKS = "perfect"
    EXT_SENTS = "sents"


@dataclass(frozen=True)
class ExtractConfig:
    """Method choice plus its knobs.

    ``t`` is the kept-token fraction for the random baseline, ``p`` the
    minimum preserved fraction for sentence extraction.
    """

    method: ExtractMethod
    t: float = 0.6
    p: float = 0.65
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("t must be in [0, 1]")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if self.method is ExtractMethod.RAND_TOKS and self.seed is None:
            raise ValueError("the random baseline needs a seed")


def abridge_copy(chapter: Document) -> str:
    return chapter.raw_text


def abridge_rand_tokens(chapter: Document, t: float, seed: int) -> str:
    """Keep round(t * N) of the N tokens, uniformly at random, in order."""
    tokens = tokenize_words(chapter)
    budget = math.floor(t * len(tokens) + 0.5)
    rng = random.Random(seed)
    keep = sorted(rng.sample(range(len(tokens)), budget))
    return " ".join(tokens[i].text for i in keep)


def _check_labels(chapter: Document, labels: Sequence[TokenLabel]) -> None:
    tokens = tokenize_words(chapter)
    if len(tokens) != len(labels):
        raise LabelMismatchError(
            f"chapter has {len(tokens)} tokens but {len(labels)} labels"
        )
    for tok, lab in zip(tokens, labels):
        if (tok.char_start, tok.char_end) != (lab.token.char_start, lab.token.char_end):
            raise LabelMismatchError(
                f"label offsets ({lab.token.char_start}, {lab.token.char_end}) do not "
                f"match token at ({tok.char_start}, {tok.char_end})"
            )


def abridge_ext_tokens(chapter: Document, labels: Sequence[TokenLabel]) -> str:
    """Space-joined stream of the tokens labeled preserved."""
    _check_labels(chapter, labels)
    return " ".join(lab.token.text for lab in labels if lab.label is Label.PRESERVED)


def abridge_ext_sents(chapter: Document, labels: Sequence[TokenLabel], p: float) -> str:
    """Keep each sentence whose preserved-token fraction is at least p.

    Kept sentences stay verbatim and consecutive kept sentences are
    joined with the whitespace that followed the earlier one, so
    paragraph breaks survive extraction.
    """
    _check_labels(chapter, labels)
    by_start = {lab.token.char_start: lab.label for lab in labels}
    kept = []
    for i in range(chapter.num_sentences):
        sent_tokens = chapter.sentence_tokens(i)
        if not sent_tokens:
            continue
        preserved = sum(1 for t in sent_tokens if by_start[t.char_start] is Label.PRESERVED)
        if preserved / len(sent_tokens) >= p:
            kept.append(i)
    parts = []
    for pos, i in enumerate(kept):
        start, end = chapter.sentence_spans[i]
        parts.append(chapter.raw_text[start:end])
        if pos < len(kept) - 1:
            gap_end = chapter.sentence_spans[i + 1][0] if i + 1 < chapter.num_sentences else end
            parts.append(chapter.raw_text[end:gap_end])
    return "".join(parts)


def match_labels(chapter: Document, triples: Sequence[tuple[int, int, int]]) -> list[TokenLabel]:
    """Pair (start, end, label) triples with the chapter's tokens.

    Raises when counts or offsets disagree, naming the first offender.
    """
    tokens = tokenize_words(chapter)
    if len(tokens) != len(triples):
        raise LabelMismatchError(
            f"chapter has {len(tokens)} tokens but {len(triples)} labels"
        )
    out = []
    for tok, (start, end, value) in zip(tokens, triples):
        if (tok.char_start, tok.char_end) != (start, end):
            raise LabelMismatchError(
                f"label offsets ({start}, {end}) do not match token at "
                f"({tok.char_start}, {tok.char_end})"
            )
        out.append(TokenLabel(tok, Label(value)))
    return out


def abridge_chapter(
    chapter: Document,
    config: ExtractConfig,
    labels: Sequence[TokenLabel] | None = None,
) -> str:
    """Dispatch on method; label-driven methods require resolved labels
    (the perfect variant's labels come from gold rows upstream)."""
    if config.method is ExtractMethod.COPY:
        return abridge_copy(chapter)
    if config.method is ExtractMethod.RAND_TOKS:
        assert config.seed is not None
        return abridge_rand_tokens(chapter, config.t, config.seed)
    if labels is None:
        raise ValueError(f"method {config.method.value!r} needs token labels")
    if config.method in (ExtractMethod.EXT_TOKS, ExtractMethod.PERFECT_EXT_TOKS):
        return abridge_ext_tokens(chapter, labels)
    if config.method is ExtractMethod.EXT_SENTS:
        return abridge_ext_sents(chapter, labels, config.p)
    raise ValueError(f"unknown method {config.method!r}")
