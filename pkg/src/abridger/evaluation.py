"""Scoring of predicted abridgements against the human reference.

Three F1 families compare which original word types a prediction
preserves, removes, and adds, relative to the reference; ROUGE-L F1 and
the predicted token count round out the per-chapter report. Corpus
scores come in two aggregations: the headline unweighted per-chapter
mean and a pooled variant computed from summed counts.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .ingest import word_tokens
from .similarity import lcs_length


class PRF(NamedTuple):
    p: float
    r: float
    f1: float


@dataclass(frozen=True)
class EvalCounts:
    """Raw per-chapter tallies from which every score derives."""

    pred_tokens: int
    ref_tokens: int
    lcs: int
    prsv_correct: int
    prsv_pred: int
    prsv_ref: int
    rmv_correct: int
    rmv_pred: int
    rmv_ref: int
    add_correct: int
    add_pred: int
    add_ref: int


@dataclass(frozen=True)
class EvalReport:
    token_count: int
    r_l: float
    prsv: PRF
    rmv: PRF
    add: PRF

    def to_dict(self) -> dict:
        return {
            "toks": self.token_count,
            "r_l": self.r_l,
            "prsv": self.prsv.f1, "prsv_p": self.prsv.p, "prsv_r": self.prsv.r,
            "rmv": self.rmv.f1, "rmv_p": self.rmv.p, "rmv_r": self.rmv.r,
            "add": self.add.f1, "add_p": self.add.p, "add_r": self.add.r,
        }


def _ratio(num: int, den: int, other_empty: bool) -> float:
    """Share with the zero-denominator rule: an empty denominator scores 1
    when the counterpart set is empty too (nothing to get wrong), else 0."""
    if den == 0:
        return 1.0 if other_empty else 0.0
    return num / den


def _f1(p: float, r: float) -> float:
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)


def _set_prf(pred_set: set, ref_set: set) -> tuple[int, PRF]:
    correct = len(pred_set & ref_set)
    p = _ratio(correct, len(pred_set), not ref_set)
    r = _ratio(correct, len(ref_set), not pred_set)
    return correct, PRF(p, r, _f1(p, r))


def prsv_f1(orig_words: set, pred_words: set, ref_words: set) -> PRF:
    """How well the prediction preserves the words the reference preserves."""
    return _set_prf(orig_words & pred_words, orig_words & ref_words)[1]


def rmv_f1(orig_words: set, pred_words: set, ref_words: set) -> PRF:
    """How well the prediction removes the words the reference removes."""
    return _set_prf(orig_words - pred_words, orig_words - ref_words)[1]


def add_f1(orig_words: set, pred_words: set, ref_words: set) -> PRF:
    """How well the prediction adds the new words the reference adds."""
    return _set_prf(pred_words - orig_words, ref_words - orig_words)[1]


def evaluate_counts(original_text: str, predicted_text: str, reference_text: str) -> EvalCounts:
    orig_toks = [t.text for t in word_tokens(original_text)]
    pred_toks = [t.text for t in word_tokens(predicted_text)]
    ref_toks = [t.text for t in word_tokens(reference_text)]
    orig, pred, ref = set(orig_toks), set(pred_toks), set(ref_toks)
    prsv_correct = len((orig & pred) & (orig & ref))
    rmv_correct = len((orig - pred) & (orig - ref))
    add_correct = len((pred - orig) & (ref - orig))
    return EvalCounts(
        pred_tokens=len(pred_toks),
        ref_tokens=len(ref_toks),
        lcs=lcs_length(pred_toks, ref_toks),
        prsv_correct=prsv_correct,
        prsv_pred=len(orig & pred),
        prsv_ref=len(orig & ref),
        rmv_correct=rmv_correct,
        rmv_pred=len(orig - pred),
        rmv_ref=len(orig - ref),
        add_correct=add_correct,
        add_pred=len(pred - orig),
        add_ref=len(ref - orig),
    )


def report_from_counts(counts: EvalCounts) -> EvalReport:
    def prf(correct: int, pred: int, ref: int) -> PRF:
        p = _ratio(correct, pred, ref == 0)
        r = _ratio(correct, ref, pred == 0)
        return PRF(p, r, _f1(p, r))

    lcs_p = counts.lcs / counts.pred_tokens if counts.pred_tokens else 0.0
    lcs_r = counts.lcs / counts.ref_tokens if counts.ref_tokens else 0.0
    return EvalReport(
        token_count=counts.pred_tokens,
        r_l=_f1(lcs_p, lcs_r),
        prsv=prf(counts.prsv_correct, counts.prsv_pred, counts.prsv_ref),
        rmv=prf(counts.rmv_correct, counts.rmv_pred, counts.rmv_ref),
        add=prf(counts.add_correct, counts.add_pred, counts.add_ref),
    )


def evaluate(original_text: str, predicted_text: str, reference_text: str) -> EvalReport:
    """Per-chapter scores of a predicted abridgement; see module docstring."""
    return report_from_counts(evaluate_counts(original_text, predicted_text, reference_text))


def aggregate(per_chapter: Sequence[tuple[EvalReport, EvalCounts]]) -> dict:
    """Corpus scores: per-chapter mean (headline) plus pooled counts."""
    if not per_chapter:
        raise ValueError("no chapters to aggregate")
    reports = [rep.to_dict() for rep, _ in per_chapter]
    macro = {
        key: sum(rep[key] for rep in reports) / len(reports) for key in reports[0]
    }
    counts = [c for _, c in per_chapter]
    pooled = EvalCounts(
        *[sum(getattr(c, field) for c in counts) for field in EvalCounts.__dataclass_fields__]
    )
    micro = report_from_counts(pooled).to_dict()
    micro["toks"] = macro["toks"]
    return {"chapters": len(per_chapter), "macro": macro, "micro": micro}
