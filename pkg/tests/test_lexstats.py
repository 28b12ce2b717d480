"""Distributions, lexical relations and the function/content split."""

from __future__ import annotations

import random

import pytest

from abridger.aligner import AlignmentRow, align_chapter
from abridger.ingest import ChapterPair, Document, word_tokens
from abridger.lexstats import (
    SCORE_BIN_LABELS,
    SIZE_CATEGORIES,
    category_stats,
    corpus_summary,
    default_lexicon,
    detect_reordering,
    is_function_word,
    lexical_relations,
    load_lexicon,
    relation_report,
    score_bin,
    score_bins,
    size_category,
    size_distribution,
    stats_report,
)

ORIG = "The letter was not unproductive. It re-established peace and kindness."
ABR = "The letter re-established peace and kindness."


def make_pair(orig: str, abr: str) -> ChapterPair:
    return ChapterPair(
        chapter_id="c",
        book_id="b",
        original=Document.from_text("o", orig),
        abridged=Document.from_text("a", abr),
    )


def random_rows(rng: random.Random, n: int) -> list[AlignmentRow]:
    rows = []
    o_next = a_next = 0
    for _ in range(n):
        a_len = rng.choice([0, 1, 1, 1, 2, 3])
        o_len = 1 if a_len == 0 else rng.choice([1, 1, 1, 2, 3])
        score = rng.choice([0.0, rng.random(), 1.0])
        rows.append(
            AlignmentRow(o_start=o_next, o_len=o_len, a_start=a_next, a_len=a_len, score=score)
        )
        o_next += o_len
        a_next += a_len
    return rows


class TestReordering:
    def test_swapped_halves(self):
        assert detect_reordering(word_tokens("a b c d"), word_tokens("c d a b"))

    def test_order_preserving_subset(self):
        assert not detect_reordering(word_tokens(ORIG), word_tokens(ABR))

    def test_single_slice_is_never_a_reordering(self):
        assert not detect_reordering(word_tokens("a b"), word_tokens("a b"))

    def test_disjoint_sides(self):
        assert not detect_reordering(word_tokens("a b"), word_tokens("c d"))


class TestLexicalRelations:
    def test_letter_pair_counts(self):
        rel = lexical_relations(word_tokens(ORIG), word_tokens(ABR))
        # original types: the letter was not unproductive . it
        #                 re-established peace and kindness  (11)
        assert rel.o_rmv == 4  # was, not, unproductive, it
        assert rel.o_prsv == 7
        assert rel.a_add == 0
        assert rel.a_prsv == 7
        assert rel.has_rmv and rel.has_prsv
        assert not rel.has_add and not rel.has_reord

    def test_additions(self):
        rel = lexical_relations(word_tokens("old words"), word_tokens("new words"))
        assert (rel.o_rmv, rel.o_prsv, rel.a_add, rel.a_prsv) == (1, 1, 1, 1)
        assert rel.has_add


class TestScoreBins:
    def test_bin_edges(self):
        assert score_bin(0.0) == "0.0"
        assert score_bin(-0.5) == "0.0"
        assert score_bin(1e-9) == "(0,0.25]"
        assert score_bin(0.25) == "(0,0.25]"
        assert score_bin(0.2500001) == "(0.25,0.5]"
        assert score_bin(0.5) == "(0.25,0.5]"
        assert score_bin(0.75) == "(0.5,0.75]"
        assert score_bin(0.999) == "(0.75,1.0)"
        assert score_bin(1.0) == "1.0"
        assert score_bin(1.5) == "1.0"

    def test_percentages_sum_to_100(self):
        rng = random.Random(5)
        rows = random_rows(rng, 500)
        bins = score_bins(rows)
        assert bins["count"] == 500
        assert sum(bins["percent"].values()) == pytest.approx(100.0, abs=0.1)
        assert set(bins["percent"]) == set(SCORE_BIN_LABELS)

    def test_empty_input(self):
        bins = score_bins([])
        assert bins["count"] == 0
        assert all(v == 0.0 for v in bins["percent"].values())


class TestSizeDistribution:
    def test_categories(self):
        mk = lambda o, a: AlignmentRow(o_start=0, o_len=o, a_start=0, a_len=a)
        assert size_category(mk(1, 1)) == "(1,1)"
        assert size_category(mk(1, 0)) == "(1,0)"
        assert size_category(mk(2, 1)) == "(2+,1)"
        assert size_category(mk(3, 1)) == "(2+,1)"
        assert size_category(mk(1, 2)) == "(1,2+)"
        assert size_category(mk(2, 5)) == "(2+,2+)"

    def test_multi_sentence_empty_row_rejected(self):
        with pytest.raises(ValueError):
            size_category(AlignmentRow(o_start=0, o_len=2, a_start=0, a_len=0))

    def test_percentages_sum_to_100(self):
        rng = random.Random(6)
        rows = random_rows(rng, 500)
        dist = size_distribution(rows)
        assert sum(dist["percent"].values()) == pytest.approx(100.0, abs=0.1)
        assert set(dist["percent"]) == set(SIZE_CATEGORIES)


class TestLexicon:
    def test_load(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("# closed class\nThe\nof\n\nand\n")
        assert load_lexicon(path) == {"the", "of", "and"}

    def test_default_lexicon_contents(self):
        lex = default_lexicon()
        assert {"the", "and", "of", "was", "not", "it"} <= lex
        assert "letter" not in lex
        assert "kindness" not in lex

    def test_function_words(self):
        lex = frozenset({"the"})
        assert is_function_word("the", lex)
        assert is_function_word(",", lex)  # punctuation always counts
        assert not is_function_word("letter", lex)


class TestRelationReport:
    def test_letter_pair_row(self):
        row = (word_tokens(ORIG), word_tokens(ABR))
        report = relation_report([row])
        assert report["rows"] == 1
        assert report["by_type"]["o_rmv"] == pytest.approx(100 * 4 / 11)
        assert report["by_type"]["o_prsv"] == pytest.approx(100 * 7 / 11)
        # 12 original tokens, 4 removed occurrences
        assert report["by_token"]["o_rmv"] == pytest.approx(100 * 4 / 12)
        assert report["rows_percent"] == {
            "rmv": 100.0, "prsv": 100.0, "add": 0.0, "reord": 0.0
        }

    def test_shares_partition_each_side(self):
        rng = random.Random(7)
        vocab = ["a", "b", "c", "d", "e", ",", "."]
        rows = []
        for _ in range(200):
            o = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 10)))
            a = " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 8)))
            rows.append((word_tokens(o), word_tokens(a)))
        report = relation_report(rows)
        for variant in ("by_type", "by_token"):
            shares = report[variant]
            assert shares["o_rmv"] + shares["o_prsv"] == pytest.approx(100.0, abs=0.1)
            assert shares["a_add"] + shares["a_prsv"] == pytest.approx(100.0, abs=0.1)

    def test_empty_input(self):
        report = relation_report([])
        assert report["rows"] == 0
        assert report["by_type"]["o_rmv"] == 0.0


class TestCategoryStats:
    def test_small_example(self):
        row = (word_tokens("the cat sat ."), word_tokens("the cat ."))
        stats = category_stats([row], frozenset({"the"}))
        # O = {the, cat, sat, .}: "the" and "." are function words
        assert stats["O"]["count"] == 4
        assert stats["O"]["function"] == pytest.approx(50.0)
        assert stats["O"]["content"] == pytest.approx(50.0)
        # O_rmv = {sat}, all content
        assert stats["O_rmv"]["count"] == 1
        assert stats["O_rmv"]["function"] == 0.0
        assert stats["A"]["count"] == 3
        assert stats["A_add"]["count"] == 0
        assert stats["A_add"]["function"] == 0.0

    def test_function_content_partition(self):
        rng = random.Random(8)
        vocab = ["the", "was", "cat", "sat", "mat", ".", ","]
        rows = []
        for _ in range(100):
            o = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 8)))
            a = " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 6)))
            rows.append((word_tokens(o), word_tokens(a)))
        stats = category_stats(rows, default_lexicon())
        for name, entry in stats.items():
            if entry["count"]:
                assert entry["function"] + entry["content"] == pytest.approx(100.0, abs=0.1)


class TestCorpusSummary:
    def dataset(self):
        pair = make_pair(ORIG, ABR)
        return [(pair, align_chapter(pair))]

    def test_letter_pair_summary(self):
        summary = corpus_summary(self.dataset())
        assert summary.chapters == 1
        assert summary.rows == 1
        assert summary.totals["o_sents"] == 2
        assert summary.totals["a_sents"] == 1
        assert summary.totals["o_wrds"] == 12  # punctuation counts as a word token
        assert summary.totals["a_wrds"] == 7
        assert summary.pct_a_sents == pytest.approx(50.0)
        assert summary.pct_a_words == pytest.approx(100 * 7 / 12)
        assert summary.row_sizes["percent"]["(2+,1)"] == pytest.approx(100.0)
        assert summary.bins["percent"]["1.0"] == pytest.approx(100.0)

    def test_stats_report_shape(self):
        report = stats_report(self.dataset(), default_lexicon())
        assert set(report) == {
            "summary", "row_sizes", "score_bins", "lexical_relations", "categories"
        }
        assert report["summary"]["rows"] == 1
        assert report["lexical_relations"]["rows_percent"]["rmv"] == 100.0
        assert report["categories"]["O"]["count"] == 11
