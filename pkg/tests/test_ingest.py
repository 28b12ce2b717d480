"""Sentence segmentation, tokenization and chapter pairing."""

from __future__ import annotations

import random

import pytest

from abridger.ingest import (
    ConfigurationError,
    Document,
    PairingError,
    detect_chapters,
    default_heading_patterns,
    ingest_book_pair,
    is_word_token,
    load_heading_patterns,
    pair_chapters,
    segment_sentences,
    token_texts,
    tokenize_words,
    word_tokens,
)


def sentences(text: str) -> list[str]:
    return [text[a:b] for a, b in segment_sentences(text)]


class TestSegmentation:
    def test_plain_sentences(self):
        assert sentences("The dog barked. The cat ran away.") == [
            "The dog barked.",
            "The cat ran away.",
        ]

    def test_question_and_exclamation(self):
        assert sentences("Who was there? Nobody! Nobody at all.") == [
            "Who was there?",
            "Nobody!",
            "Nobody at all.",
        ]

    def test_abbreviation_does_not_break(self):
        assert sentences("Mr. Darcy bowed. Mrs. Bennet smiled.") == [
            "Mr. Darcy bowed.",
            "Mrs. Bennet smiled.",
        ]

    def test_single_initials(self):
        got = sentences("W. M. Thackeray wrote it. She read it.")
        assert got == ["W. M. Thackeray wrote it.", "She read it."]

    def test_closing_quote_attaches_to_terminator(self):
        # quoted exclamations end a sentence; attribution starts the next
        text = '"Stop!" she cried. He stopped.'
        assert sentences(text) == ['"Stop!"', "she cried.", "He stopped."]

    def test_ellipsis_followed_by_lowercase_continues(self):
        assert sentences("He paused... then spoke. Done.") == [
            "He paused... then spoke.",
            "Done.",
        ]

    def test_ellipsis_followed_by_uppercase_breaks(self):
        assert sentences("He paused... Then he spoke.") == [
            "He paused...",
            "Then he spoke.",
        ]

    def test_unterminated_tail_is_a_sentence(self):
        assert sentences("It ended. And then") == ["It ended.", "And then"]

    def test_blank_line_forces_boundary(self):
        assert sentences("no terminator here\n\nNext paragraph.") == [
            "no terminator here",
            "Next paragraph.",
        ]

    def test_decimal_number_does_not_break(self):
        assert sentences("It cost 3.50 dollars. Cheap.") == [
            "It cost 3.50 dollars.",
            "Cheap.",
        ]

    def test_spans_are_monotone_and_whitespace_separated(self):
        rng = random.Random(20260825)
        words = ["alpha", "beta", "Gamma", "delta", "Mr.", "omega"]
        enders = [".", "!", "?", "...", '."']
        for _ in range(200):
            parts = []
            for _ in range(rng.randint(1, 6)):
                parts.append(" ".join(rng.choice(words) for _ in range(rng.randint(1, 7))))
                parts.append(rng.choice(enders))
                parts.append(rng.choice([" ", " ", "\n", "\n\n"]))
            text = "".join(parts)
            spans = segment_sentences(text)
            prev_end = 0
            for start, end in spans:
                assert 0 <= start < end <= len(text)
                assert start >= prev_end
                assert text[prev_end:start].strip() == ""
                prev_end = end
            assert text[prev_end:].strip() == ""


class TestParagraphs:
    def test_paragraph_spans_cover_sentence_groups(self):
        doc = Document.from_text("d", "One here. Two here.\n\nThree here.\n")
        assert [doc.raw_text[a:b] for a, b in doc.paragraph_spans] == [
            "One here. Two here.",
            "Three here.",
        ]

    def test_windows_line_endings_tolerated(self):
        doc = Document.from_text("d", "First one.\r\n\r\nSecond one.\r\n")
        assert len(doc.paragraph_spans) == 2

    def test_span_range(self):
        doc = Document.from_text("d", "Aa bb. Cc dd. Ee ff.")
        lo, hi = doc.span_range(0, 2)
        assert doc.raw_text[lo:hi] == "Aa bb. Cc dd."
        with pytest.raises(ValueError):
            doc.span_range(0, 0)


class TestTokenizer:
    def test_words_and_punctuation(self):
        assert token_texts("Hello, world!") == ["hello", ",", "world", "!"]

    def test_internal_apostrophe_and_hyphen(self):
        assert token_texts("It's re-established.") == ["it's", "re-established", "."]

    def test_curly_apostrophe(self):
        assert token_texts("don’t stop") == ["don’t", "stop"]

    def test_underscore_is_not_a_word_character(self):
        assert token_texts("_foo_") == ["_", "foo", "_"]

    def test_offsets_point_at_source(self):
        text = "The Letter was Short."
        for tok in word_tokens(text):
            assert text[tok.char_start : tok.char_end].lower() == tok.text

    def test_tokenize_range_checks_bounds(self):
        doc = Document.from_text("d", "Small text.")
        with pytest.raises(ValueError):
            tokenize_words(doc, (5, 200))

    def test_is_word_token(self):
        assert is_word_token("don't")
        assert is_word_token("3")
        assert not is_word_token(",")
        assert not is_word_token("_")


class TestChapters:
    BOOK = (
        "Some front matter.\n"
        "Chapter 1: The Letter\n"
        "First body line.\n\n"
        "Chapter 2: The Reply\n"
        "Second body line.\n"
    )

    def test_detect_chapters(self):
        chapters = detect_chapters(self.BOOK, default_heading_patterns())
        headings = [h for h, _ in chapters]
        assert headings == ["Chapter 1: The Letter", "Chapter 2: The Reply"]
        # bodies tile the remainder, front matter excluded
        _, (start, end) = chapters[0]
        assert self.BOOK[start:end] == "First body line.\n\n"

    def test_heading_must_fill_the_line(self):
        text = "She mentioned Chapter 1: The Letter in passing.\n"
        chapters = detect_chapters(text, default_heading_patterns())
        assert chapters == [("(untitled)", (0, len(text)))]

    def test_no_match_gives_single_untitled_chapter(self):
        chapters = detect_chapters("Just prose.", ["^Chapter [0-9]+$"])
        assert chapters == [("(untitled)", (0, 11))]

    def test_invalid_pattern_rejected(self):
        with pytest.raises(ConfigurationError):
            detect_chapters("text", ["(unclosed"])
        with pytest.raises(ConfigurationError):
            detect_chapters("text", [])

    def test_pair_chapters_positionally(self):
        pairs = pair_chapters(
            [("Chapter 1", "Full text one."), ("Chapter 2", "Full text two.")],
            [("Ch 1", "Short one."), ("Ch 2", "Short two.")],
            book_id="b",
        )
        assert [p.chapter_id for p in pairs] == ["Chapter 1", "Chapter 2"]
        assert pairs[0].book_id == "b"
        assert pairs[1].abridged.raw_text == "Short two."

    def test_pair_count_mismatch_names_heading(self):
        with pytest.raises(PairingError, match="Chapter 2"):
            pair_chapters(
                [("Chapter 1", "a"), ("Chapter 2", "b")],
                [("Chapter 1", "a")],
            )

    def test_duplicate_headings_deduplicated(self):
        pairs = pair_chapters(
            [("Chapter 1", "a"), ("Chapter 1", "b")],
            [("Chapter 1", "c"), ("Chapter 1", "d")],
        )
        assert [p.chapter_id for p in pairs] == ["Chapter 1", "Chapter 1 (2)"]

    def test_ingest_book_pair(self):
        original = "Chapter 1: One\nLong text here.\nChapter 2: Two\nMore long text.\n"
        abridged = "Chapter 1: One\nShort.\nChapter 2: Two\nShorter.\n"
        pairs = ingest_book_pair(original, abridged, book_id="demo")
        assert len(pairs) == 2
        assert pairs[0].original.raw_text.strip() == "Long text here."
        assert pairs[0].abridged.raw_text.strip() == "Short."


class TestPatternFiles:
    def test_load_skips_comments_and_blanks(self, tmp_path):
        path = tmp_path / "patterns.txt"
        path.write_text("# comment\n\n^Chapter [0-9]+$\n")
        assert load_heading_patterns(path) == ["^Chapter [0-9]+$"]

    def test_load_empty_file_rejected(self, tmp_path):
        path = tmp_path / "patterns.txt"
        path.write_text("# only a comment\n")
        with pytest.raises(ConfigurationError):
            load_heading_patterns(path)

    def test_default_patterns_cover_common_forms(self):
        patterns = default_heading_patterns()
        chapters = detect_chapters(
            "CHAPTER IV. The Storm\nbody\nChapter 12\nbody two\n", patterns
        )
        assert [h for h, _ in chapters] == ["CHAPTER IV. The Storm", "Chapter 12"]
