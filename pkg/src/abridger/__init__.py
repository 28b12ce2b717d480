"""Toolkit for aligning abridged books with their originals.

Chapters are paired and segmented with exact character offsets, aligned
into sentence-span rows by dynamic programming, characterized
statistically, and fed to extractive abridgement baselines with a
word-overlap evaluation harness. A small HTTP service supports human
review of the alignment rows.
"""

from .aligner import (
    AlignerConfig,
    AlignmentRow,
    AnnotationSet,
    align_chapter,
    align_sentences,
    flag_rows,
    fleiss_kappa,
    pair_score,
    row_f1,
)
from .evaluation import EvalReport, add_f1, evaluate, prsv_f1, rmv_f1
from .extract import (
    ExtractConfig,
    ExtractMethod,
    abridge_chapter,
    abridge_copy,
    abridge_ext_sents,
    abridge_ext_tokens,
    abridge_rand_tokens,
)
from .ingest import (
    ChapterPair,
    Document,
    Token,
    detect_chapters,
    ingest_book_pair,
    pair_chapters,
    segment_sentences,
    tokenize_words,
    word_tokens,
)
from .lexstats import (
    LexRelation,
    corpus_summary,
    detect_reordering,
    lexical_relations,
    score_bins,
    size_distribution,
    stats_report,
)
from .passages import (
    ChunkConfig,
    Label,
    PassagePair,
    PassageUnit,
    Slice,
    TokenLabel,
    chapter_labels,
    chapter_slices,
    label_tokens,
    make_passages,
    matching_slices,
    passage_abridgement,
    passage_pairs,
)
from .similarity import (
    SimilarityConfig,
    SimilarityKind,
    rouge_l_f1,
    rouge_n_precision,
    span_similarity,
)
from .store import Correction, CorrectionError, NotFoundError, RowStore, open_store

__version__ = "0.1.0"
