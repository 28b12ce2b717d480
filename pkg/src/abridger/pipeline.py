"""End-to-end orchestration: one config file drives ingest through
evaluation, writing every artifact into an output directory.

Stages re-run only when an input (or the config file) is newer than
their outputs, so the pipeline is cheap to re-invoke after editing one
piece. When a review pause is configured, the run stops right after
flagging so a human can correct rows via the service; corrections are
then folded in by every later stage.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .aligner import AlignerConfig, align_chapter, flag_rows
from .evaluation import aggregate, evaluate_counts, report_from_counts
from .extract import ExtractConfig, ExtractMethod, abridge_chapter, match_labels
from .ingest import default_heading_patterns, ingest_book_pair, load_heading_patterns
from .jsonl import (
    chapter_records,
    pairs_from_records,
    read_jsonl,
    row_records,
    rows_by_chapter,
    write_jsonl,
)
from .lexstats import default_lexicon, load_lexicon, stats_report
from .passages import ChunkConfig, PassageUnit, chapter_labels, passage_pairs
from .similarity import SimilarityConfig, SimilarityKind
from .store import open_store


class PipelineError(RuntimeError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    config_path: Path
    book_id: str
    original: Path
    abridged: Path
    out_dir: Path
    heading_patterns: Path | None
    aligner: AlignerConfig
    flag_threshold: float
    review_pause: bool
    unit: PassageUnit
    chunk_sents: int
    extract: ExtractConfig
    lexicon: Path | None
    figures: bool


def load_config(
    path: str | Path,
    out_dir: str | Path | None = None,
    seed: int | None = None,
) -> PipelineConfig:
    """Read a pipeline config; CLI-level out_dir/seed overrides win."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    base = path.parent

    def resolve(name) -> Path | None:
        value = raw.get(name)
        return None if value is None else (base / value).resolve()

    align_raw = raw.get("align", {})
    sim = SimilarityConfig(SimilarityKind.from_cli_name(align_raw.get("sim", "rouge1p")))
    aligner = AlignerConfig(
        o_max=align_raw.get("o_max", 3),
        a_max=align_raw.get("a_max", 5),
        pn=align_raw.get("pn", 0.175),
        similarity=sim,
    )
    passages_raw = raw.get("passages", {})
    extract_raw = raw.get("extract", {})
    extract_seed = seed if seed is not None else extract_raw.get("seed", 0)
    extract = ExtractConfig(
        method=ExtractMethod(extract_raw.get("method", "copy")),
        t=extract_raw.get("t", 0.6),
        p=extract_raw.get("p", 0.65),
        seed=extract_seed,
    )
    out = Path(out_dir) if out_dir is not None else Path(raw.get("out_dir", "abridger_out"))
    original = resolve("original")
    abridged = resolve("abridged")
    if original is None or abridged is None:
        raise PipelineError("config must name both 'original' and 'abridged' input files")
    return PipelineConfig(
        config_path=path.resolve(),
        book_id=raw.get("book_id", path.stem),
        original=original,
        abridged=abridged,
        out_dir=out,
        heading_patterns=resolve("heading_patterns"),
        aligner=aligner,
        flag_threshold=raw.get("flag_threshold", 0.9),
        review_pause=bool(raw.get("review_pause", False)),
        unit=PassageUnit(passages_raw.get("unit", "chunk")),
        chunk_sents=passages_raw.get("chunk_sents", 10),
        extract=extract,
        lexicon=resolve("lexicon"),
        figures=bool(raw.get("figures", True)),
    )


class _Paths:
    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.chapters = out_dir / "chapters.jsonl"
        self.rows = out_dir / "rows.jsonl"
        self.corrections = out_dir / "corrections.jsonl"
        self.labels = out_dir / "labels.jsonl"
        self.passages = out_dir / "passages.jsonl"
        self.stats = out_dir / "stats.json"
        self.pred = out_dir / "pred.jsonl"
        self.report = out_dir / "report.json"
        self.figures = out_dir / "figures"


def _load_pairs(paths: _Paths):
    return pairs_from_records(read_jsonl(paths.chapters))


def _load_rows(cfg: PipelineConfig, paths: _Paths, pairs):
    """Current rows per chapter: base rows plus any review corrections."""
    if paths.corrections.exists():
        chapters = {p.chapter_id: p for p in pairs}
        store = open_store(
            paths.rows,
            chapters,
            corrections_path=paths.corrections,
            threshold=cfg.flag_threshold,
            similarity=cfg.aligner.similarity,
        )
        return {cid: store.rows(cid) for cid in store.chapter_ids()}
    _, _, rows = rows_by_chapter(read_jsonl(paths.rows))
    return rows


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _stage_ingest(cfg: PipelineConfig, paths: _Paths) -> None:
    patterns = (
        load_heading_patterns(cfg.heading_patterns)
        if cfg.heading_patterns
        else default_heading_patterns()
    )
    original = cfg.original.read_text(encoding="utf-8")
    abridged = cfg.abridged.read_text(encoding="utf-8")
    pairs = ingest_book_pair(original, abridged, patterns=patterns, book_id=cfg.book_id)
    write_jsonl(paths.chapters, chapter_records(pairs))


def _stage_align(cfg: PipelineConfig, paths: _Paths) -> None:
    records = []
    for pair in _load_pairs(paths):
        rows = align_chapter(pair, cfg.aligner)
        records.extend(row_records(pair.book_id, pair.chapter_id, rows))
    write_jsonl(paths.rows, records)


def _stage_flag(cfg: PipelineConfig, paths: _Paths) -> None:
    order, books, rows = rows_by_chapter(read_jsonl(paths.rows))
    records = []
    for cid in order:
        flag_rows(rows[cid], cfg.flag_threshold)
        records.extend(row_records(books[cid], cid, rows[cid]))
    write_jsonl(paths.rows, records)


def _stage_labels(cfg: PipelineConfig, paths: _Paths) -> None:
    pairs = _load_pairs(paths)
    rows = _load_rows(cfg, paths, pairs)
    records = []
    for pair in pairs:
        for lab in chapter_labels(pair.original, pair.abridged, rows[pair.chapter_id]):
            records.append(
                {
                    "chapter_id": pair.chapter_id,
                    "token_start": lab.token.char_start,
                    "token_end": lab.token.char_end,
                    "label": int(lab.label),
                }
            )
    write_jsonl(paths.labels, records)


def _stage_passages(cfg: PipelineConfig, paths: _Paths) -> None:
    pairs = _load_pairs(paths)
    rows = _load_rows(cfg, paths, pairs)
    records = []
    for pair in pairs:
        for pp in passage_pairs(
            pair.original,
            pair.abridged,
            rows[pair.chapter_id],
            cfg.unit,
            ChunkConfig(cfg.chunk_sents),
        ):
            rec = {
                "chapter_id": pair.chapter_id,
                "unit": pp.unit.value,
                "o_start_char": pp.o_start_char,
                "o_end_char": pp.o_end_char,
            }
            if pp.a_range is not None:
                rec["a_start_char"], rec["a_end_char"] = pp.a_range
            records.append(rec)
    write_jsonl(paths.passages, records)


def _stage_stats(cfg: PipelineConfig, paths: _Paths) -> None:
    pairs = _load_pairs(paths)
    rows = _load_rows(cfg, paths, pairs)
    dataset = [(pair, rows[pair.chapter_id]) for pair in pairs]
    lexicon = load_lexicon(cfg.lexicon) if cfg.lexicon else default_lexicon()
    report = stats_report(dataset, lexicon)
    _write_json(paths.stats, report)
    if cfg.figures:
        from .plots import render_stats_figures

        render_stats_figures(report, paths.figures)


def _stage_extract(cfg: PipelineConfig, paths: _Paths) -> None:
    pairs = _load_pairs(paths)
    rows = _load_rows(cfg, paths, pairs)
    label_records = {}
    if cfg.extract.method in (ExtractMethod.EXT_TOKS, ExtractMethod.EXT_SENTS):
        for rec in read_jsonl(paths.labels):
            label_records.setdefault(rec["chapter_id"], []).append(
                (rec["token_start"], rec["token_end"], rec["label"])
            )
    records = []
    for pair in pairs:
        labels = None
        if cfg.extract.method is ExtractMethod.PERFECT_EXT_TOKS:
            labels = chapter_labels(pair.original, pair.abridged, rows[pair.chapter_id])
        elif cfg.extract.method in (ExtractMethod.EXT_TOKS, ExtractMethod.EXT_SENTS):
            labels = match_labels(pair.original, label_records.get(pair.chapter_id, []))
        text = abridge_chapter(pair.original, cfg.extract, labels)
        records.append({"chapter_id": pair.chapter_id, "text": text})
    write_jsonl(paths.pred, records)


def _stage_evaluate(cfg: PipelineConfig, paths: _Paths) -> None:
    pairs = _load_pairs(paths)
    preds = {rec["chapter_id"]: rec["text"] for rec in read_jsonl(paths.pred)}
    per_chapter = []
    for pair in pairs:
        if pair.chapter_id not in preds:
            raise PipelineError(f"prediction missing for chapter {pair.chapter_id!r}")
        counts = evaluate_counts(
            pair.original.raw_text, preds[pair.chapter_id], pair.abridged.raw_text
        )
        per_chapter.append((report_from_counts(counts), counts))
    result = aggregate(per_chapter)
    result["name"] = cfg.extract.method.value
    _write_json(paths.report, result)
    if cfg.figures:
        from .plots import render_eval_figures

        render_eval_figures(result, paths.figures)


def _fresh(outputs: list[Path], inputs: list[Path]) -> bool:
    if any(not p.exists() for p in outputs):
        return False
    newest_in = max(p.stat().st_mtime for p in inputs if p.exists())
    return min(p.stat().st_mtime for p in outputs) >= newest_in


def run_pipeline(cfg: PipelineConfig, force: bool = False) -> dict:
    """Run every due stage; returns per-stage status and pause state."""
    paths = _Paths(cfg.out_dir)
    paths.out_dir.mkdir(parents=True, exist_ok=True)
    figure_outputs = (
        [paths.figures / n for n in ("score_bins.png", "row_sizes.png", "categories.png")]
        if cfg.figures
        else []
    )
    eval_figures = [paths.figures / "eval_scores.png"] if cfg.figures else []
    maybe_corrections = [paths.corrections] if paths.corrections.exists() else []
    stages = [
        ("ingest", [cfg.original, cfg.abridged], [paths.chapters], _stage_ingest),
        ("align", [paths.chapters], [paths.rows], _stage_align),
        ("flag", [paths.rows], [paths.rows], _stage_flag),
        ("labels", [paths.chapters, paths.rows, *maybe_corrections], [paths.labels], _stage_labels),
        (
            "passages",
            [paths.chapters, paths.rows, *maybe_corrections],
            [paths.passages],
            _stage_passages,
        ),
        (
            "stats",
            [paths.chapters, paths.rows, *maybe_corrections],
            [paths.stats, *figure_outputs],
            _stage_stats,
        ),
        (
            "extract",
            [paths.chapters, paths.rows, paths.labels, *maybe_corrections],
            [paths.pred],
            _stage_extract,
        ),
        ("evaluate", [paths.chapters, paths.pred], [paths.report, *eval_figures], _stage_evaluate),
    ]
    status: dict[str, str] = {}
    written: set[Path] = set()
    paused = False
    for name, inputs, outputs, fn in stages:
        inputs = inputs + [cfg.config_path]
        due = (
            force
            or any(p in written for p in inputs)
            or not _fresh(outputs, inputs)
        )
        if due:
            try:
                fn(cfg, paths)
            except Exception as exc:
                raise PipelineError(f"stage {name!r} failed: {exc}") from exc
            written.update(outputs)
            status[name] = "ran"
        else:
            status[name] = "skipped"
        if name == "flag" and cfg.review_pause and status[name] == "ran":
            paused = True
            break
    return {"stages": status, "paused": paused, "out_dir": str(paths.out_dir)}
