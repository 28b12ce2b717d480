"""Command-line interface: per-step verbs plus the one-shot pipeline."""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from .aligner import (
    AlignerConfig,
    AnnotationSet,
    align_chapter,
    flag_rows,
    fleiss_kappa,
    row_f1,
)
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
from .pipeline import load_config, run_pipeline
from .similarity import SimilarityConfig, SimilarityKind
from .store import open_store


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Default pipeline config file.")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Directory that relative output paths land in.")
@click.option("--seed", type=int, default=None, help="Default seed for randomized steps.")
@click.pass_context
def main(ctx, config_path, out_dir, seed):
    """Align abridged books with their originals and analyze the result."""
    ctx.obj = {"config": config_path, "out_dir": out_dir, "seed": seed}


def _out_path(ctx, path: str) -> Path:
    out = Path(path)
    base = ctx.obj.get("out_dir")
    if base and not out.is_absolute():
        out = Path(base) / out
        out.parent.mkdir(parents=True, exist_ok=True)
    return out


def _ingest(original, abridged, patterns, book_id):
    pats = load_heading_patterns(patterns) if patterns else default_heading_patterns()
    return ingest_book_pair(
        Path(original).read_text(encoding="utf-8"),
        Path(abridged).read_text(encoding="utf-8"),
        patterns=pats,
        book_id=book_id,
    )


def _load_dataset(chapters_path, rows_path):
    pairs = pairs_from_records(read_jsonl(chapters_path))
    _, _, rows = rows_by_chapter(read_jsonl(rows_path))
    missing = [p.chapter_id for p in pairs if p.chapter_id not in rows]
    if missing:
        raise click.ClickException(f"no rows for chapters: {', '.join(missing)}")
    return pairs, rows


@main.command()
@click.option("--original", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--abridged", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--book-id", default="book")
@click.option("--patterns", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Heading regex file, one pattern per line.")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def ingest(ctx, original, abridged, book_id, patterns, out):
    """Split both book files into paired chapters."""
    pairs = _ingest(original, abridged, patterns, book_id)
    write_jsonl(_out_path(ctx, out), chapter_records(pairs))
    click.echo(f"ingested {len(pairs)} chapter pair(s) -> {out}")


@main.command()
@click.option("--original", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--abridged", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--book-id", default="book")
@click.option("--patterns", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--on", "o_max", default=3, show_default=True, help="Max original span sentences.")
@click.option("--am", "a_max", default=5, show_default=True, help="Max abridged span sentences.")
@click.option("--pn", default=0.175, show_default=True, help="Penalty per extra sentence.")
@click.option("--sim", default="rouge1p", type=click.Choice(["rouge1p", "rouge2p"]),
              show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def align(ctx, original, abridged, book_id, patterns, o_max, a_max, pn, sim, out):
    """Align chapters into rows (unflagged; run `flag` next)."""
    config = AlignerConfig(
        o_max=o_max, a_max=a_max, pn=pn,
        similarity=SimilarityConfig(SimilarityKind.from_cli_name(sim)),
    )
    records = []
    for pair in _ingest(original, abridged, patterns, book_id):
        rows = align_chapter(pair, config)
        records.extend(row_records(pair.book_id, pair.chapter_id, rows))
    write_jsonl(_out_path(ctx, out), records)
    click.echo(f"aligned {len(records)} row(s) -> {out}")


@main.command()
@click.option("--rows", "rows_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", default=0.9, show_default=True)
def flag(rows_path, threshold):
    """Mark rows needing review; rewrites the rows file in place."""
    order, books, rows = rows_by_chapter(read_jsonl(rows_path))
    records = []
    flagged = 0
    for cid in order:
        flag_rows(rows[cid], threshold)
        flagged += sum(1 for r in rows[cid] if r.flagged)
        records.extend(row_records(books[cid], cid, rows[cid]))
    write_jsonl(rows_path, records)
    click.echo(f"flagged {flagged} of {len(records)} row(s)")


@main.command()
@click.option("--rows", "rows_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--chapters", "chapters_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def labels(ctx, rows_path, chapters_path, out):
    """Emit preserved/removed labels for every original token."""
    pairs, rows = _load_dataset(chapters_path, rows_path)
    records = []
    for pair in pairs:
        for lab in chapter_labels(pair.original, pair.abridged, rows[pair.chapter_id]):
            records.append({
                "chapter_id": pair.chapter_id,
                "token_start": lab.token.char_start,
                "token_end": lab.token.char_end,
                "label": int(lab.label),
            })
    write_jsonl(_out_path(ctx, out), records)
    click.echo(f"labeled {len(records)} token(s) -> {out}")


@main.command()
@click.option("--rows", "rows_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--chapters", "chapters_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--unit", default="chunk", show_default=True,
              type=click.Choice([u.value for u in PassageUnit]))
@click.option("--chunk-sents", default=10, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def passages(ctx, rows_path, chapters_path, unit, chunk_sents, out):
    """Map fixed original passages to their abridged stretches."""
    pairs, rows = _load_dataset(chapters_path, rows_path)
    records = []
    for pair in pairs:
        for pp in passage_pairs(
            pair.original, pair.abridged, rows[pair.chapter_id],
            PassageUnit(unit), ChunkConfig(chunk_sents),
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
    write_jsonl(_out_path(ctx, out), records)
    click.echo(f"wrote {len(records)} passage(s) -> {out}")


@main.command()
@click.option("--rows", "rows_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--chapters", "chapters_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--lexicon", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Closed-class word list; bundled list by default.")
@click.option("--out", required=True, type=click.Path())
@click.option("--figures", type=click.Path(file_okay=False), default=None,
              help="Also render distribution figures into this directory.")
@click.pass_context
def stats(ctx, rows_path, chapters_path, lexicon, out, figures):
    """Corpus statistics: sizes, distributions, lexical relations."""
    pairs, rows = _load_dataset(chapters_path, rows_path)
    dataset = [(pair, rows[pair.chapter_id]) for pair in pairs]
    lex = load_lexicon(lexicon) if lexicon else default_lexicon()
    report = stats_report(dataset, lex)
    out = _out_path(ctx, out)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(f"stats over {report['summary']['rows']} row(s) -> {out}")
    if figures:
        from .plots import render_stats_figures

        for path in render_stats_figures(report, _out_path(ctx, figures)):
            click.echo(f"figure -> {path}")


@main.command()
@click.option("--method", required=True, type=click.Choice([m.value for m in ExtractMethod]))
@click.option("--chapters", "chapters_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--labels", "labels_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="labels.jsonl for the tokens/sents methods.")
@click.option("--rows", "rows_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="rows.jsonl for the perfect method.")
@click.option("--t", default=0.6, show_default=True, help="Kept-token fraction (rand).")
@click.option("--p", default=0.65, show_default=True, help="Min preserved fraction (sents).")
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
def extract(ctx, method, chapters_path, labels_path, rows_path, t, p, seed, out):
    """Produce a candidate abridgement per chapter."""
    method = ExtractMethod(method)
    if seed is None:
        seed = ctx.obj.get("seed")
    if method is ExtractMethod.RAND_TOKS and seed is None:
        raise click.ClickException("--method rand needs --seed")
    config = ExtractConfig(method=method, t=t, p=p, seed=seed if seed is not None else 0)
    pairs = pairs_from_records(read_jsonl(chapters_path))
    rows = None
    if method is ExtractMethod.PERFECT_EXT_TOKS:
        if rows_path is None:
            raise click.ClickException("--method perfect needs --rows")
        pairs, rows = _load_dataset(chapters_path, rows_path)
    label_records: dict[str, list] = {}
    if method in (ExtractMethod.EXT_TOKS, ExtractMethod.EXT_SENTS):
        if labels_path is None:
            raise click.ClickException(f"--method {method.value} needs --labels")
        for rec in read_jsonl(labels_path):
            label_records.setdefault(rec["chapter_id"], []).append(
                (rec["token_start"], rec["token_end"], rec["label"])
            )
    records = []
    for pair in pairs:
        chapter_label_list = None
        if method is ExtractMethod.PERFECT_EXT_TOKS:
            chapter_label_list = chapter_labels(
                pair.original, pair.abridged, rows[pair.chapter_id]
            )
        elif method in (ExtractMethod.EXT_TOKS, ExtractMethod.EXT_SENTS):
            chapter_label_list = match_labels(
                pair.original, label_records.get(pair.chapter_id, [])
            )
        records.append({
            "chapter_id": pair.chapter_id,
            "text": abridge_chapter(pair.original, config, chapter_label_list),
        })
    write_jsonl(_out_path(ctx, out), records)
    click.echo(f"abridged {len(records)} chapter(s) with {method.value} -> {out}")


def _texts_by_chapter(path, side: str) -> dict[str, str]:
    """Chapter texts from either a chapters.jsonl (picking one side) or a
    predictions file of {chapter_id, text} records."""
    texts = {}
    for rec in read_jsonl(path):
        if "side" in rec:
            if rec["side"] == side:
                texts[rec["chapter_id"]] = rec["text"]
        else:
            texts[rec["chapter_id"]] = rec["text"]
    return texts


@main.command()
@click.option("--orig", "orig_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--name", default="prediction", show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--figures", type=click.Path(file_okay=False), default=None)
@click.pass_context
def evaluate(ctx, orig_path, pred_path, ref_path, name, out, figures):
    """Score predictions against the reference abridgement."""
    originals = _texts_by_chapter(orig_path, "original")
    preds = _texts_by_chapter(pred_path, "abridged")
    refs = _texts_by_chapter(ref_path, "abridged")
    per_chapter = []
    for cid, orig_text in originals.items():
        if cid not in preds or cid not in refs:
            raise click.ClickException(f"chapter {cid!r} missing from pred or ref")
        counts = evaluate_counts(orig_text, preds[cid], refs[cid])
        per_chapter.append((report_from_counts(counts), counts))
    if not per_chapter:
        raise click.ClickException("nothing to evaluate")
    result = aggregate(per_chapter)
    result["name"] = name
    out = _out_path(ctx, out)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")
    macro = result["macro"]
    click.echo(
        f"{name}: toks={macro['toks']:.1f} r_l={macro['r_l']:.3f} "
        f"prsv={macro['prsv']:.3f} rmv={macro['rmv']:.3f} add={macro['add']:.3f} -> {out}"
    )
    if figures:
        from .plots import render_eval_figures

        for path in render_eval_figures(result, _out_path(ctx, figures)):
            click.echo(f"figure -> {path}")


@main.command()
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True, dir_okay=False))
def rowf1(pred_path, gold_path):
    """Compare predicted rows against gold rows, chapter by chapter."""
    _, _, pred = rows_by_chapter(read_jsonl(pred_path))
    gold_order, _, gold = rows_by_chapter(read_jsonl(gold_path))
    scores = []
    for cid in gold_order:
        if cid not in pred:
            raise click.ClickException(f"chapter {cid!r} missing from predictions")
        p, r, f1 = row_f1(pred[cid], gold[cid])
        scores.append(f1)
        click.echo(f"{cid}: P={p:.3f} R={r:.3f} F1={f1:.3f}")
    if scores:
        click.echo(f"mean F1 over {len(scores)} chapter(s): {sum(scores) / len(scores):.3f}")


@main.command()
@click.option("--annotations", "ann_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSONL of {item, rater, label} records.")
def kappa(ann_path):
    """Inter-rater agreement over binary labels."""
    labels: dict[str, dict[str, int]] = {}
    for rec in read_jsonl(ann_path):
        labels.setdefault(str(rec["item"]), {})[str(rec["rater"])] = int(rec["label"])
    value = fleiss_kappa(AnnotationSet(labels))
    click.echo(f"fleiss_kappa={value:.4f}")


@main.command()
@click.option("--rows", "rows_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--chapters", "chapters_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--corrections", "corrections_path", type=click.Path(), default=None,
              help="Correction log; defaults to corrections.jsonl beside the rows.")
@click.option("--threshold", default=0.9, show_default=True)
@click.option("--port", default=8176, show_default=True,
              help="Overridden by ABRIDGER_PORT when set.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False), default=None,
              help="Directory of built UI assets to serve at /.")
def serve(rows_path, chapters_path, corrections_path, threshold, port, host, ui_dir):
    """Serve the review API (and UI) over the rows."""
    from .service import serve as run_service

    pairs = pairs_from_records(read_jsonl(chapters_path))
    chapters = {p.chapter_id: p for p in pairs}
    store = open_store(
        rows_path, chapters, corrections_path=corrections_path, threshold=threshold
    )
    port = int(os.environ.get("ABRIDGER_PORT", port))
    click.echo(f"serving {len(chapters)} chapter(s) on http://{host}:{port}")
    run_service(store, static_dir=ui_dir, port=port, host=host)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Falls back to the group-level --config.")
@click.option("--force", is_flag=True, help="Re-run every stage regardless of timestamps.")
@click.pass_context
def pipeline(ctx, config_path, force):
    """Run ingest through evaluation from one config file."""
    config_path = config_path or ctx.obj.get("config")
    if config_path is None:
        raise click.ClickException("pipeline needs --config")
    cfg = load_config(config_path, out_dir=ctx.obj.get("out_dir"), seed=ctx.obj.get("seed"))
    result = run_pipeline(cfg, force=force)
    for stage, state in result["stages"].items():
        click.echo(f"{stage}: {state}")
    if result["paused"]:
        out = result["out_dir"]
        click.echo("paused for review. Inspect flagged rows with:")
        click.echo(f"  abridger serve --chapters {out}/chapters.jsonl --rows {out}/rows.jsonl")
        click.echo("then rerun this pipeline to fold corrections into the later stages.")


if __name__ == "__main__":
    main()
