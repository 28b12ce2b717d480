"""Config loading, stage scheduling, and end-to-end artifact checks."""

from __future__ import annotations

import json
import os
import time

import pytest

from abridger.extract import ExtractMethod
from abridger.jsonl import read_jsonl
from abridger.passages import PassageUnit
from abridger.pipeline import PipelineError, load_config, run_pipeline
from abridger.similarity import SimilarityKind
from abridger.store import Correction, open_store
from abridger.jsonl import pairs_from_records

ORIGINAL_BOOK = """Chapter 1: The Letter

The letter was not unproductive. It re-established peace and kindness.

Chapter 2: The Walk

They walked along the river. The water ran high and fast. Nobody spoke a word.
"""

ABRIDGED_BOOK = """Chapter 1: The Letter

The letter re-established peace and kindness.

Chapter 2: The Walk

They walked along the river. Nobody spoke a word.
"""


def write_book(tmp_path, figures: bool = False, **overrides):
    (tmp_path / "original.txt").write_text(ORIGINAL_BOOK)
    (tmp_path / "abridged.txt").write_text(ABRIDGED_BOOK)
    config = {
        "book_id": "demo",
        "original": "original.txt",
        "abridged": "abridged.txt",
        "out_dir": str(tmp_path / "out"),
        "passages": {"unit": "sentence"},
        "extract": {"method": "copy"},
        "figures": figures,
    }
    config.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


class TestLoadConfig:
    def test_defaults(self, tmp_path):
        cfg = load_config(write_book(tmp_path))
        assert cfg.book_id == "demo"
        assert cfg.aligner.o_max == 3
        assert cfg.aligner.a_max == 5
        assert cfg.aligner.pn == 0.175
        assert cfg.aligner.similarity.kind is SimilarityKind.ROUGE1_PRECISION
        assert cfg.flag_threshold == 0.9
        assert cfg.unit is PassageUnit.SENTENCE
        assert cfg.chunk_sents == 10
        assert cfg.extract.method is ExtractMethod.COPY
        assert not cfg.review_pause

    def test_inputs_resolve_against_config_dir(self, tmp_path):
        cfg = load_config(write_book(tmp_path))
        assert cfg.original == (tmp_path / "original.txt").resolve()

    def test_overrides_win(self, tmp_path):
        path = write_book(tmp_path, extract={"method": "rand", "t": 0.4, "seed": 5})
        cfg = load_config(path, out_dir=tmp_path / "elsewhere", seed=77)
        assert cfg.out_dir == tmp_path / "elsewhere"
        assert cfg.extract.seed == 77
        assert cfg.extract.t == 0.4

    def test_missing_inputs_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"original": "o.txt"}))
        with pytest.raises(PipelineError):
            load_config(path)


class TestRunPipeline:
    def test_all_stages_run_and_artifacts_appear(self, tmp_path):
        cfg = load_config(write_book(tmp_path))
        result = run_pipeline(cfg)
        assert all(state == "ran" for state in result["stages"].values())
        assert not result["paused"]
        out = tmp_path / "out"
        for name in ("chapters.jsonl", "rows.jsonl", "labels.jsonl",
                     "passages.jsonl", "stats.json", "pred.jsonl", "report.json"):
            assert (out / name).exists(), name

        rows = read_jsonl(out / "rows.jsonl")
        assert {r["chapter_id"] for r in rows} == {"Chapter 1: The Letter", "Chapter 2: The Walk"}
        first = rows[0]
        assert (first["o_len"], first["a_len"], first["score"]) == (2, 1, 1.0)

        report = json.loads((out / "report.json").read_text())
        assert report["name"] == "copy"
        assert report["chapters"] == 2
        assert report["macro"]["rmv"] == 0.0  # the copy removes nothing

    def test_rerun_skips_everything(self, tmp_path):
        cfg = load_config(write_book(tmp_path))
        run_pipeline(cfg)
        result = run_pipeline(cfg)
        assert all(state == "skipped" for state in result["stages"].values())

    def test_touching_an_input_reruns_downstream(self, tmp_path):
        config_path = write_book(tmp_path)
        cfg = load_config(config_path)
        run_pipeline(cfg)
        time.sleep(0.02)
        os.utime(cfg.original)
        result = run_pipeline(cfg)
        assert result["stages"]["ingest"] == "ran"
        assert result["stages"]["align"] == "ran"
        assert result["stages"]["evaluate"] == "ran"

    def test_force_reruns_everything(self, tmp_path):
        cfg = load_config(write_book(tmp_path))
        run_pipeline(cfg)
        result = run_pipeline(cfg, force=True)
        assert all(state == "ran" for state in result["stages"].values())

    def test_figures_rendered_when_enabled(self, tmp_path):
        cfg = load_config(write_book(tmp_path, figures=True))
        run_pipeline(cfg)
        figures = tmp_path / "out" / "figures"
        for name in ("score_bins.png", "row_sizes.png", "categories.png", "eval_scores.png"):
            assert (figures / name).exists(), name

    def test_passages_artifact_maps_the_letter(self, tmp_path):
        cfg = load_config(write_book(tmp_path))
        run_pipeline(cfg)
        passages = read_jsonl(tmp_path / "out" / "passages.jsonl")
        chapters = read_jsonl(tmp_path / "out" / "chapters.jsonl")
        abridged = {
            rec["chapter_id"]: rec["text"] for rec in chapters if rec["side"] == "abridged"
        }
        first = [p for p in passages if p["chapter_id"] == "Chapter 1: The Letter"]
        texts = [
            abridged[p["chapter_id"]][p["a_start_char"] : p["a_end_char"]]
            for p in first
            if "a_start_char" in p
        ]
        assert texts == ["The letter", "re-established peace and kindness"]

    def test_review_pause_stops_after_flag(self, tmp_path):
        cfg = load_config(write_book(tmp_path, review_pause=True))
        result = run_pipeline(cfg)
        assert result["paused"]
        assert list(result["stages"]) == ["ingest", "align", "flag"]
        assert not (tmp_path / "out" / "labels.jsonl").exists()

    def test_corrections_feed_downstream_stages(self, tmp_path):
        cfg = load_config(write_book(tmp_path, review_pause=True))
        run_pipeline(cfg)
        out = tmp_path / "out"
        pairs = pairs_from_records(read_jsonl(out / "chapters.jsonl"))
        store = open_store(out / "rows.jsonl", {p.chapter_id: p for p in pairs})
        store.apply(
            Correction(
                chapter_id="Chapter 2: The Walk", kind="merge_rows",
                source_row=0, target_row=1,
            )
        )
        result = run_pipeline(cfg)
        assert result["stages"]["labels"] == "ran"
        assert not result["paused"]  # flag did not rerun, so no second pause
        # labels reflect the corrected (merged) rows, not the base file
        walk_rows = store.rows("Chapter 2: The Walk")
        assert walk_rows[0].o_len == 2
        labels = read_jsonl(out / "labels.jsonl")
        walk = [l for l in labels if l["chapter_id"] == "Chapter 2: The Walk"]
        assert len(walk) == 18  # every original token of the chapter

    def test_stage_failure_names_the_stage(self, tmp_path):
        config_path = write_book(tmp_path)
        cfg = load_config(config_path)
        cfg.original.write_text("")  # chapter structure no longer matches
        with pytest.raises(PipelineError, match="ingest"):
            run_pipeline(cfg)
