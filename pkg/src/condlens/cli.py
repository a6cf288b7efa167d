"""Command-line entry point.

Subcommands: ``demo`` (synthetic working set), ``ingest`` (validate inputs),
``score`` (build a bundle), ``serve`` (HTTP API over a bundle), and
``studymetrics`` (survey CSV -> opinion-change table).  Every command is
idempotent given identical inputs and exits 0 only on full success; with
``--json`` a machine-readable report goes to stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any

from . import demo as demo_mod
from . import rx
from .pipeline import PipelineConfig, run_score
from .score import NoSamples, OpinionSample, OutOfRange, opinion_table

logger = logging.getLogger("condlens")


def _emit(report: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    for key, value in report.items():
        if key in ("ok", "command"):
            continue
        print(f"{key}: {value}")


def cmd_demo(args: argparse.Namespace) -> dict[str, Any]:
    paths = demo_mod.generate_demo(
        args.out,
        seed=args.seed,
        n_posts=args.posts,
        n_rx_rows=args.rx_rows,
    )
    return {
        "ok": True,
        "command": "demo",
        "out": str(paths.root),
        "config": str(paths.config),
        "posts": args.posts,
        "rx_rows": args.rx_rows,
        "seed": args.seed,
    }


def _require_config(args: argparse.Namespace) -> PipelineConfig:
    if not args.config:
        raise ValueError("a config path is required (--config)")
    return PipelineConfig.from_file(args.config)


def cmd_ingest(args: argparse.Namespace) -> dict[str, Any]:
    config = _require_config(args)
    from .extract import load_posts
    from .lexicons import (
        load_body_lexicon,
        load_condition_catalog,
        load_emotion_lexicon,
        load_terminology,
    )

    terminology = load_terminology(config.resolve("terminology"))
    catalog = load_condition_catalog(config.resolve("conditions"), terminology)
    load_emotion_lexicon(config.resolve("emolex"))
    load_body_lexicon(config.resolve("body"))
    subreddit_map = {spec.subreddit: spec.condition_id for spec in catalog}

    report: dict[str, Any] = {
        "ok": True,
        "command": "ingest",
        "concepts": len(terminology),
        "conditions": len(catalog),
    }
    posts_path = config.resolve("posts")
    if posts_path.exists():
        posts, rejects = load_posts(posts_path, subreddit_map)
        report["posts_accepted"] = len(posts)
        report["posts_rejected"] = len(rejects)
    else:
        report["posts_accepted"] = 0
        report["posts_rejected"] = 0
        report["warning_posts"] = f"missing posts input {posts_path}"

    for key, parser in (
        ("patients", rx.parse_patients),
        ("drugs", rx.parse_drug_names),
        ("practices", rx.parse_practices),
        ("census", rx.parse_census),
        ("drugbank", rx.parse_drugbank),
    ):
        _, file_report = parser(config.resolve(key))
        report[f"{key}_accepted"] = file_report.accepted
        report[f"{key}_rejected"] = file_report.rejected

    rx_accepted = rx_rejected = 0
    for path in sorted(Path(config.resolve("prescriptions")).glob("*.csv")) or [
        config.resolve("prescriptions")
    ]:
        file_report = rx.ParseReport()
        for _ in rx.parse_prescriptions(path, report=file_report):
            pass
        rx_accepted += file_report.accepted
        rx_rejected += file_report.rejected
    report["prescriptions_accepted"] = rx_accepted
    report["prescriptions_rejected"] = rx_rejected
    return report


def cmd_score(args: argparse.Namespace) -> dict[str, Any]:
    config = _require_config(args)
    result = run_score(config, args.out, threads=args.threads)
    for warning in result.warnings:
        logger.warning(warning)
    return {
        "ok": True,
        "command": "score",
        "bundle": str(result.bundle_dir),
        "bundle_digest": result.manifest["bundle_digest"],
        "warnings": result.warnings,
        **result.stats,
    }


def cmd_serve(args: argparse.Namespace) -> dict[str, Any]:
    import uvicorn

    from .api import create_app

    host, _, port = args.listen.rpartition(":")
    app = create_app(
        args.bundle,
        webapp_dir=args.webapp,
        cors_origins=tuple(args.cors_origin),
    )
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="info")
    return {"ok": True, "command": "serve"}


def load_survey(path: str | Path) -> list[OpinionSample]:
    samples: list[OpinionSample] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"participant_id", "statement_id", "before", "after"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"survey csv must have columns {sorted(required)}")
        for row in reader:
            samples.append(
                OpinionSample(
                    statement_id=row["statement_id"],
                    before=int(row["before"]),
                    after=int(row["after"]),
                )
            )
    return samples


def cmd_studymetrics(args: argparse.Namespace) -> dict[str, Any]:
    samples = load_survey(args.survey)
    rows = opinion_table(samples)
    if not args.json:
        print(f"{'statement':<10}{'n':>4}{'dNP':>8}{'dNWP':>8}{'dPP':>8}{'avg':>8}")
        for row in rows:
            print(
                f"{row['statement_id']:<10}{row['n']:>4}"
                f"{row['delta_np']:>+8.2f}{row['delta_nwp']:>+8.2f}"
                f"{row['delta_pp']:>+8.2f}{row['average_change']:>+8.2f}"
            )
    return {"ok": True, "command": "studymetrics", "rows": rows}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="condlens",
        description="condition profiles from posts and prescriptions",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable stdout")
    parser.add_argument("--config", default=None, help="pipeline config path")
    parser.add_argument("--seed", type=int, default=demo_mod.DEFAULT_SEED)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_demo = sub.add_parser("demo", help="generate the synthetic demo dataset")
    p_demo.add_argument("--out", default="demo_data")
    p_demo.add_argument("--posts", type=int, default=demo_mod.DEFAULT_POSTS)
    p_demo.add_argument("--rx-rows", type=int, default=demo_mod.DEFAULT_RX_ROWS)
    p_demo.set_defaults(func=cmd_demo)

    # SUPPRESS keeps a sub-level --config from clobbering the global one
    p_ingest = sub.add_parser("ingest", help="validate the working set")
    p_ingest.add_argument("--config", default=argparse.SUPPRESS)
    p_ingest.set_defaults(func=cmd_ingest)

    p_score = sub.add_parser("score", help="run the pipeline and write a bundle")
    p_score.add_argument("--config", default=argparse.SUPPRESS)
    p_score.add_argument("--out", default="bundle")
    p_score.set_defaults(func=cmd_score)

    p_serve = sub.add_parser("serve", help="serve a bundle over HTTP")
    p_serve.add_argument("--bundle", required=True)
    p_serve.add_argument("--listen", default="127.0.0.1:8787")
    p_serve.add_argument("--webapp", default=None, help="static dir to mount at /")
    p_serve.add_argument("--cors-origin", action="append", default=["*"])
    p_serve.set_defaults(func=cmd_serve)

    p_study = sub.add_parser("studymetrics", help="opinion-change table from a survey csv")
    p_study.add_argument("--survey", required=True)
    p_study.set_defaults(func=cmd_studymetrics)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        report = args.func(args)
    except (OSError, ValueError, KeyError, NoSamples, OutOfRange) as exc:
        failure = {
            "ok": False,
            "command": args.command,
            "error": type(exc).__name__,
            "message": str(exc),
        }
        print(json.dumps(failure, indent=2, sort_keys=True) if args.json else f"error: {exc}",
              file=sys.stderr)
        return 1
    if args.json or args.command != "studymetrics":
        _emit(report, args.json)
    return 0 if report.get("ok") else 1


if __name__ == "__main__":
    raise SystemExit(main())
