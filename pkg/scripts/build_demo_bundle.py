#!/usr/bin/env python3
"""Generate the synthetic demo dataset, score it into a bundle, and print a
profile summary.  Handy for eyeballing pipeline output before serving it:

    python3 scripts/build_demo_bundle.py --out demo_data --bundle bundle
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from condlens.demo import DEFAULT_POSTS, DEFAULT_RX_ROWS, DEFAULT_SEED, generate_demo
from condlens.pipeline import PipelineConfig, run_score
from condlens.store import read_bundle, validate_bundle


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="demo_data")
    parser.add_argument("--bundle", default="bundle")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--posts", type=int, default=DEFAULT_POSTS)
    parser.add_argument("--rx-rows", type=int, default=DEFAULT_RX_ROWS)
    args = parser.parse_args()

    paths = generate_demo(args.out, seed=args.seed, n_posts=args.posts, n_rx_rows=args.rx_rows)
    result = run_score(PipelineConfig.from_file(paths.config), args.bundle)
    for warning in result.warnings:
        print(f"warning: {warning}")

    report = validate_bundle(args.bundle)
    print(f"bundle {args.bundle}: digest {result.manifest['bundle_digest'][:16]} "
          f"valid={report.ok}")
    bundle = read_bundle(args.bundle)
    for condition in bundle.conditions:
        cid = condition["condition_id"]
        profile = bundle.profiles[cid]
        n_expected = len(profile["symptoms"]["expected"]) + len(profile["drugs"]["expected"])
        n_emerging = len(profile["symptoms"]["emerging"]) + len(profile["drugs"]["emerging"])
        top_emotion = profile["emotions"]["rank"][0]
        top_regions = ", ".join(bundle.prevalence[cid]["top"][:2])
        print(
            f"  {condition['name']:<34} expected={n_expected:<3} emerging={n_emerging:<3} "
            f"emotion={top_emotion:<12} hotspots: {top_regions}"
        )
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
