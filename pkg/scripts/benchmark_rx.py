#!/usr/bin/env python3
"""Measure prescription parse + aggregate throughput on synthetic rows.

    python3 scripts/benchmark_rx.py --rows 1000000
"""

import argparse
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from condlens import rx
from condlens.pipeline import condition_practice_items

MONTHS = [201807 + i for i in range(6)] + [201901 + i for i in range(6)]


def synthesize(path: Path, rows: int) -> None:
    lines = ["practice_code,bnf_code,drug_name,items,total_cost,quantity,period"]
    for i in range(rows):
        lines.append(
            f"P{i % 40},BNF{i % 20},drug,{(i * 7) % 13},{(i % 50) / 7:.2f},"
            f"{(i % 13) * 28},{MONTHS[i % 12]}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--rows", type=int, default=1_000_000)
    args = parser.parse_args()

    index = rx.DrugIndex(
        {f"BNF{i}": f"D{i}" for i in range(20)},
        {f"D{i}": frozenset({"C1"} if i % 2 == 0 else {"C2"}) for i in range(20)},
    )
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "rx.csv"
        started = time.perf_counter()
        synthesize(path, args.rows)
        print(f"synthesized {args.rows:,} rows in {time.perf_counter() - started:.2f}s "
              f"({path.stat().st_size / 1e6:.0f} MB)")

        started = time.perf_counter()
        report = rx.ParseReport()
        totals, periods = condition_practice_items(
            rx.parse_prescriptions(path, report), index
        )
        elapsed = time.perf_counter() - started
        print(
            f"parse + aggregate: {elapsed:.2f}s  "
            f"({args.rows / elapsed / 1e3:.0f}k rows/s, {report.rejected} rejects, "
            f"{len(periods)} periods, {sum(len(v) for v in totals.values())} practice totals)"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
