"""Regenerate every preset table (CSV + JSON) into one directory.

    python scripts/reproduce_tables.py --out-dir results
    python scripts/reproduce_tables.py --only fig5a fig7 --scale 0.1
"""
import argparse
import json
import time
from pathlib import Path

from tracs.eval import write_table
from tracs.presets import PRESETS, run_preset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--only", nargs="+", choices=PRESETS, help="subset of presets")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scale", type=float, default=1.0, help="shrink sample sizes for a quick run")
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name in args.only or PRESETS:
        t0 = time.perf_counter()
        for table, rows in run_preset(name, seed=args.seed, scale=args.scale).items():
            write_table(rows, args.out_dir / f"{table}.csv")
            (args.out_dir / f"{table}.json").write_text(json.dumps(rows, indent=2) + "\n")
        print(f"{name}: {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
