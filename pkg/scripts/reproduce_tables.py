"""Regenerate the three error tables into results/ (csv and markdown)."""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from mpmath import mp

from mbasym import tables


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--which", type=int, nargs="*", default=[1, 2, 3])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "results"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for which in args.which:
        t0 = time.perf_counter()
        with mp.workdps(tables.DEFAULT_DIGITS[which]):
            rows = tables.table_rows(which)
        (out / f"table{which}.csv").write_text(tables.to_csv(rows))
        (out / f"table{which}.md").write_text(tables.to_markdown(rows))
        print(f"table {which}: {len(rows)} rows in {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
