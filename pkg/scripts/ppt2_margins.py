"""Tabulate WEB margins of every extreme-pair composition over a range of D.

    python3 scripts/ppt2_margins.py --max-dim 64 --out margins.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from cartanchan.basis import Kind
from cartanchan.regions import ppt2_verify


@dataclass(frozen=True)
class MarginConfig:
    max_dim: int = 64
    kinds: tuple[Kind, ...] = (Kind.SO, Kind.SP)
    include_small: bool = False


def rows(cfg: MarginConfig):
    for kind in cfg.kinds:
        lo = 3 if cfg.include_small else (5 if kind is Kind.SO else 6)
        for dim in range(lo, cfg.max_dim + 1):
            if kind is Kind.SP and dim % 2:
                continue
            rep = ppt2_verify(dim, kind)
            for c in rep.compositions:
                yield {"kind": kind.value, "dim": dim, "pair": "o".join(c.pair),
                       "alpha": c.point[0], "beta": c.point[1], "margin": c.margin, "in_web": c.in_web}


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-dim", type=int, default=64)
    p.add_argument("--include-small", action="store_true", help="also list D below the theorem's range")
    p.add_argument("--out", default="-")
    args = p.parse_args(argv)
    cfg = MarginConfig(max_dim=args.max_dim, include_small=args.include_small)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="", encoding="utf-8")
    writer = csv.DictWriter(fh, fieldnames=["kind", "dim", "pair", "alpha", "beta", "margin", "in_web"])
    writer.writeheader()
    worst = {}
    for row in rows(cfg):
        writer.writerow(row)
        key = (row["kind"], row["dim"])
        worst[key] = min(worst.get(key, float("inf")), row["margin"])
    if fh is not sys.stdout:
        fh.close()
    bad = [k for k, m in worst.items() if m < 0]
    print(f"{len(worst)} (kind, D) cases, {len(bad)} with a composition outside WEB: {bad}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
