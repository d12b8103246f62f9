"""Render CP/PPT region polygons and the PPT^2 composition plot to PNG.

Reads the CSV files written by `cartanchan emit-figures --out DIR`.

    python3 scripts/plot_regions.py DIR
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def read_points(path: Path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def closed(pts: np.ndarray) -> np.ndarray:
    return np.vstack([pts, pts[:1]])


def plot_family(fig_dir: Path, index: dict, kind: str, n: int) -> None:
    entries = [e for e in index["regions"] if e["kind"] == kind and "error" not in e]
    fig, (ax_cp, ax_ppt) = plt.subplots(1, 2, figsize=(10, 4.5))
    for e in entries:
        for ax, key in ((ax_cp, "cp_file"), (ax_ppt, "ppt_file")):
            p = closed(read_points(fig_dir / e[key]))
            ax.plot(p[:, 0], p[:, 1], label=f"D={e['dim']}")
    for ax, title in ((ax_cp, "CP"), (ax_ppt, "PPT")):
        ax.set(xlabel=r"$\alpha$", ylabel=r"$\beta$", title=f"{kind.upper()} {title}")
        ax.axhline(0, color="0.8", lw=0.5)
        ax.axvline(0, color="0.8", lw=0.5)
        ax.legend()
    fig.tight_layout()
    fig.savefig(fig_dir / f"fig{n}.png", dpi=150)
    plt.close(fig)


def plot_ppt2(fig_dir: Path, index: dict) -> None:
    entries = index["ppt2"]
    fig, axes = plt.subplots(1, len(entries), figsize=(5 * len(entries), 4.5), squeeze=False)
    for ax, e in zip(axes[0], entries):
        web = closed(read_points(fig_dir / e["web_file"]))
        pts = read_points(fig_dir / e["compositions_file"])
        ax.fill(web[:, 0], web[:, 1], alpha=0.25, label="WEB")
        ax.scatter(pts[:, 0], pts[:, 1], s=12, color="k", label="compositions")
        ax.set(xlabel=r"$\alpha$", ylabel=r"$\beta$", title=f"{e['kind'].upper()} D={e['dim']}")
        ax.legend()
    fig.tight_layout()
    fig.savefig(fig_dir / "fig3.png", dpi=150)
    plt.close(fig)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    fig_dir = Path(argv[0] if argv else "figures")
    index = json.loads((fig_dir / "figures.json").read_text(encoding="utf-8"))
    plot_family(fig_dir, index, "so", 1)
    plot_family(fig_dir, index, "sp", 2)
    plot_ppt2(fig_dir, index)
    print(f"wrote fig1.png, fig2.png, fig3.png to {fig_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
