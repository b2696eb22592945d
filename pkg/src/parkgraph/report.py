"""Delimited tables and companion figures for the sweep subcommands.

CSV is the primary machine-readable artifact; each writer also has a
matplotlib renderer that drops a PNG next to the table when asked.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable

from .counting import ScanRow, VerifyReport

SUM_COLUMNS = ("family", "n", "m", "count", "instances", "millis")
VERIFY_COLUMNS = ("identity", "n", "m", "lhs", "rhs", "passed", "note")
SCAN_COLUMNS = ("n", "m", "tree", "sink_count", "source_count", "sign")


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_csv(path: Path, columns: tuple[str, ...], rows: Iterable[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in columns})


def render_sum_figure(rows: list[dict], path: Path) -> None:
    """Counts against sequence length, one line per (family, n)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    series: dict[tuple[str, int], list[tuple[int, int]]] = {}
    for row in rows:
        series.setdefault((row["family"], row["n"]), []).append((row["m"], row["count"]))
    for (family, n), points in sorted(series.items()):
        points.sort()
        ax.plot(
            [p[0] for p in points],
            [p[1] for p in points],
            marker="o",
            label=f"{family} n={n}",
        )
    ax.set_xlabel("drivers m")
    ax.set_ylabel("parking functions")
    ax.set_yscale("symlog")
    ax.legend(fontsize=8)
    ax.set_title("family totals")
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_verify_figure(report: VerifyReport, path: Path) -> None:
    """Both sides of each checked row, side by side."""
    plt = _pyplot()
    rows = list(report.rows)
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(rows)), 4))
    xs = range(len(rows))
    ax.bar([x - 0.2 for x in xs], [r.lhs for r in rows], width=0.4, label="lhs")
    ax.bar([x + 0.2 for x in xs], [r.rhs for r in rows], width=0.4, label="rhs")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([f"n={r.n},m={r.m}" for r in rows], rotation=45, fontsize=7)
    for x, r in zip(xs, rows):
        if not r.passed:
            ax.annotate("FAIL", (x, max(r.lhs, r.rhs)), color="red", ha="center")
    ax.set_yscale("symlog")
    ax.set_title(report.identity)
    ax.legend()
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_scan_figure(rows: list[ScanRow], path: Path) -> None:
    """How often the sink count beats, ties, or trails the source count."""
    plt = _pyplot()
    tally: dict[tuple[int, int], list[int]] = {}
    for row in rows:
        bucket = tally.setdefault((row.n, row.m), [0, 0, 0])
        bucket[row.sign + 1] += 1
    keys = sorted(tally)
    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(keys)), 4))
    xs = range(len(keys))
    below = [tally[k][0] for k in keys]
    equal = [tally[k][1] for k in keys]
    above = [tally[k][2] for k in keys]
    ax.bar(xs, below, label="sink < source")
    ax.bar(xs, equal, bottom=below, label="equal")
    ax.bar(xs, above, bottom=[b + e for b, e in zip(below, equal)], label="sink > source")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([f"n={n},m={m}" for n, m in keys], rotation=45, fontsize=7)
    ax.set_ylabel("trees")
    ax.set_title("orientation comparison")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
