"""CSV export of per-slot run metrics.

Numbers are written with nine significant digits so that files are
byte-identical across runs and platforms.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .simulation import RunSummary


def fmt(x: float) -> str:
    return f"{x:.9g}"


def metrics_header(summary: RunSummary) -> list[str]:
    ids = [u.id for u in summary.config.uav_configs]
    return (["run_id", "algorithm", "seed", "slot", "remuneration_cum", "utility_cum"]
            + [f"battery_j_{i}" for i in ids]
            + [f"free_channels_{i}" for i in ids]
            + ["tasks_served_cum"])


def metrics_csv(summary: RunSummary, run_id: str | None = None) -> str:
    if run_id is None:
        run_id = f"{summary.algorithm}-{summary.seed}"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(metrics_header(summary))
    rem = summary.cumulative_remuneration
    util = summary.cumulative_utility
    served = 0
    for k, s in enumerate(summary.slots):
        served += s.tasks_served
        w.writerow([run_id, summary.algorithm, summary.seed, s.slot, fmt(rem[k]), fmt(util[k])]
                   + [fmt(b) for b in s.battery_j]
                   + [str(c) for c in s.free_channels]
                   + [served])
    return buf.getvalue()


def export_metrics(summary: RunSummary, path, run_id: str | None = None) -> None:
    """Write one header row plus one row per slot; raises ``OSError`` on IO failure."""
    with Path(path).open("w", newline="") as fh:
        fh.write(metrics_csv(summary, run_id))
