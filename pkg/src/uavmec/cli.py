"""Command-line interface: ``uavmec {run,sweep-v,compare,plan}``.

Exit codes: 0 success, 1 configuration or usage error, 2 invariant breach
or IO failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .configio import PRESETS, load_config
from .deployment import write_plan
from .export import export_metrics, fmt
from .lyapunov import InvariantError
from .model import ConfigError, ScenarioConfig
from .simulation import ALGORITHMS, deployment_plan, run

log = logging.getLogger("uavmec")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; this CLI reserves 2 for runtime failures
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from None


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _csv_algos(text: str) -> list[str]:
    algos = [a.strip() for a in text.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad or not algos:
        raise argparse.ArgumentTypeError(f"algorithms must be among {','.join(ALGORITHMS)}")
    return algos


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uavmec", description="UAV-assisted vehicular edge computing simulator.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def scenario_args(sp):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--config", type=Path, help="scenario file (INI)")
        src.add_argument("--preset", choices=sorted(PRESETS), default="benchmark",
                         help="built-in scenario when no --config is given (default: benchmark)")
        sp.add_argument("--slots", type=int, help="override the number of slots")

    r = sub.add_parser("run", help="simulate one seed and export per-slot metrics")
    scenario_args(r)
    r.add_argument("--algo", choices=ALGORITHMS, default="joaodr")
    r.add_argument("--seed", type=int, help="master seed (default: the scenario's rng_seed)")
    r.add_argument("--out", type=Path, required=True, help="output directory")

    s = sub.add_parser("sweep-v", help="time-average utility versus the control weight V")
    scenario_args(s)
    s.add_argument("--values", type=_csv_floats, required=True, help="comma-separated V values")
    s.add_argument("--users", type=_csv_ints, help="comma-separated vehicle counts (default: scenario's)")
    s.add_argument("--seeds", type=int, default=10, help="seeds 0..N-1 averaged per point")
    s.add_argument("--algo", choices=ALGORITHMS, default="joaodr")
    s.add_argument("--out", type=Path, required=True, help="output CSV file")

    c = sub.add_parser("compare", help="average cumulative remuneration of several algorithms")
    scenario_args(c)
    c.add_argument("--algos", type=_csv_algos, default=list(ALGORITHMS))
    c.add_argument("--seeds", type=int, default=10, help="seeds 0..N-1")
    c.add_argument("--out", type=Path, required=True, help="output directory")

    pl = sub.add_parser("plan", help="write the offline UAV trajectory only")
    scenario_args(pl)
    pl.add_argument("--algo", choices=ALGORITHMS, default="joaodr")
    pl.add_argument("--out", type=Path, required=True, help="output CSV file")
    return p


def _scenario(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config is not None else PRESETS[args.preset]()
    if args.slots is not None:
        if args.slots < 0:
            raise ConfigError("--slots: must be >= 0")
        cfg = cfg.with_(num_slots=args.slots)
    return cfg


def _seed_count(n: int) -> int:
    if n < 1:
        raise ConfigError("--seeds: must be >= 1")
    return n


def cmd_run(args) -> int:
    cfg = _scenario(args)
    summary = run(cfg, args.algo, seed=args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "metrics.csv"
    export_metrics(summary, path)
    print(f"{summary.algorithm} seed={summary.seed} slots={len(summary.slots)} "
          f"remuneration={fmt(summary.total_remuneration)} "
          f"time_avg_utility={fmt(summary.time_average_utility)} served={summary.tasks_served} -> {path}")
    return EXIT_OK


def cmd_sweep_v(args) -> int:
    cfg = _scenario(args)
    seeds = range(_seed_count(args.seeds))
    users = args.users or [cfg.vehicle_count]
    rows = []
    for n in users:
        for V in args.values:
            point = cfg.with_(control_v=V, vehicle_count=n)
            runs = [run(point, args.algo, seed=s) for s in seeds]
            util = float(np.mean([r.time_average_utility for r in runs]))
            rem = float(np.mean([r.total_remuneration for r in runs]))
            log.info("users=%d V=%g utility=%.6g", n, V, util)
            rows.append([n, fmt(V), len(seeds), fmt(util), fmt(rem)])
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["users", "control_v", "seeds", "time_average_utility", "remuneration_total"])
        w.writerows(rows)
    for row in rows:
        print(f"users={row[0]} V={row[1]} time_avg_utility={row[3]}")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _scenario(args)
    seeds = range(_seed_count(args.seeds))
    args.out.mkdir(parents=True, exist_ok=True)
    curves = {}
    with (args.out / "compare_runs.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "seed", "remuneration_total", "time_average_utility", "tasks_served"])
        for algo in args.algos:
            runs = [run(cfg, algo, seed=s) for s in seeds]
            for r in runs:
                w.writerow([algo, r.seed, fmt(r.total_remuneration), fmt(r.time_average_utility), r.tasks_served])
            curves[algo] = np.mean([r.cumulative_remuneration for r in runs], axis=0) if cfg.num_slots else np.zeros(0)
    with (args.out / "compare_curves.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["slot"] + [f"{a}_remuneration_cum_mean" for a in args.algos])
        for t in range(cfg.num_slots):
            w.writerow([t] + [fmt(curves[a][t]) for a in args.algos])
    for a in args.algos:
        final = curves[a][-1] if cfg.num_slots else 0.0
        print(f"{a}: mean cumulative remuneration {fmt(final)} over {len(seeds)} seeds")
    return EXIT_OK


def cmd_plan(args) -> int:
    cfg = _scenario(args)
    plan = deployment_plan(cfg, args.algo)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_plan(plan, cfg.uav_configs, args.out)
    print(f"{len(plan)} slots x {len(cfg.uav_configs)} UAVs -> {args.out}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "sweep-v": cmd_sweep_v, "compare": cmd_compare, "plan": cmd_plan}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantError as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
