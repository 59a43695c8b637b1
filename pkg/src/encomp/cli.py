"""Command-line front end.

``encomp test`` runs the encompassing tests on a CSV file and prints a JSON
report.  ``encomp simulate`` runs the Monte Carlo harness and writes CSV
tables.  Exit codes: 0 success, 2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bandwidth import parse_rule
from .bootstrap import MultiplierLaw, TestConfig, run_tests
from .errors import EncompError
from .ingest import ColumnMap, load_csv
from .kernels import KernelFamily, TrimRule
from .simulation import DgpSpec, SimulationCell, resolve_threads, warp_speed_run
from .statistics import StatisticKind
from .weighting import WeightSpec

SCHEMA_VERSION = 1
EXIT_USAGE = 2
EXIT_DATA = 3

DIRECTIONS = ("w-encompasses-x", "x-encompasses-w", "both")


class UsageError(Exception):
    pass


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _names(text: str) -> tuple[str, ...]:
    names = tuple(t.strip() for t in text.split(",") if t.strip())
    if not names:
        raise ValueError("empty column list")
    return names


def _add_common(p: argparse.ArgumentParser, reps_default: int | None = None) -> None:
    p.add_argument("--stat", "--stats", dest="stats", default="icm,bc,lr")
    p.add_argument("--bandwidth", default="aicc", help="rot:C | aicc | aicc:CMIN:CMAX:NUM")
    p.add_argument("--trim", default="none", help="none | quantile:ALPHA")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", default="0.05,0.10")
    p.add_argument("--multiplier", default="mammen", choices=[m.value for m in MultiplierLaw])
    p.add_argument("--kernel", default="gaussian", choices=[k.value for k in KernelFamily])
    p.add_argument("--transform", default="logistic", help="logistic | raw-logistic | standardize | none")
    p.add_argument("--threads", type=int, default=None, help="worker cap (default: $ENCOMP_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="encomp", description="Nonparametric encompassing tests")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="test encompassing on a CSV dataset")
    t.add_argument("--data", required=True, help="CSV file with a header row")
    t.add_argument("--y", required=True)
    t.add_argument("--w", required=True, help="comma-separated regressors of the encompassing model")
    t.add_argument("--x", required=True, help="comma-separated regressors of the competing model")
    t.add_argument("--direction", default="w-encompasses-x", choices=DIRECTIONS)
    t.add_argument("--boot", type=int, default=999)
    t.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    _add_common(t)

    s = sub.add_parser("simulate", help="Monte Carlo size/power study")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--gamma-list", default="0")
    s.add_argument("--reps", type=int, default=1000)
    s.add_argument("--power-level", type=float, default=0.10)
    s.add_argument("--out", required=True, help="output directory")
    _add_common(s)
    return parser


def _config(args, B: int) -> tuple[TestConfig, list[StatisticKind]]:
    try:
        kinds = StatisticKind.parse_list(args.stats)
        cfg = TestConfig(
            bandwidth=parse_rule(args.bandwidth),
            trim=TrimRule.parse(args.trim),
            weight=WeightSpec(args.transform),
            kernel=KernelFamily(args.kernel),
            law=MultiplierLaw(args.multiplier),
            B=B,
            levels=_floats(args.levels),
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a nonnegative 64-bit integer")
    return cfg, kinds


def _direction_report(label: str, cmap: ColumnMap, sample, cfg: TestConfig, kinds) -> dict:
    cfg = replace(cfg, stream_tag=f"multiplier/{label}")
    prep, results = run_tests(sample, cfg, kinds)
    return {
        "direction": label,
        "response": cmap.y,
        "smoothing_columns": list(cmap.w),
        "weighting_columns": list(cmap.x),
        "n": sample.n,
        "p": sample.p,
        "d": sample.d,
        "bandwidth": {
            "rule": cfg.bandwidth.label(),
            "h": prep.h,
            "scale": "studentized",
            "aicc_curve": None if prep.aicc is None else [list(pt) for pt in prep.aicc.curve()],
        },
        "kernel": cfg.kernel.value,
        "transform": cfg.weight.transform.value,
        "trim": {"rule": cfg.trim.label(), "tau": prep.ctx.tau, "n_trimmed": prep.ctx.n_trimmed},
        "B": cfg.B,
        "seed": cfg.seed,
        "multiplier": cfg.law.value,
        "levels": list(cfg.levels),
        "statistics": {k.value: results[k].to_dict() for k in kinds},
    }


def cmd_test(args) -> dict:
    cfg, kinds = _config(args, args.boot)
    try:
        cmap = ColumnMap(args.y, _names(args.w), _names(args.x))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sample = load_csv(args.data, cmap)
    jobs = []
    if args.direction in ("w-encompasses-x", "both"):
        jobs.append(("w-encompasses-x", cmap, sample))
    if args.direction in ("x-encompasses-w", "both"):
        jobs.append(("x-encompasses-w", cmap.swapped(), sample.swapped()))
    workers = min(resolve_threads(args.threads), len(jobs))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(lambda job: _direction_report(*job, cfg, kinds), jobs))
    return {"schema": SCHEMA_VERSION, "reports": reports}


def _fmt(v) -> str:
    return repr(float(v)) if not isinstance(v, str) else v


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def cmd_simulate(args) -> dict:
    cfg, kinds = _config(args, 1)
    try:
        gammas = list(dict.fromkeys(_floats(args.gamma_list)))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.n < 5 or args.reps < 1 or not gammas:
        raise UsageError("need --n >= 5, --reps >= 1 and at least one gamma")
    if not 0 < args.power_level < 1:
        raise UsageError("--power-level must lie in (0, 1)")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reports = {}
    for g in gammas:
        cell = SimulationCell(DgpSpec(args.n, g), cfg, tuple(kinds), args.reps)
        reports[g] = warp_speed_run(cell, args.threads)

    _write_rows(
        out / "rejection_table.csv",
        ("kind", "level", "gamma", "proportion", "mc_se"),
        [(k.value, lv, g, pi, se) for g, rep in reports.items() for k, lv, pi, se in rep.table()],
    )
    null = reports.get(0.0)
    _write_rows(
        out / "erp_curve.csv",
        ("kind", "nominal", "erp"),
        [] if null is None else [(k.value, lv, e) for k in kinds for lv, e in null.erp_curve(k)],
    )
    _write_rows(
        out / "power_curve.csv",
        ("kind", "gamma", "rejection"),
        [(k.value, g, rep.rejection(k, args.power_level)) for k in kinds for g, rep in reports.items()],
    )
    return {"out": str(out), "reports": reports}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "test":
            result = cmd_test(args)
            text = json.dumps(result, indent=2, allow_nan=False)
            if args.out:
                Path(args.out).write_text(text + "\n", encoding="utf-8")
            else:
                sys.stdout.write(text + "\n")
            parts = [
                f"{r['direction']} {k}:p={v['p_value']:.4f}"
                for r in result["reports"]
                for k, v in r["statistics"].items()
            ]
            print("encomp test: " + ", ".join(parts), file=sys.stderr)
        else:
            res = cmd_simulate(args)
            print(f"encomp simulate: wrote 3 tables for {len(res['reports'])} gamma value(s) to {res['out']}", file=sys.stderr)
    except UsageError as exc:
        print(f"encomp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EncompError, OSError) as exc:
        print(f"encomp: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
