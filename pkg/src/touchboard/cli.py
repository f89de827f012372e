"""Command-line front door: trace replay, video timing reports, evaluation stats.

Exit codes: 0 success, 2 unparseable input, 3 out-of-order trace,
4 invariant violation in the data, 5 bridge port unavailable.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from . import bundled, evalstats, video_out
from .device import TraceOrderError, TraceParseError, load_trace, run_trace

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_TRACE_ORDER = 3
EXIT_INVARIANT = 4


def _fmt3(values, spec: str = "{:.2f}") -> str:
    return "/".join(spec.format(v) for v in values)


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        events = load_trace(args.trace)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except TraceParseError as e:
        print(f"error: {args.trace}: {e}", file=sys.stderr)
        return EXIT_PARSE

    out_dir = Path(args.out_dir)
    snapshots: list[tuple[int, bytes]] = []

    def capture(index, dev) -> None:
        snapshots.append((index, video_out.export_ppm(dev.fb)))

    try:
        run = run_trace(events, on_event=capture if args.snapshot_every == "events" else None)
    except TraceOrderError as e:
        print(f"error: {args.trace}: {e}", file=sys.stderr)
        return EXIT_TRACE_ORDER

    # the run finished, so artifacts can be written without leaving partials
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "final.ppm").write_bytes(video_out.export_ppm(run.device.fb))
    with open(out_dir / "framelog.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "at", "fb_hash", "digits"])
        for entry in run.log:
            writer.writerow([entry.index, entry.at, entry.fb_hash, entry.digits])
    for index, ppm in snapshots:
        (out_dir / f"event_{index:04d}.ppm").write_bytes(ppm)

    print(
        f"replayed {len(events)} events in {run.device.tick_count} ticks; "
        f"power={run.device.power.value} fb={run.device.fb.content_hash()[:16]}"
    )
    return EXIT_OK


def _cmd_vga_report(args: argparse.Namespace) -> int:
    print(video_out.timing_report(args.frames), end="")
    return EXIT_OK


def _load_matrix(args: argparse.Namespace, fixture_name: str) -> evalstats.TaskMatrix:
    path = bundled.fixture_path(fixture_name) if args.fixtures else Path(args.input)
    return evalstats.TaskMatrix.from_csv(path)


def _print_means(kind: str, report: evalstats.MeansReport, fmt: str) -> None:
    if fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["task", "mean", "mean_2dp"])
        for label, mean, rounded in zip(report.labels, report.per_task, report.per_task_rounded):
            writer.writerow([label, repr(mean), f"{rounded:.2f}"])
        writer.writerow(["overall", repr(report.overall), f"{report.overall_rounded:.2f}"])
        return
    print(f"{kind} means per task:")
    for label, rounded in zip(report.labels, report.per_task_rounded):
        print(f"  {label}: {rounded:.2f}")
    print(f"overall: {report.overall_rounded:.2f} (exact {report.overall!r})")


def _cmd_times(args: argparse.Namespace) -> int:
    report = evalstats.task_means(_load_matrix(args, bundled.TASK_TIMES))
    _print_means("completion-time", report, args.format)
    return EXIT_OK


def _cmd_difficulty(args: argparse.Namespace) -> int:
    report = evalstats.difficulty_means(_load_matrix(args, bundled.TASK_DIFFICULTY))
    _print_means("difficulty", report, args.format)
    return EXIT_OK


def _cmd_survey(args: argparse.Namespace) -> int:
    if args.fixtures:
        path = bundled.fixture_path(bundled.SURVEY_FACTORS[args.factor])
        factor = args.factor
    else:
        path = Path(args.input)
        factor = path.stem
    report = evalstats.survey_stats(evalstats.SurveyTable.from_csv(path))
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["item", "f_no", "f_partly", "f_yes", "pct_no", "pct_partly", "pct_yes", "mean", "std"])
        for item in report.items:
            writer.writerow([item.label, *item.f, *(f"{p:.2f}" for p in item.pct),
                             f"{evalstats.round2(item.mean):.2f}", f"{evalstats.round2(item.std):.2f}"])
        writer.writerow(["overall", *(f"{f:.2f}" for f in report.overall_f),
                         *(f"{p:.2f}" for p in report.overall_pct),
                         f"{evalstats.round2(report.overall_mean):.2f}", report.band])
        return EXIT_OK
    print(f"factor: {factor}")
    for item in report.items:
        print(
            f"  {item.label}: f={_fmt3(item.f, '{}')} pct={_fmt3(item.pct)} "
            f"mean={evalstats.round2(item.mean):.2f} std={evalstats.round2(item.std):.2f}"
        )
    print(
        f"overall: f={_fmt3(report.overall_f)} pct={_fmt3(report.overall_pct)} "
        f"mean={evalstats.round2(report.overall_mean):.2f} band={report.band}"
    )
    return EXIT_OK


def _cmd_discovery(args: argparse.Namespace) -> int:
    if args.lam is not None:
        p = evalstats.discovery_proportion(args.lam, args.n)
        print(f"proportion: {p:.4f} (lambda={args.lam}, n={args.n})")
    else:
        lam = evalstats.solve_lambda(args.target, args.n)
        print(f"lambda: {lam:.6f} (target={args.target}, n={args.n})")
    return EXIT_OK


def _cmd_resample(args: argparse.Namespace) -> int:
    matrix = evalstats.DiscoveryMatrix.from_csv(args.input)
    seed = args.seed if args.seed is not None else int(os.environ.get("TOUCHBOARD_SEED", "0"))
    report = evalstats.subgroup_resample(matrix, args.k, args.trials, seed)
    print(
        f"k={report.k} trials={report.trials} "
        f"min={report.min_pct:.2f} mean={report.mean_pct:.2f} std={report.std_pct:.2f}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="touchboard", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    replay = sub.add_parser("replay", help="replay a trace file and export artifacts")
    replay.add_argument("trace", help="trace file path")
    replay.add_argument("--out-dir", required=True, help="artifact directory")
    replay.add_argument("--snapshot-every", choices=["events", "end"], default="end")
    replay.set_defaults(func=_cmd_replay)

    vga = sub.add_parser("vga-report", help="simulate video frames, report sync counts")
    vga.add_argument("--frames", type=int, default=1)
    vga.set_defaults(func=_cmd_vga_report)

    stats = sub.add_parser("evalstats", help="evaluation statistics")
    kinds = stats.add_subparsers(dest="kind", required=True)

    def add_matrix_cmd(name, func, help_text):
        cmd = kinds.add_parser(name, help=help_text)
        src = cmd.add_mutually_exclusive_group(required=True)
        src.add_argument("--fixtures", action="store_true", help="use the bundled data")
        src.add_argument("--input", help="CSV path (rows tasks, columns participants)")
        cmd.add_argument("--format", choices=["text", "csv"], default="text")
        cmd.set_defaults(func=func)
        return cmd

    add_matrix_cmd("times", _cmd_times, "per-task completion-time means")
    add_matrix_cmd("difficulty", _cmd_difficulty, "per-task difficulty means")

    survey = kinds.add_parser("survey", help="three-point survey summary")
    src = survey.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixtures", action="store_true")
    src.add_argument("--input", help="CSV path (label,no,partly,yes)")
    survey.add_argument("--factor", choices=sorted(bundled.SURVEY_FACTORS), default="subservientness")
    survey.add_argument("--format", choices=["text", "csv"], default="text")
    survey.set_defaults(func=_cmd_survey)

    discovery = kinds.add_parser("discovery", help="problem-discovery curve")
    mode = discovery.add_mutually_exclusive_group(required=True)
    mode.add_argument("--lambda", dest="lam", type=float, help="per-user discovery probability")
    mode.add_argument("--target", type=float, help="solve for lambda hitting this proportion")
    discovery.add_argument("--n", type=int, required=True, help="number of evaluators")
    discovery.set_defaults(func=_cmd_discovery)

    resample = kinds.add_parser("resample", help="subgroup coverage resampling")
    resample.add_argument("--input", required=True, help="CSV hit grid (rows users, columns problems)")
    resample.add_argument("--k", type=int, required=True)
    resample.add_argument("--trials", type=int, default=100)
    resample.add_argument("--seed", type=int, default=None, help="defaults to $TOUCHBOARD_SEED or 0")
    resample.set_defaults(func=_cmd_resample)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except evalstats.CsvFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (evalstats.StatsError, video_out.DimensionMismatch, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
