"""``wfsynth`` command line: validate, analyze, generate, simulate, compare.

Exit codes: 0 success, 1 validation failures, 2 usage error, 3 I/O error,
4 generation or simulation error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from wfsynth import __version__
from wfsynth.metrics import DEFAULT_GRID, TimelineField, average_reports, compare, timeline_ecdf
from wfsynth.recipes.builtin import RECIPE_NAMES
from wfsynth.recipes.generator import GenerationConfig, MissingSummary, generate
from wfsynth.recipes.patterns import BoundTooSmall
from wfsynth.rng import random_seed
from wfsynth.sim import GBPS, PlatformSpec, SimulationError, SimulationResult, simulate
from wfsynth.stats.summary import dumps_summaries, loads_summaries, summarize_traces
from wfsynth.trace import TraceError, parse_trace, serialize_trace, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_RUNTIME = 4


class _IOFailure(Exception):
    pass


def _err(msg: str) -> None:
    print(f"wfsynth: {msg}", file=sys.stderr)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        _write_text(out, text)


def _load_trace(path: str):
    return parse_trace(_read_text(path))


def _load_valid_trace(path: str):
    trace = _load_trace(path)
    violations = validate(trace)
    if violations:
        raise TraceError(violations)
    return trace


def _load_result(path: str) -> SimulationResult:
    try:
        return SimulationResult.from_json(_read_text(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise _IOFailure(f"{path} is not a simulation result: {exc}") from exc


def _load_summaries(path: str | None):
    if path is None:
        return None
    try:
        return loads_summaries(_read_text(path))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path} is not a summary document: {exc}") from exc


def _platform(args) -> PlatformSpec:
    return PlatformSpec(node_count=args.nodes, cores_per_node=args.cores, speed_factor=args.speed,
                        fs_bandwidth_bytes_per_sec=args.bandwidth, per_file_latency_sec=args.latency)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = random_seed()
        _err(f"using generated seed {args.seed}")
    return args.seed


def cmd_validate(args) -> int:
    try:
        trace = _load_trace(args.trace)
    except TraceError as exc:
        violations = exc.violations
    else:
        violations = validate(trace)
    for v in violations:
        print(v.format())
    return EXIT_INVALID if violations else EXIT_OK


def cmd_analyze(args) -> int:
    traces = [_load_valid_trace(p) for p in args.traces]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        summaries = summarize_traces(traces)
    for w in caught:
        _err(f"warning: {w.message}")
    _emit(dumps_summaries(summaries), args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    summaries = _load_summaries(args.summaries)
    seed = _seed(args)
    trace = generate(GenerationConfig(args.recipe, args.max_tasks, seed), summaries)
    _emit(serialize_trace(trace), args.out)
    return EXIT_OK


def _simulation_outputs(result: SimulationResult, args) -> None:
    _emit(result.to_json(), args.out)
    if args.csv:
        _write_text(args.csv, result.to_csv())


def cmd_simulate(args) -> int:
    trace = _load_valid_trace(args.trace)
    result = simulate(trace, _platform(args))
    _simulation_outputs(result, args)
    return EXIT_OK


def _export_ecdfs(prefix: str, label: str, result: SimulationResult) -> None:
    for field in TimelineField:
        for normalized in (False, True):
            e = timeline_ecdf(result, field, normalized)
            suffix = "-normalized" if normalized else ""
            _write_text(f"{prefix}{label}-{field.value}{suffix}.csv", e.to_csv())


def cmd_compare(args) -> int:
    reference = _load_result(args.result_a)
    if args.runs is None:
        if args.result_b is None:
            _err("compare needs two results, or --runs with --recipe")
            return EXIT_USAGE
        other = _load_result(args.result_b)
        report = compare(reference, other, args.grid)
        if args.ecdf_prefix:
            _export_ecdfs(args.ecdf_prefix, "a", reference)
            _export_ecdfs(args.ecdf_prefix, "b", other)
    else:
        if args.result_b is not None or args.recipe is None or args.max_tasks is None:
            _err("--runs compares one reference result against --recipe/--max-tasks runs")
            return EXIT_USAGE
        if args.runs < 1:
            _err("--runs must be >= 1")
            return EXIT_USAGE
        summaries = _load_summaries(args.summaries)
        base = _seed(args)
        platform = _platform(args)
        reports = []
        for i in range(args.runs):
            trace = generate(GenerationConfig(args.recipe, args.max_tasks, base + i), summaries)
            run = simulate(trace, platform)
            reports.append(compare(reference, run, args.grid))
            if args.ecdf_prefix:
                _export_ecdfs(args.ecdf_prefix, f"run{i}", run)
        if args.ecdf_prefix:
            _export_ecdfs(args.ecdf_prefix, "reference", reference)
        report = average_reports(reports)
    _emit(report.to_json(), args.out)
    return EXIT_OK


def _add_platform_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nodes", type=int, default=1, help="compute nodes (default 1)")
    p.add_argument("--cores", type=int, default=48, help="cores per node (default 48)")
    p.add_argument("--bandwidth", type=float, default=10 * GBPS,
                   help="shared file system bandwidth in bytes/s (default 1.25e9)")
    p.add_argument("--speed", type=float, default=1.0, help="core speed factor (default 1.0)")
    p.add_argument("--latency", type=float, default=0.0, help="per-file latency in seconds (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wfsynth", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check trace syntax and semantics")
    p.add_argument("trace")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="fit per-task-type summaries from traces")
    p.add_argument("traces", nargs="+")
    p.add_argument("--out", help="summary JSON path (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="generate a synthetic trace from a recipe")
    p.add_argument("--recipe", required=True, choices=RECIPE_NAMES)
    p.add_argument("--max-tasks", type=int, required=True)
    p.add_argument("--seed", type=int, help="random seed (generated and reported if omitted)")
    p.add_argument("--summaries", help="summary JSON overriding the bundled one")
    p.add_argument("--out", help="trace JSON path (default stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="simulate a trace on a multicore cluster")
    p.add_argument("trace")
    _add_platform_flags(p)
    p.add_argument("--out", help="result JSON path (default stdout)")
    p.add_argument("--csv", help="also write per-task timelines as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="quantile RMSE between simulated executions")
    p.add_argument("result_a", metavar="resultA")
    p.add_argument("result_b", metavar="resultB", nargs="?")
    p.add_argument("--runs", type=int, help="average over N generated runs against resultA")
    p.add_argument("--recipe", choices=RECIPE_NAMES)
    p.add_argument("--max-tasks", type=int)
    p.add_argument("--seed", type=int, help="base seed; run i uses seed + i")
    p.add_argument("--summaries")
    _add_platform_flags(p)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="quantile grid size K (default 1000)")
    p.add_argument("--ecdf-prefix", help="write value,probability CSVs with this path prefix")
    p.add_argument("--out", help="report JSON path (default stdout)")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _IOFailure as exc:
        _err(str(exc))
        return EXIT_IO
    except TraceError as exc:
        for v in exc.violations:
            _err(v.format())
        return EXIT_INVALID
    except BoundTooSmall as exc:
        _err(str(exc))
        return EXIT_RUNTIME
    except (SimulationError, MissingSummary) as exc:
        _err(str(exc))
        return EXIT_RUNTIME
    except ValueError as exc:
        # bad flag values (non-positive cores, malformed summaries, ...)
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
