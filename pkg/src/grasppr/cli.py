"""Command-line surface: solve one instance, benchmark a grid, validate files.

Exit codes: 0 success, 2 instance parse failure, 64 bad flags or options,
74 I/O failure, 1 benchmark cell crash. Flag values stay strings until one
shared translation layer (bench_io.build_run_config) parses them, so command
line, config file and benchmark method specs all validate identically.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bench_io
from .bench_io import BenchError, CellSpec, OptionError, ParseError
from .drivers import run

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_USAGE = 64
EXIT_IO = 74

_RUN_KEYS = ("time", "iters", "seed", "seeds")
_CONFIG_KEYS = bench_io.OPTION_KEYS + _RUN_KEYS


class UsageError(Exception):
    """Bad flag combination or option value; maps to exit code 64."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _add_option_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("search options")
    g.add_argument("--variant", metavar="V",
                   help="semigreedy | grasp | static_pr | dynamic_pr | evolutionary_pr (default grasp)")
    g.add_argument("--direction", metavar="D",
                   help="relink direction: forward | backward | bf | mixed (default: mixed for lop, forward for maxcut)")
    g.add_argument("--step", metavar="S",
                   help="relink step selection: greedy | grpr (default: grpr for lop, greedy for maxcut)")
    g.add_argument("--rcl-size", metavar="N", help="candidate moves kept per grpr step (default 3)")
    g.add_argument("--trunc", metavar="RHO", help="fraction of each relink path walked, in (0,1] (default 1.0)")
    g.add_argument("--min-dist", metavar="N", help="skip relinking below this symmetric difference (default 4)")
    g.add_argument("--inpath-ls", metavar="P",
                   help="local search along the path: none | all | every:Q | best (default: best for lop, every:5 for maxcut)")
    g.add_argument("--depth", metavar="D", help="local search rule: first | best (default best)")
    g.add_argument("--alpha-min", metavar="F", help="lower end of the construction greediness range (default 0.0)")
    g.add_argument("--alpha-max", metavar="F",
                   help="upper end of the construction greediness range; 0 means pure greedy (default 0.3)")
    g.add_argument("--rcl-mode", metavar="M", help="candidate restriction: value | card (default value)")
    g.add_argument("--elite-k", metavar="N", help="elite pool capacity (default 10)")
    g.add_argument("--dth", metavar="N", help="pool diversity threshold (default: 5%% of n, at least 1)")
    g.add_argument("--guide", metavar="G", help="guide selection: uniform | pdelta (default uniform)")
    g.add_argument("--kappa", metavar="N",
                   help="restart after N iterations without improvement (default: no restarts)")
    g.add_argument("--static-sample", metavar="N",
                   help="constructions before the static relinking phase (default 100)")


def _add_stop_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time", metavar="S", help="wall-clock budget in seconds")
    p.add_argument("--iters", metavar="N", help="iteration budget")
    p.add_argument("--config", metavar="FILE", help="flat key=value defaults; explicit flags win")


def build_parser() -> _Parser:
    parser = _Parser(prog="grasppr", description="GRASP with path relinking for ordering and cut problems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser, metavar="COMMAND")

    def add_solve(name: str, help_text: str, profile_required: bool) -> None:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--problem", required=True, choices=list(bench_io.PROBLEMS), help="problem kind")
        p.add_argument("--instance", required=True, metavar="PATH", help="instance file")
        p.add_argument("--seed", metavar="U64", help="random seed (default 1)")
        _add_stop_flags(p)
        _add_option_flags(p)
        p.add_argument("--out", metavar="PATH", help="write the best solution to this file")
        p.add_argument("--profile", metavar="PATH", required=profile_required,
                       help="write the incumbent trajectory CSV to this file")
        p.set_defaults(func=_cmd_solve)

    add_solve("solve", "run one configured search on one instance", False)
    add_solve("profile", "run one search and record the incumbent trajectory", True)

    b = sub.add_parser("bench", help="run a (method x instance x seed) grid and tabulate results")
    b.add_argument("--problem", required=True, choices=list(bench_io.PROBLEMS), help="problem kind")
    b.add_argument("--instances", required=True, metavar="DIR",
                   help="directory scanned for *.mat (lop) or *.el (maxcut) files")
    b.add_argument("--method", action="append", required=True, metavar="SPEC",
                   help="method spec 'variant[:key=value...]'; repeat for several methods")
    b.add_argument("--seeds", metavar="LIST", help="comma-separated seeds (default 1)")
    b.add_argument("--jobs", metavar="N", help="concurrent worker processes (default 1)")
    b.add_argument("--best-known", metavar="FILE", help="'instance,value' lines for the _k statistics")
    b.add_argument("--out", required=True, metavar="DIR", help="directory for results.csv and stats.csv")
    _add_stop_flags(b)
    _add_option_flags(b)
    b.set_defaults(func=_cmd_bench)

    v = sub.add_parser("validate", help="parse an instance file and print a summary")
    v.add_argument("--problem", required=True, choices=list(bench_io.PROBLEMS), help="problem kind")
    v.add_argument("--instance", required=True, metavar="PATH", help="instance file")
    v.set_defaults(func=_cmd_validate)
    return parser


def _parse_int(name: str, raw) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: expected an integer, got {raw!r}") from None


def _parse_float(name: str, raw) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: expected a number, got {raw!r}") from None


def _read_config(path: str) -> dict[str, str]:
    opts: dict[str, str] = {}
    for ln, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{ln}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{ln}: unknown key {key!r}")
        opts[key] = value
    return opts


def _merged_options(args, config: dict[str, str]) -> dict[str, str]:
    options = {k: v for k, v in config.items() if k in bench_io.OPTION_KEYS}
    for key in bench_io.OPTION_KEYS:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            options[key] = value
    return options


def _merged_run_value(args, config: dict[str, str], key: str):
    value = getattr(args, key, None)
    return value if value is not None else config.get(key)


def _stop_limits(args, config) -> tuple[Optional[float], Optional[int]]:
    raw_time = _merged_run_value(args, config, "time")
    raw_iters = _merged_run_value(args, config, "iters")
    time_limit = _parse_float("time", raw_time) if raw_time is not None else None
    iteration_limit = _parse_int("iters", raw_iters) if raw_iters is not None else None
    if time_limit is None and iteration_limit is None:
        raise UsageError("need a stopping rule: --time and/or --iters")
    return time_limit, iteration_limit


def _cmd_solve(args) -> int:
    config = _read_config(args.config) if args.config else {}
    options = _merged_options(args, config)
    time_limit, iteration_limit = _stop_limits(args, config)
    raw_seed = _merged_run_value(args, config, "seed")
    seed = _parse_int("seed", raw_seed) if raw_seed is not None else 1

    instance = bench_io.load_instance(args.instance, args.problem)
    try:
        cfg = bench_io.build_run_config(args.problem, options, seed, time_limit, iteration_limit)
    except OptionError as exc:
        raise UsageError(str(exc)) from None

    report = run(instance, cfg)
    stem = Path(args.instance).stem
    print(
        f"instance={stem} problem={args.problem} variant={cfg.variant} seed={cfg.seed} "
        f"best={report.best_objective} iterations={report.iterations} restarts={report.restarts}"
    )
    print(f"elapsed_s={report.elapsed_s:.3f}")
    if args.out:
        Path(args.out).write_text(bench_io.serialize_solution(report.best_solution) + "\n")
    if args.profile:
        with open(args.profile, "w") as sink:
            bench_io.emit_profile(report, sink)
    return EXIT_OK


def _cmd_validate(args) -> int:
    instance = bench_io.load_instance(args.instance, args.problem)
    if args.problem == bench_io.LOP:
        flat = [w for row in instance.cost for w in row]
        print(f"lop n={instance.n} entries={instance.n * instance.n} wmin={min(flat)} wmax={max(flat)}")
    else:
        weights = [w for _, _, w in instance.edges]
        wmin, wmax = (min(weights), max(weights)) if weights else (0, 0)
        print(f"maxcut n={instance.n} edges={instance.m} wmin={wmin} wmax={wmax}")
    return EXIT_OK


def _parse_method_spec(spec: str) -> dict[str, str]:
    parts = spec.split(":")
    variant = parts[0].strip()
    if not variant:
        raise UsageError(f"empty variant in method spec {spec!r}")
    opts = {"variant": variant}
    for part in parts[1:]:
        if "=" not in part:
            raise UsageError(f"method option {part!r} must be key=value (in {spec!r})")
        key, value = part.split("=", 1)
        key, value = key.strip(), value.strip()
        if key == "variant" or key not in bench_io.OPTION_KEYS:
            raise UsageError(f"unknown method option {key!r} (in {spec!r})")
        opts[key] = value
    return opts


def _cmd_bench(args) -> int:
    config = _read_config(args.config) if args.config else {}
    baseline = _merged_options(args, config)
    time_limit, iteration_limit = _stop_limits(args, config)

    raw_seeds = _merged_run_value(args, config, "seeds")
    seeds = [_parse_int("seeds", s) for s in str(raw_seeds).split(",")] if raw_seeds is not None else [1]
    jobs = _parse_int("jobs", args.jobs) if args.jobs is not None else 1
    if jobs < 1:
        raise UsageError("jobs must be >= 1")

    labels = args.method
    if len(set(labels)) != len(labels):
        raise UsageError("duplicate method specs")
    methods = []
    for spec in labels:
        merged = dict(baseline)
        merged.update(_parse_method_spec(spec))
        try:  # validate now so a bad spec fails before any cell runs
            bench_io.build_run_config(args.problem, merged, seeds[0], time_limit, iteration_limit)
        except OptionError as exc:
            raise UsageError(f"method {spec!r}: {exc}") from None
        methods.append((spec, tuple(sorted(merged.items()))))

    instance_dir = Path(args.instances)
    paths = sorted(instance_dir.glob(bench_io.INSTANCE_GLOB[args.problem]))
    if not paths:
        raise UsageError(
            f"no instances matching {bench_io.INSTANCE_GLOB[args.problem]!r} in {instance_dir}"
        )
    best_known = bench_io.read_best_known(args.best_known) if args.best_known else None

    cells = [
        CellSpec(args.problem, str(p), p.stem, label, options, seed, time_limit, iteration_limit)
        for label, options in methods
        for p in paths
        for seed in seeds
    ]
    rows = bench_io.run_grid(cells, jobs)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "results.csv", "w") as sink:
        bench_io.write_results_csv(rows, sink)
    stats = bench_io.compute_stats(bench_io.aggregate_best(rows), best_known, method_order=labels)
    with open(out_dir / "stats.csv", "w") as sink:
        bench_io.write_stats_csv(stats, sink)
    bench_io.write_stats_csv(stats, sys.stdout)
    print(f"wrote {out_dir / 'results.csv'} and {out_dir / 'stats.csv'}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))
