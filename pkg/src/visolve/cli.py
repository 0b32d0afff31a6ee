"""Command-line front end: benchmark runs, single solves, invariant checks.

Configuration is a flat key = value text file (one pair per line, `#`
comments); command-line flags override file values. Results land in the
output directory as one CSV per experiment, a JSON summary averaged per
(dimension, accuracy) cell, and optional SVG convergence figures.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from . import bench, checks, report

CONFIG_KEYS = {
    "experiment": str,
    "eps": "float_list",
    "seed": int,
    "trials": int,
    "search_factor": float,
    "m_init": "auto_float",
    "max_outer": int,
    "n": "int_list",
    "p": int,
    "q": int,
    "m": int,
    "N": int,
    "lambda_radius": float,
    "x_radius": float,
    "out": str,
    "format": str,
    "jobs": int,
}

FORMATS = ("csv", "json", "svg")


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    """Everything one `bench` invocation needs."""

    experiments: list
    out_dir: str
    formats: tuple
    jobs: int = 1
    verbose: int = 0
    configs: dict = field(default_factory=dict)  # experiment -> ExperimentConfig


def parse_config_text(text):
    """Parse the flat key = value grammar; returns (pairs, errors)."""
    pairs = {}
    errors = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in pairs:
            errors.append(f"line {lineno}: duplicate key {key!r}")
            continue
        pairs[key] = value
    return pairs, errors


def _convert(key, value, errors):
    kind = CONFIG_KEYS[key]
    try:
        if kind is str:
            return value
        if kind is int:
            return int(value)
        if kind is float:
            return float(value)
        if kind == "float_list":
            return tuple(float(v) for v in value.split(",") if v.strip())
        if kind == "int_list":
            return tuple(int(v) for v in value.split(",") if v.strip())
        if kind == "auto_float":
            return None if value == "auto" else float(value)
    except ValueError:
        errors.append(f"field {key}: cannot parse {value!r}")
        return None
    raise AssertionError(kind)


def normalized_config(pairs):
    """Validate raw string pairs into per-experiment ExperimentConfigs.

    Returns (manifest-ish dict, errors); every violated constraint is
    reported with its field name rather than stopping at the first.
    """
    errors = []
    values = {}
    for key, raw in pairs.items():
        converted = _convert(key, raw, errors)
        if converted is not None or CONFIG_KEYS[key] == "auto_float":
            values[key] = converted

    experiment = values.get("experiment")
    if not experiment:
        errors.append("missing experiment")
        return None, errors
    names = (
        list(bench.EXPERIMENTS)
        if experiment == "all"
        else [name.strip() for name in experiment.split(",")]
    )
    for name in names:
        if name not in bench.EXPERIMENTS:
            errors.append(
                f"field experiment: unknown experiment {name!r}; "
                f"expected one of {', '.join(bench.EXPERIMENTS)} or 'all'"
            )
    if any(e <= 0 for e in values.get("eps", ())):
        errors.append("field eps: accuracies must be positive")
    if values.get("trials", 1) < 1:
        errors.append("field trials: must be at least 1")
    if values.get("search_factor", 2.0) <= 1.0:
        errors.append("field search_factor: must exceed 1")
    if not 0 <= values.get("seed", 0) < 2**64:
        errors.append("field seed: must fit in 64 bits")
    if values.get("lambda_radius", 1.0) <= 0:
        errors.append("field lambda_radius: must be positive")
    if values.get("x_radius", 1.0) <= 0:
        errors.append("field x_radius: must be positive")
    if values.get("jobs", 1) < 1:
        errors.append("field jobs: must be at least 1")
    for fmt in values.get("format", "csv").split(","):
        if fmt.strip() not in FORMATS:
            errors.append(f"field format: unknown format {fmt.strip()!r}")
    for key in ("p", "q", "N", "max_outer"):
        if key in values and values[key] < 1:
            errors.append(f"field {key}: must be at least 1")
    if "m" in values and values["m"] < 0:
        errors.append(f"field m: must be nonnegative")
    if "n" in values and any(v < 1 for v in values["n"]):
        errors.append("field n: entries must be at least 1")
    if errors:
        return None, errors

    configs = {}
    for name in names:
        kwargs = {}
        for key, target in (
            ("eps", "eps"),
            ("seed", "seed"),
            ("trials", "trials"),
            ("search_factor", "search_factor"),
            ("m_init", "m_init"),
            ("max_outer", "max_outer"),
            ("lambda_radius", "lambda_radius"),
            ("x_radius", "x_radius"),
        ):
            if key in values:
                kwargs[target] = values[key]
        if name == "exp-operator" and "n" in values:
            kwargs["n"] = values["n"]
        if name == "nonsmooth-saddle":
            for key in ("p", "q"):
                if key in values:
                    kwargs[key] = values[key]
        if name == "fermat-torricelli":
            if "n" in values:
                kwargs["n"] = (values["n"][0],)
            if "m" in values:
                kwargs["m"] = values["m"]
            if "N" in values:
                kwargs["big_n"] = values["N"]
        try:
            configs[name] = bench.desk_config(name, **kwargs)
        except ValueError as exc:
            errors.append(f"experiment {name}: {exc}")
    if errors:
        return None, errors
    meta = {
        "configs": configs,
        "out": values.get("out"),
        "format": values.get("format"),
        "jobs": values.get("jobs"),
    }
    return meta, errors


def validate_config(path):
    """Load and normalize a config file; returns (meta, errors)."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        return None, [f"cannot read config: {exc}"]
    pairs, errors = parse_config_text(text)
    if errors:
        return None, errors
    return normalized_config(pairs)


def config_echo(cfg: bench.ExperimentConfig) -> str:
    """Round-trip-stable textual form of one normalized config."""
    lines = [
        f"experiment = {cfg.experiment}",
        "eps = " + ",".join(report.fmt_float(e) for e in cfg.eps),
        f"seed = {cfg.seed}",
        f"trials = {cfg.trials}",
        f"search_factor = {report.fmt_float(cfg.search_factor)}",
        f"m_init = {'auto' if cfg.m_init is None else report.fmt_float(cfg.m_init)}",
        f"max_outer = {cfg.max_outer}",
    ]
    if cfg.experiment == "exp-operator":
        lines.append("n = " + ",".join(str(v) for v in cfg.n))
    elif cfg.experiment == "nonsmooth-saddle":
        lines.append(f"p = {cfg.p}")
        lines.append(f"q = {cfg.q}")
    else:
        lines.append(f"n = {cfg.n[0]}")
        lines.append(f"m = {cfg.m}")
        lines.append(f"N = {cfg.big_n}")
        lines.append(f"lambda_radius = {report.fmt_float(cfg.lambda_radius)}")
        lines.append(f"x_radius = {report.fmt_float(cfg.x_radius)}")
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_instance_flags(parser):
    parser.add_argument("--experiment", help="experiment name(s), comma separated, or 'all'")
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--eps", help="comma-separated accuracy list")
    parser.add_argument("--seed", type=int, help="64-bit master seed")
    parser.add_argument("--trials", type=int, help="independent data draws per cell")
    parser.add_argument("--search-factor", type=float, dest="search_factor")
    parser.add_argument("--m-init", dest="m_init", help="initial curvature guess or 'auto'")
    parser.add_argument("--max-outer", type=int, dest="max_outer")
    parser.add_argument("--n", help="dimension list for exp-operator / n for fermat-torricelli")
    parser.add_argument("--p", type=int)
    parser.add_argument("--q", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--N", type=int, dest="big_n")
    parser.add_argument("--lambda-radius", type=float, dest="lambda_radius")
    parser.add_argument("--x-radius", type=float, dest="x_radius")


def build_parser():
    parser = _Parser(prog="vi-solve", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p_bench = sub.add_parser("bench", help="run experiment grids and write reports")
    _add_instance_flags(p_bench)
    p_bench.add_argument("--out", help="output directory")
    p_bench.add_argument("--format", help="comma subset of csv,json,svg (default csv,json)")
    p_bench.add_argument("--jobs", type=int, help="worker threads for independent cells")
    p_bench.add_argument("-v", "--verbose", action="count", default=0)

    p_solve = sub.add_parser("solve", help="solve a single instance and print the outcome")
    _add_instance_flags(p_solve)
    p_solve.add_argument("-v", "--verbose", action="count", default=0)

    p_check = sub.add_parser("check", help="run the sampled invariant suites")
    p_check.add_argument("--seed", type=int, default=0)
    return parser


def _flag_pairs(args):
    """Flag values in config-key form, skipping unset ones."""
    mapping = {
        "experiment": args.experiment,
        "eps": args.eps,
        "seed": args.seed,
        "trials": args.trials,
        "search_factor": args.search_factor,
        "m_init": args.m_init,
        "max_outer": args.max_outer,
        "n": args.n,
        "p": args.p,
        "q": args.q,
        "m": args.m,
        "N": args.big_n,
        "lambda_radius": args.lambda_radius,
        "x_radius": args.x_radius,
        "out": getattr(args, "out", None),
        "format": getattr(args, "format", None),
        "jobs": getattr(args, "jobs", None),
    }
    return {key: str(val) for key, val in mapping.items() if val is not None}


def _resolve_manifest(args):
    pairs = {}
    if args.config:
        meta, errors = validate_config(args.config)
        if errors:
            raise UsageError("; ".join(errors))
        with open(args.config) as fh:
            pairs, _ = parse_config_text(fh.read())
    pairs.update(_flag_pairs(args))
    if "experiment" not in pairs:
        pairs["experiment"] = "all"
    if "seed" not in pairs and os.environ.get("VI_SOLVE_SEED"):
        pairs["seed"] = os.environ["VI_SOLVE_SEED"]
    meta, errors = normalized_config(pairs)
    if errors:
        raise UsageError("; ".join(errors))
    formats = tuple(
        fmt.strip() for fmt in (meta["format"] or "csv,json").split(",") if fmt.strip()
    )
    return RunManifest(
        experiments=list(meta["configs"]),
        out_dir=meta["out"] or ".",
        formats=formats,
        jobs=meta["jobs"] or 1,
        verbose=getattr(args, "verbose", 0),
        configs=meta["configs"],
    )


def cmd_bench(args):
    manifest = _resolve_manifest(args)
    try:
        os.makedirs(manifest.out_dir, exist_ok=True)
        probe = os.path.join(manifest.out_dir, ".write-probe")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as exc:
        print(f"error: output directory not writable: {exc}", file=sys.stderr)
        return 1

    any_flagged = False
    for name in manifest.experiments:
        cfg = manifest.configs[name]
        if manifest.verbose:
            print(f"running {name}: dims {cfg.dimension_matrix()} eps {list(cfg.eps)}")
        rows = bench.run_experiment(cfg, jobs=manifest.jobs)
        any_flagged |= any(not r.converged for r in rows)
        if "csv" in manifest.formats:
            report.write_csv(os.path.join(manifest.out_dir, f"{name}.csv"), rows)
        if "json" in manifest.formats:
            summary = report.summarize(rows)
            report.write_json(os.path.join(manifest.out_dir, f"{name}_summary.json"), summary)
        if "svg" in manifest.formats:
            report.write_plots(manifest.out_dir, name, rows)
        if manifest.verbose:
            for r in rows:
                print(
                    f"  {name} dims=({r.dim_a},{r.dim_b},{r.dim_c}) eps={r.eps:g} "
                    f"trial={r.trial}: iters={r.iterations} gap={r.final_gap:.3e} "
                    f"converged={r.converged}"
                )
    return 2 if any_flagged else 0


def cmd_solve(args):
    manifest = _resolve_manifest(args)
    exit_code = 0
    for name in manifest.experiments:
        cfg = manifest.configs[name]
        dims = cfg.dimension_matrix()[0]
        eps = cfg.eps[0]
        row = bench.run_cell(cfg, dims, eps, trial=0)
        print(
            f"{name}: dims=({row.dim_a},{row.dim_b},{row.dim_c}) eps={row.eps:g} "
            f"iterations={row.iterations} oracle_calls={row.oracle_calls} "
            f"gap={row.final_gap:.6e} converged={row.converged} "
            f"wall={row.wall_time_s:.3f}s"
        )
        if not row.converged:
            exit_code = 2
    return exit_code


def cmd_check(args):
    results = checks.run_all(seed=args.seed)
    failed = False
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed |= not ok
    return 2 if failed else 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "bench":
            return cmd_bench(args)
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "check":
            return cmd_check(args)
        parser.print_usage(sys.stderr)
        return 1
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
