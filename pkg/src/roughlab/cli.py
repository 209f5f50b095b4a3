"""Batch experiment runner.

Usage:
    lab run <config.json>     execute one experiment described by a JSON file
    lab list                  show the registered experiments
    lab version               print the version string

A config file looks like
    {"experiment": "t2-finite-dim", "params": {"k": 3, "cases": 100},
     "seed": 7, "output": "out/t2", "threads": 4}
and produces <output>.report.csv plus <output>.meta.json.  Exit status: 0
when every asserted property holds, 1 on a property failure, 2 on a config
error, 3 on a numerical error.  Reports are byte-identical for identical
configs, including across different thread counts.
"""
from __future__ import annotations

import argparse
import csv
import difflib
import json
import math
import os
import subprocess
import sys
import time
from pathlib import Path

from . import __version__
from .errors import NumericalError
from .experiments import EXPERIMENTS


def version_string() -> str:
    """Package version, decorated with the repository state when available."""
    describe = None
    try:
        out = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0:
            describe = out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    base = f"roughlab {__version__}"
    return f"{base} ({describe})" if describe else base


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])


def _fail(message: str, code: int) -> int:
    print(f"lab: {message}", file=sys.stderr)
    return code


def _load_config(path: str):
    try:
        with open(path) as handle:
            config = json.load(handle)
    except OSError as exc:
        raise ValueError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise ValueError("config must be a JSON object")
    name = config.get("experiment")
    if not isinstance(name, str):
        raise ValueError("config needs an 'experiment' name")
    if name not in EXPERIMENTS:
        hint = difflib.get_close_matches(name, EXPERIMENTS.keys(), n=1)
        suffix = f"; did you mean {hint[0]!r}?" if hint else ""
        raise ValueError(f"unknown experiment {name!r}{suffix}")
    params = config.get("params", {})
    if not isinstance(params, dict):
        raise ValueError("'params' must be an object")
    seed = config.get("seed", 0)
    if not isinstance(seed, int):
        raise ValueError("'seed' must be an integer")
    threads = config.get("threads", os.cpu_count() or 1)
    env_threads = os.environ.get("LAB_THREADS")
    if env_threads is not None:
        try:
            threads = int(env_threads)
        except ValueError as exc:
            raise ValueError("LAB_THREADS must be an integer") from exc
    if not isinstance(threads, int) or threads < 1:
        raise ValueError("'threads' must be a positive integer")
    output = config.get("output", f"lab-{name}")
    if not isinstance(output, str) or not output:
        raise ValueError("'output' must be a nonempty path prefix")
    return config, name, params, seed, threads, output


def run_config(path: str) -> int:
    """Execute one experiment config; returns the process exit status."""
    try:
        config, name, params, seed, threads, output = _load_config(path)
    except ValueError as exc:
        return _fail(str(exc), 2)

    fn, _ = EXPERIMENTS[name]
    started = time.time()
    try:
        result = fn(params, seed, threads)
    except ValueError as exc:
        return _fail(f"invalid parameters: {exc}", 2)
    except NumericalError as exc:
        return _fail(f"numerical failure: {exc}", 3)
    elapsed = time.time() - started

    prefix = Path(output)
    if prefix.parent != Path("."):
        prefix.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(Path(f"{prefix}.report.csv"), result.columns, result.rows)
    for suffix, (columns, rows) in result.extra_files.items():
        _write_csv(Path(f"{prefix}.{suffix}.csv"), columns, rows)
    meta = {
        "config": config,
        "version": version_string(),
        "wall_time_seconds": elapsed,
        "all_hold": result.all_hold,
        "summary": result.summary,
    }
    with open(f"{prefix}.meta.json", "w") as handle:
        json.dump(meta, handle, indent=2, default=str)
        handle.write("\n")
    if not result.all_hold:
        return _fail(f"experiment {name!r} reported property failures", 1)
    return 0


def list_experiments() -> int:
    width = max(len(name) for name in EXPERIMENTS)
    for name, (_, description) in sorted(EXPERIMENTS.items()):
        print(f"{name:<{width}}  {description}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="lab", description="batch experiment runner")
    sub = parser.add_subparsers(dest="command")
    run_p = sub.add_parser("run", help="run an experiment from a JSON config")
    run_p.add_argument("config", help="path to the JSON config file")
    sub.add_parser("list", help="list registered experiments")
    sub.add_parser("version", help="print the version string")
    args = parser.parse_args(argv)
    if args.command == "run":
        return run_config(args.config)
    if args.command == "list":
        return list_experiments()
    if args.command == "version":
        print(version_string())
        return 0
    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
