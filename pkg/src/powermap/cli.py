"""Command-line surface: learn, brute-force, predict, evaluate.

Data goes to files (or JSON on stdout for evaluate); progress and notices go
to stderr. Exit codes: 0 success, 2 validation, 3 runtime/numerical, 4 I/O.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

from . import ga as ga_mod
from . import io as io_mod
from .evaluate import (
    DEFAULT_GRID_BUDGET,
    GridBudgetError,
    brute_force_manifold,
    evaluate as evaluate_dictionaries,
)
from .config import (
    ConfigError,
    RunConfig,
    build_run_config,
    resolved_config_dict,
)
from .grid import GridError
from .knn import DictionaryIndex, NeighborQuery, QueryError
from .oracle import OracleError
from .special import NumericalError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3
EXIT_IO = 4


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def _warn_dropped_remainders(config: RunConfig) -> None:
    names = [f"theta_{j + 1}" for j in range(config.space.n_coefficients)] + ["n"]
    for name, r in zip(names, config.space.ranges):
        top = r.top_value
        if top < r.upper - 1e-12 * max(1.0, abs(r.upper)):
            _note(
                f"note: {name} grid tops out at {top:g} "
                f"(upper bound {r.upper:g} is not reachable with step {r.step:g})"
            )


def _apply_overrides(data: dict, args: argparse.Namespace) -> dict:
    """Flag overrides onto the raw config dict; flags win over the file."""
    def setpath(path: tuple[str, ...], value) -> None:
        target = data
        for key in path[:-1]:
            target = target.setdefault(key, {})
        target[path[-1]] = value

    mapping = [
        ("master_seed", ("master_seed",)),
        ("oracle_seed", ("oracle_seed",)),
        ("workers", ("worker_count",)),
        ("nsim", ("oracle", "nsim")),
        ("alpha", ("oracle", "alpha")),
        ("population_size", ("ga", "population_size")),
        ("iterations", ("ga", "iterations")),
        ("k", ("predictor", "k")),
        ("metric", ("predictor", "metric")),
        ("out_dir", ("output", "directory")),
        ("prefix", ("output", "prefix")),
    ]
    for attr, path in mapping:
        value = getattr(args, attr, None)
        if value is not None:
            setpath(path, value)
    return data


def _load_config(args: argparse.Namespace) -> RunConfig:
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config}: not valid JSON: {exc}") from None
    return build_run_config(_apply_overrides(data, args))


def _out_paths(config: RunConfig) -> tuple[Path, Path, Path]:
    directory = Path(config.output.directory)
    directory.mkdir(parents=True, exist_ok=True)
    base = directory / config.output.prefix
    return (
        base.with_name(base.name + "_dictionary.csv"),
        base.with_name(base.name + "_dictionary.json"),
        base.with_name(base.name + "_report.json"),
    )


def _export_run(
    config: RunConfig,
    dictionary: ga_mod.PowerDictionary,
    metadata: dict,
    report: ga_mod.GaReport | None,
) -> None:
    csv_path, json_path, report_path = _out_paths(config)
    io_mod.export_dictionary_csv(csv_path, dictionary, config.space)
    io_mod.export_dictionary_json(json_path, dictionary, config.space, metadata)
    _note(f"wrote {csv_path} and {json_path} ({len(dictionary)} entries)")
    if report is not None:
        payload = {
            "oracle_queries": report.oracle_queries,
            "elapsed_seconds": report.elapsed_seconds,
            "worker_count": config.worker_count,
            "per_iteration": [dataclasses.asdict(s) for s in report.per_iteration],
            "config": metadata["config"],
        }
        with open(report_path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        _note(f"wrote {report_path}")


def cmd_learn(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if config.ga is None:
        raise ConfigError("ga: required section is missing for the learn command")
    _warn_dropped_remainders(config)
    report = ga_mod.run(
        config.space,
        config.oracle,
        config.ga,
        oracle_seed=config.resolved_oracle_seed,
        worker_count=config.worker_count,
    )
    metadata = {
        "command": "learn",
        "oracle_queries": report.oracle_queries,
        "config": resolved_config_dict(config),
    }
    _export_run(config, report.dictionary, metadata, report)
    _note(
        f"oracle queries: {report.oracle_queries} "
        f"(grid size {config.space.grid_size}), "
        f"elapsed: {report.elapsed_seconds:.2f} s"
    )
    return EXIT_OK


def cmd_brute_force(args: argparse.Namespace) -> int:
    config = _load_config(args)
    _warn_dropped_remainders(config)
    started = time.perf_counter()
    dictionary = brute_force_manifold(
        config.space,
        config.oracle,
        config.resolved_oracle_seed,
        worker_count=config.worker_count,
        grid_budget=args.grid_budget,
    )
    elapsed = time.perf_counter() - started
    metadata = {
        "command": "brute-force",
        "oracle_queries": len(dictionary),
        "config": resolved_config_dict(config),
    }
    _export_run(config, dictionary, metadata, None)
    _note(f"oracle queries: {len(dictionary)}, elapsed: {elapsed:.2f} s")
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    dictionary, space, _ = io_mod.load_dictionary_json(args.dictionary)
    k, metric = 5, "normalized_euclidean"
    if args.config is not None:
        config = _load_config(args)
        k, metric = config.predictor.k, config.predictor.metric
    if args.k is not None:
        k = args.k
    if args.metric is not None:
        metric = args.metric
    _, points = io_mod.load_queries_csv(args.queries, space)
    if points:
        index = DictionaryIndex(dictionary, space)
        predictions = []
        for point in points:
            neighbors = index.nearest(NeighborQuery(point=point, k=k, metric=metric))
            predictions.append(sum(nb.power for nb in neighbors) / len(neighbors))
    else:
        predictions = []
    io_mod.write_predictions_csv(args.out, space, points, predictions)
    _note(f"wrote {args.out} ({len(points)} predictions, k={k}, metric={metric})")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    ga_dict, ga_space, ga_meta = io_mod.load_dictionary_json(args.ga)
    brute_dict, brute_space, _ = io_mod.load_dictionary_json(args.brute)
    if ga_space != brute_space:
        raise ConfigError(
            "search spaces of the two exports differ; "
            "the comparison requires a shared grid"
        )
    k = 5
    if args.config is not None:
        k = _load_config(args).predictor.k
    if args.k is not None:
        k = args.k
    queries = int(ga_meta.get("oracle_queries", len(ga_dict)))
    report = ga_mod.GaReport(
        dictionary=ga_dict,
        oracle_queries=queries,
        per_iteration=[],
        elapsed_seconds=0.0,
    )
    result = evaluate_dictionaries(report, brute_dict, ga_space, k)
    payload = dataclasses.asdict(result)
    text = json.dumps(payload, indent=1)
    print(text)
    if args.out is not None:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        _note(f"wrote {args.out}")
    return EXIT_OK


def _add_config_flags(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("-c", "--config", required=required, help="run configuration JSON")
    parser.add_argument("--master-seed", dest="master_seed", type=int)
    parser.add_argument("--oracle-seed", dest="oracle_seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--nsim", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--out-dir", dest="out_dir")
    parser.add_argument("--prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powermap",
        description="Learn a statistical power surface with a genetic "
        "search over a parameter grid, then predict unseen points by "
        "k-nearest neighbors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_learn = sub.add_parser("learn", help="run the genetic search and export the dictionary")
    _add_config_flags(p_learn)
    p_learn.add_argument("--population-size", dest="population_size", type=int)
    p_learn.add_argument("--iterations", type=int)
    p_learn.set_defaults(func=cmd_learn)

    p_brute = sub.add_parser("brute-force", help="evaluate every grid point")
    _add_config_flags(p_brute)
    p_brute.add_argument(
        "--grid-budget",
        dest="grid_budget",
        type=int,
        default=DEFAULT_GRID_BUDGET,
        help="refuse grids larger than this many points",
    )
    p_brute.set_defaults(func=cmd_brute_force)

    p_pred = sub.add_parser("predict", help="k-NN predictions for a CSV of query points")
    p_pred.add_argument("-c", "--config", help="optional run configuration JSON")
    p_pred.add_argument("--dictionary", required=True, help="dictionary JSON export")
    p_pred.add_argument("--queries", required=True, help="CSV of query points")
    p_pred.add_argument("--out", required=True, help="output CSV path")
    p_pred.add_argument("--k", type=int)
    p_pred.add_argument("--metric", choices=["normalized_euclidean", "raw_euclidean"])
    p_pred.set_defaults(func=cmd_predict)

    p_eval = sub.add_parser(
        "evaluate", help="RMSE of a learned dictionary against a brute-force export"
    )
    p_eval.add_argument("-c", "--config", help="optional run configuration JSON")
    p_eval.add_argument("--ga", required=True, help="learned dictionary JSON export")
    p_eval.add_argument("--brute", required=True, help="brute-force dictionary JSON export")
    p_eval.add_argument("--out", help="also write the report JSON here")
    p_eval.add_argument("--k", type=int)
    p_eval.set_defaults(func=cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ConfigError,
        io_mod.FormatError,
        GridError,
        QueryError,
        GridBudgetError,  # guard rail trips before any compute
        ValueError,
    ) as exc:
        _note(f"error: {exc}")
        return EXIT_VALIDATION
    except (OracleError, NumericalError) as exc:
        _note(f"error: {exc}")
        return EXIT_RUNTIME
    except OSError as exc:
        _note(f"error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
