"""Command-line front end: ``transfer-bai run|bounds|compare --config PATH``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import complexity
from .config import ConfigError, ExperimentConfig, load
from .sim import TrialBatchResult, run_batch
from .transfer import Linear, PropertySet

logger = logging.getLogger("transfer_bai")

OUT_ENV_VAR = "TRANSFER_BAI_OUT"
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def jsonable(obj):
    """Replace infinities with the ``"inf"``/``"-inf"`` literals and NaN with null."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def closed_form_bound(cfg: ExperimentConfig) -> complexity.NamedBound | None:
    inst, mu = cfg.instance, cfg.env.means
    kind = cfg.kind
    if kind == "bai":
        return complexity.bai_hardness(mu)
    if kind == "topk":
        return complexity.topk_hardness(mu, inst["k"])
    if kind == "thresholding":
        return complexity.thresholding_hardness(mu, float(inst["theta"]))
    if kind == "property_testing":
        sets = [PropertySet.parse(str(s)) for s in inst["property_sets"]]
        return complexity.property_testing_hardness(sets, mu)
    if kind in ("linear", "cpe"):
        matrix = [[c.coeff if isinstance(c, Linear) else 0.0 for c in row] for row in cfg.tf.components]
        return complexity.linear_hardness(matrix, mu, cfg.epsilon)
    return None


def bounds_report(cfg: ExperimentConfig, report: complexity.ComplexityReport | None = None) -> dict:
    if report is None:
        report = complexity.theorem2_bound(cfg.tf, cfg.env.means, cfg.epsilon, cfg.delta, cfg.sigma)
    named = closed_form_bound(cfg)
    out = report.to_dict()
    out["closed_form"] = named.to_dict() if named is not None else None
    out["target_labels"] = [cfg.tf.label(a) for a in range(cfg.tf.n_target)]
    return out


def csv_header(n_source: int) -> list[str]:
    return (
        ["trial_index", "seed", "selected", "correct", "rounds", "total_pulls"]
        + [f"pulls_{i + 1}" for i in range(n_source)]
        + ["good_event_held", "bound_held"]
    )


def write_trials_csv(path: Path, batch: TrialBatchResult, cfg: ExperimentConfig) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(csv_header(cfg.tf.n_source))
        for r in batch.trials:
            selected = "" if r.selected < 0 else cfg.tf.label(r.selected)
            writer.writerow(
                [r.trial_index, r.seed, selected, int(r.correct), r.rounds, r.total_pulls]
                + r.per_arm_pulls
                + [int(r.good_event_held), int(r.bound_held)]
            )


def output_dir(args, cfg: ExperimentConfig) -> Path:
    chosen = args.out or cfg.output_dir or os.environ.get(OUT_ENV_VAR) or "results"
    path = Path(chosen)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_run(args, cfg: ExperimentConfig) -> int:
    report = complexity.theorem2_bound(cfg.tf, cfg.env.means, cfg.epsilon, cfg.delta, cfg.sigma)
    bounds = bounds_report(cfg, report)
    batch = run_batch(cfg.build_instance(), cfg.algorithm, cfg.n_trials, cfg.base_seed, cfg.parallelism, report)
    summary = batch.summary()
    summary["theorem2_total"] = report.theorem2_total
    summary["complexity"] = bounds
    summary["config"] = cfg.to_dict()
    out = output_dir(args, cfg)
    (out / "summary.json").write_text(dump_json(summary))
    write_trials_csv(out / "trials.csv", batch, cfg)
    print(
        f"{cfg.algorithm}: {batch.n_trials} trials, error_rate={batch.error_rate:.4f}, "
        f"mean_total_pulls={batch.mean_total_pulls:.1f}, theorem2_total={report.theorem2_total}; wrote {out}"
    )
    return 0


def cmd_bounds(args, cfg: ExperimentConfig) -> int:
    sys.stdout.write(dump_json(bounds_report(cfg)))
    return 0


COMPARE_COLUMNS = [
    "algorithm",
    "base_seed",
    "n_trials",
    "error_rate",
    "mean_total_pulls",
    "median_total_pulls",
    "p95_total_pulls",
    "good_event_violations",
    "empty_dtilde_count",
    "capped_count",
]


def cmd_compare(args, cfg: ExperimentConfig) -> int:
    report = complexity.theorem2_bound(cfg.tf, cfg.env.means, cfg.epsilon, cfg.delta, cfg.sigma)
    instance = cfg.build_instance()
    rows = []
    for algorithm in ("tlucb", "microlucb"):
        batch = run_batch(instance, algorithm, cfg.n_trials, cfg.base_seed, cfg.parallelism, report)
        summary = batch.summary()
        rows.append([summary[c] for c in COMPARE_COLUMNS])
    out = output_dir(args, cfg)
    with open(out / "compare.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COMPARE_COLUMNS)
        writer.writerows(rows)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(COMPARE_COLUMNS)
    writer.writerows(rows)
    return 0


COMMANDS = {"run": cmd_run, "bounds": cmd_bounds, "compare": cmd_compare}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="transfer-bai", description="Best-arm identification under additive transfer.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run a Monte Carlo batch and write summary.json and trials.csv"),
        ("bounds", "print sample-complexity bounds without running trials"),
        ("compare", "run T-LUCB and Micro-LUCB on the same seeds"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="TOML experiment config")
        p.add_argument("--seed-override", type=int, help="replace base_seed")
        p.add_argument("--trials", type=int, help="replace n_trials")
        p.add_argument("--parallelism", type=int, help="replace parallelism")
        p.add_argument("--out", help=f"output directory (default: config, then ${OUT_ENV_VAR}, then ./results)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load(args.config)
        problems = []
        if args.trials is not None and args.trials < 1:
            problems.append(f"--trials: must be >= 1, got {args.trials}")
        if args.parallelism is not None and args.parallelism < 1:
            problems.append(f"--parallelism: must be >= 1, got {args.parallelism}")
        if args.seed_override is not None and not 0 <= args.seed_override < 2**64:
            problems.append("--seed-override: must be a 64-bit unsigned integer")
        if problems:
            raise ConfigError(problems)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    cfg = cfg.with_overrides(base_seed=args.seed_override, n_trials=args.trials, parallelism=args.parallelism)
    try:
        return COMMANDS[args.command](args, cfg)
    except Exception as exc:  # noqa: BLE001 - any fault past validation is a runtime fault
        logger.exception("runtime fault")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
