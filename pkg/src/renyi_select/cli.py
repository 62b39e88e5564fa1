"""Command-line front end.

Subcommands:
    select   run greedy selection with a stopping criterion, emit a JSON report
    curves   run exhaustive selection and emit a TSV of MI/CMI per step
    compare  run all criteria on one or more datasets, rank them, and test
             rank differences with the Wilcoxon rank-sum test

All randomness is controlled by --seed; two invocations with identical
flags produce byte-identical reports apart from the "timings" field.
Exit codes: 0 success, 1 data/computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .data import Dataset, load_csv, subsample
from .errors import RenyiSelectError
from .evaluation import (
    RankTable,
    bootstrap_accuracy,
    optimal_feature_count,
    rank_criteria,
    wilcoxon_rank_sum,
)
from .selection import CRITERIA, SelectionConfig, SelectionTrace, greedy_select

SCHEMA_VERSION = 1
COMPARED_CRITERIA = ("cmi-heuristic", "cmi-permutation", "mi-permutation", "dmi-chi2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi-select",
        description="Greedy feature selection driven by kernel-spectrum "
        "mutual information, with principled stopping criteria.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, multi_input=False):
        if multi_input:
            p.add_argument("--input", action="append", required=True,
                           help="input CSV (repeatable)")
        else:
            p.add_argument("--input", help="input CSV")
        p.add_argument("--label", default=None,
                       help="label column name or 0-based index (default: last column)")
        p.add_argument("--alpha", type=float, default=1.01,
                       help="entropy order (default 1.01)")
        p.add_argument("--epsilon", type=float, default=1e-4,
                       help="residual-CMI stopping threshold (default 1e-4)")
        p.add_argument("--permutations", type=int, default=100,
                       help="permutation count P (default 100)")
        p.add_argument("--theta", type=float, default=0.95,
                       help="confidence level of the permutation/chi-square tests")
        p.add_argument("--chi2-bins", type=int, default=5,
                       help="equal-frequency bins for the chi-square rule (default 5)")
        p.add_argument("--seed", type=int, default=0, help="master RNG seed")
        p.add_argument("--max-samples", type=int, default=1000,
                       help="stratified subsample cap, 0 disables (default 1000)")
        p.add_argument("--max-features", type=int, default=None,
                       help="cap on the number of selected features")
        p.add_argument("--runs", type=int, default=100,
                       help="bootstrap runs (default 100)")
        p.add_argument("--output", default=None, help="output file (default stdout)")

    p_select = sub.add_parser("select", help="greedy selection with a stopping criterion")
    add_common(p_select)
    p_select.add_argument("--criterion", choices=CRITERIA, default=None,
                          help="stopping criterion")
    p_select.add_argument("--bootstrap", action="store_true",
                          help="bootstrap-evaluate the selected subset")
    p_select.add_argument("--replay", default=None, metavar="REPORT",
                          help="re-run from a previous JSON report and verify "
                          "the selected sequence is reproduced")

    p_curves = sub.add_parser("curves", help="exhaustive selection MI/CMI curve (TSV)")
    add_common(p_curves)
    p_curves.add_argument("--bootstrap", action="store_true",
                          help="add bootstrap accuracy columns per step")

    p_compare = sub.add_parser("compare", help="run and rank all stopping criteria")
    add_common(p_compare, multi_input=True)
    p_compare.add_argument("--significance", type=float, default=0.1,
                           help="rank-sum test level (default 0.1)")
    return parser


def _load_dataset(args, path: str) -> tuple[Dataset, dict]:
    d = load_csv(path, args.label)
    info = {"path": path, "rows": d.n, "features": d.F, "classes": d.C}
    if args.max_samples and args.max_samples > 0:
        d = subsample(d, args.max_samples, args.seed)
    info["rows_used"] = d.n
    return d, info


def _config_from_args(args, criterion: str) -> SelectionConfig:
    return SelectionConfig(
        criterion=criterion,
        alpha=args.alpha,
        epsilon=args.epsilon,
        permutations=args.permutations,
        theta=args.theta,
        chi2_bins=args.chi2_bins,
        seed=args.seed,
        max_features=args.max_features,
    )


def _config_echo(args, criterion: str | None) -> dict:
    return {
        "input": getattr(args, "input", None),
        "label": args.label,
        "criterion": criterion,
        "alpha": args.alpha,
        "epsilon": args.epsilon,
        "permutations": args.permutations,
        "theta": args.theta,
        "chi2_bins": args.chi2_bins,
        "seed": args.seed,
        "max_samples": args.max_samples,
        "max_features": args.max_features,
        "runs": args.runs,
    }


def _steps_payload(trace: SelectionTrace) -> list[dict]:
    return [
        {
            "step": i + 1,
            "index": s.index,
            "name": s.name,
            "mi_bits": s.mi,
            "cmi_bits": s.cmi,
            "statistic": s.statistic,
            "threshold": s.threshold,
            "detail": s.detail,
        }
        for i, s in enumerate(trace.steps)
    ]


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(report: dict, output: str | None) -> None:
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", output)


def run_select(args) -> int:
    if args.replay:
        return _run_replay(args)
    if not args.input:
        print("error: --input is required", file=sys.stderr)
        return 2
    if not args.criterion:
        print("error: --criterion is required", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    d, info = _load_dataset(args, args.input)
    t_load = time.perf_counter()
    config = _config_from_args(args, args.criterion)
    trace = greedy_select(d, config)
    t_select = time.perf_counter()
    boot = None
    if args.bootstrap and trace.steps:
        result = bootstrap_accuracy(d, trace.selected_indices, runs=args.runs, seed=args.seed)
        boot = {
            "runs": result.runs,
            "mean": result.mean,
            "ci_low": result.ci_low,
            "ci_high": result.ci_high,
            "n_features": result.n_features,
        }
    t_end = time.perf_counter()
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "select",
        "config": _config_echo(args, args.criterion),
        "dataset": info,
        "selected": {
            "indices": trace.selected_indices,
            "names": trace.selected_names,
        },
        "steps": _steps_payload(trace),
        "stop_reason": trace.stop_reason,
        "rejected_candidate": (
            None
            if trace.final_decision is None
            else {
                "index": trace.rejected_index,
                "statistic": trace.final_decision.statistic,
                "threshold": trace.final_decision.threshold,
                "detail": trace.final_decision.detail,
            }
        ),
        "full_mi_bits": trace.full_mi,
        "bootstrap": boot,
        "timings": {
            "load_s": t_load - t0,
            "select_s": t_select - t_load,
            "bootstrap_s": t_end - t_select,
            "total_s": t_end - t0,
        },
    }
    _emit_json(report, args.output)
    return 0


def _run_replay(args) -> int:
    with open(args.replay, encoding="utf-8") as fh:
        report = json.load(fh)
    cfg = report["config"]
    d = load_csv(cfg["input"], cfg["label"])
    if cfg.get("max_samples"):
        d = subsample(d, cfg["max_samples"], cfg["seed"])
    config = SelectionConfig(
        criterion=cfg["criterion"],
        alpha=cfg["alpha"],
        epsilon=cfg["epsilon"],
        permutations=cfg["permutations"],
        theta=cfg["theta"],
        chi2_bins=cfg["chi2_bins"],
        seed=cfg["seed"],
        max_features=cfg["max_features"],
    )
    trace = greedy_select(d, config)
    expected = report["selected"]["indices"]
    actual = trace.selected_indices
    if actual == expected:
        print(f"replay ok: {len(actual)} features reproduced")
        return 0
    print(f"replay mismatch: expected {expected}, got {actual}", file=sys.stderr)
    return 1


def run_curves(args) -> int:
    if not args.input:
        print("error: --input is required", file=sys.stderr)
        return 2
    d, _ = _load_dataset(args, args.input)
    config = _config_from_args(args, "none")
    trace = greedy_select(d, config)
    header = ["step", "feature", "mi_bits", "cmi_bits"]
    if args.bootstrap:
        header += ["acc_mean", "ci_low", "ci_high"]
    lines = ["\t".join(header)]
    for i, step in enumerate(trace.steps):
        row = [str(i + 1), step.name, repr(step.mi), repr(step.cmi)]
        if args.bootstrap:
            result = bootstrap_accuracy(
                d, trace.selected_indices[: i + 1], runs=args.runs, seed=args.seed
            )
            row += [repr(result.mean), repr(result.ci_low), repr(result.ci_high)]
        lines.append("\t".join(row))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def run_compare(args) -> int:
    t0 = time.perf_counter()
    table = RankTable(COMPARED_CRITERIA)
    datasets_payload = []
    for path in args.input:
        d, info = _load_dataset(args, path)
        order = greedy_select(d, _config_from_args(args, "none"))
        curve = [
            bootstrap_accuracy(d, order.selected_indices[: k + 1],
                               runs=args.runs, seed=args.seed)
            for k in range(len(order.steps))
        ]
        optimal = optimal_feature_count(curve, significance=0.05)
        counts, per_criterion = {}, {}
        for crit in COMPARED_CRITERIA:
            trace = greedy_select(d, _config_from_args(args, crit))
            count = len(trace.steps)
            counts[crit] = count
            if count:
                result = bootstrap_accuracy(d, trace.selected_indices,
                                            runs=args.runs, seed=args.seed)
                acc = {"mean": result.mean, "ci_low": result.ci_low,
                       "ci_high": result.ci_high}
            else:
                acc = None
            per_criterion[crit] = {
                "count": count,
                "accuracy": acc,
                "stop_reason": trace.stop_reason,
            }
        ranks = rank_criteria(counts, optimal)
        table.add_dataset(path, ranks)
        for crit in COMPARED_CRITERIA:
            per_criterion[crit]["rank"] = ranks[crit]
        datasets_payload.append({
            "dataset": info,
            "optimal": {
                "count": optimal,
                "accuracy_mean": curve[optimal - 1].mean,
            },
            "criteria": per_criterion,
        })
    tests = []
    for a in ("cmi-heuristic", "cmi-permutation"):
        for b in ("dmi-chi2", "mi-permutation"):
            p, reject = wilcoxon_rank_sum(
                table.ranks_of(a), table.ranks_of(b), significance=args.significance
            )
            tests.append({"a": a, "b": b, "p_value": p, "reject": int(reject)})
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "compare",
        "config": dict(_config_echo(args, None), significance=args.significance),
        "datasets": datasets_payload,
        "average_ranks": table.average_ranks(),
        "rank_sum_tests": tests,
        "timings": {"total_s": time.perf_counter() - t0},
    }
    _emit_json(report, args.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "select":
            return run_select(args)
        if args.command == "curves":
            return run_curves(args)
        if args.command == "compare":
            return run_compare(args)
    except RenyiSelectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
