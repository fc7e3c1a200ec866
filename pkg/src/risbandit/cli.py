"""Command-line entry points.

    risbandit run --out DIR [--config FILE] [--seed N]
    risbandit sweep --dimension power|elements --values 10,20,... --out DIR
    risbandit baseline --agent random|ucb|oracle --out DIR
    risbandit check-gradients [--trials N]

`--out` falls back to the RISBANDIT_OUT environment variable.
Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

OUT_ENV_VAR = "RISBANDIT_OUT"

import numpy as np

from .artifacts import write_result_bundle
from .config import config_from_document, parse_config
from .harness import ExperimentConfig, run_experiment, sweep
from .mlp import LayerSpec, backward_scalar_target, forward, init_network

SWEEP_DIMENSIONS = {"power": "power_dbm", "elements": "n_tot"}


def _load_config(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        ec = parse_config(args.config)
    else:
        ec = config_from_document({})
    if getattr(args, "seed", None) is not None:
        ec = replace(ec, seeds=(args.seed,))
    return ec


def _resolve_out(args) -> Path:
    out = args.out or os.environ.get(OUT_ENV_VAR)
    if not out:
        raise UsageError(f"--out required (or set {OUT_ENV_VAR})")
    return Path(out)


class UsageError(Exception):
    pass


def _report(result, summary_path: Path) -> None:
    norm = result.normalized_avg
    norm_txt = f"{norm:.3f}" if norm is not None else "n/a"
    print(
        f"{result.agent_kind}: eval mean {result.eval_mean_avg:.4f} bits/s/Hz, "
        f"normalized {norm_txt}, random baseline {result.random_mean:.4f} "
        f"-> {summary_path}"
    )


def _cmd_run(args) -> int:
    ec = _load_config(args)
    out = _resolve_out(args)
    result = run_experiment(ec)
    summary_path = write_result_bundle(result, out)
    _report(result, summary_path)
    return 0


def _cmd_baseline(args) -> int:
    ec = replace(_load_config(args), agent_kind=args.agent)
    out = _resolve_out(args)
    result = run_experiment(ec)
    summary_path = write_result_bundle(result, out)
    _report(result, summary_path)
    return 0


def _cmd_sweep(args) -> int:
    ec = _load_config(args)
    out = _resolve_out(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        print(f"could not parse --values {args.values!r}", file=sys.stderr)
        return 2
    if not values:
        print("--values must list at least one number", file=sys.stderr)
        return 2
    dimension = SWEEP_DIMENSIONS[args.dimension]
    results = sweep(ec, dimension, values)
    points = []
    for value, result in zip(values, results):
        tag = f"{args.dimension}_{value:g}"
        summary_path = write_result_bundle(result, out / tag)
        _report(result, summary_path)
        points.append(
            {
                "value": value,
                "summary": f"{tag}/summary.json",
                "normalized_avg": result.normalized_avg,
                "eval_mean_avg": result.eval_mean_avg,
                "random_mean": result.random_mean,
                "oracle_mean": result.oracle_mean,
            }
        )
    sweep_doc = {
        "schema": "risbandit-sweep-v1",
        "dimension": args.dimension,
        "agent": ec.agent_kind,
        "points": points,
    }
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep_summary.json", "w", newline="\n") as fh:
        json.dump(sweep_doc, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"sweep summary -> {out / 'sweep_summary.json'}")
    return 0


def _cmd_check_gradients(args) -> int:
    """Compare backprop to central finite differences on random nets."""
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    h = 1e-5
    worst = 0.0
    for _ in range(args.trials):
        n_layers = int(rng.integers(1, 4))
        sizes = tuple(int(rng.integers(2, 17)) for _ in range(n_layers + 1))
        net = init_network(LayerSpec(sizes=sizes, dropout_p=0.0), rng)
        x = rng.standard_normal(sizes[0])
        idx = int(rng.integers(sizes[-1]))
        target = float(rng.standard_normal())
        _, trace = forward(net, x, train_mode=True)
        grads = backward_scalar_target(trace, net, idx, target)

        def loss() -> float:
            out, _ = forward(net, x)
            return (target - out[idx]) ** 2

        for arrays, g_arrays in (
            (net.weights, grads.weights),
            (net.biases, grads.biases),
        ):
            for arr, g_arr in zip(arrays, g_arrays):
                flat, g_flat = arr.ravel(), g_arr.ravel()
                for j in range(flat.size):
                    orig = flat[j]
                    flat[j] = orig + h
                    up = loss()
                    flat[j] = orig - h
                    down = loss()
                    flat[j] = orig
                    fd = (up - down) / (2 * h)
                    rel = abs(fd - g_flat[j]) / max(abs(fd), abs(g_flat[j]), 1e-8)
                    worst = max(worst, rel)
    print(f"checked {args.trials} random networks, max relative error {worst:.3e}")
    if worst > args.tolerance:
        print(f"FAIL: exceeds tolerance {args.tolerance:g}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risbandit",
        description=(
            "Train and evaluate precoder/RIS-configuration policies on a "
            "simulated Ricean MISO downlink."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="train and evaluate the configured agent")
    run_p.add_argument("--config", help="JSON config file (defaults used if omitted)")
    run_p.add_argument("--out", help=f"output directory (default: ${OUT_ENV_VAR})")
    run_p.add_argument("--seed", type=int, help="override the config's seed list")
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="repeat a run along one system axis")
    sweep_p.add_argument(
        "--dimension", required=True, choices=sorted(SWEEP_DIMENSIONS)
    )
    sweep_p.add_argument(
        "--values", required=True, help="comma-separated values, e.g. 10,20,30,40,50"
    )
    sweep_p.add_argument("--config", help="JSON config file")
    sweep_p.add_argument("--out", help=f"output directory (default: ${OUT_ENV_VAR})")
    sweep_p.add_argument("--seed", type=int, help="override the config's seed list")
    sweep_p.set_defaults(func=_cmd_sweep)

    base_p = sub.add_parser("baseline", help="run a non-learning baseline policy")
    base_p.add_argument(
        "--agent", required=True, choices=("random", "ucb", "oracle")
    )
    base_p.add_argument("--config", help="JSON config file")
    base_p.add_argument("--out", help=f"output directory (default: ${OUT_ENV_VAR})")
    base_p.add_argument("--seed", type=int, help="override the config's seed list")
    base_p.set_defaults(func=_cmd_baseline)

    grad_p = sub.add_parser(
        "check-gradients",
        help="verify backprop against central finite differences",
    )
    grad_p.add_argument("--trials", type=int, default=100)
    grad_p.add_argument("--tolerance", type=float, default=1e-4)
    grad_p.add_argument("--seed", type=int, default=None)
    grad_p.set_defaults(func=_cmd_check_gradients)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
