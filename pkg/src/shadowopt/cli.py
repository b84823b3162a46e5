"""Command-line entry point: `run` experiments, `verify` invariants, `plot` CSVs.

A JSON config file may supply any `run` option under its flag name
(underscored, e.g. {"optimizer": "ssd", "lr": 0.05}); explicit command-line
flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import ExperimentConfig, train_classifier
from .svgplot import render_loss_svg
from .verify import cli_verify

RUN_DEFAULTS = {
    "optimizer": None,  # required
    "dataset": "synthetic",
    "ansatz": "basic",
    "layers": 1,
    "qubits": 4,
    "lr": 0.1,
    "mu": None,
    "shots": "exact",
    "iters": 100,
    "seed": 0,
    "batch": 1,
    "data_seed": 0,
    "out": None,
    "timing": False,
}


def _parse_shots(text) -> int | None:
    if text is None or text == "exact":
        return None
    try:
        shots = int(text)
    except (TypeError, ValueError):
        shots = 0
    if shots < 1:
        raise SystemExit(f"shots must be a positive count or 'exact', got {text!r}")
    return shots


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shadowopt",
        description="Directional-derivative circuit experiments and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train a classifier and emit metrics")
    run.add_argument("--config", help="JSON file with defaults for any flag below")
    run.add_argument(
        "--optimizer", choices=["ssd", "ssd-fused", "sgd", "rsgf", "spsa"]
    )
    run.add_argument("--dataset", help="iris | synthetic | csv:<path>")
    run.add_argument("--ansatz", choices=["basic", "strongly"])
    run.add_argument("--layers", type=int)
    run.add_argument("--qubits", type=int)
    run.add_argument("--lr", type=float)
    run.add_argument("--mu", type=float, help="perturbation scale (rsgf/spsa)")
    run.add_argument("--shots", help="positive count or 'exact'")
    run.add_argument("--iters", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--batch", type=int)
    run.add_argument("--data-seed", dest="data_seed", type=int)
    run.add_argument("--out", help="metrics CSV path")
    run.add_argument(
        "--timing",
        action="store_const",
        const=True,
        help="record real wall-clock ms (off by default to keep output byte-stable)",
    )

    sub.add_parser("verify", help="run the invariant suites, exit 0 iff all pass")

    plot = sub.add_parser("plot", help="render metrics CSVs as an SVG chart")
    plot.add_argument("--x", choices=["iterations", "executions"], default="iterations")
    plot.add_argument("--out", required=True, help="output SVG path")
    plot.add_argument("csvs", nargs="+", help="metrics CSV files")

    return parser


def _merge_run_options(args: argparse.Namespace) -> dict:
    merged = dict(RUN_DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        unknown = sorted(set(doc) - set(RUN_DEFAULTS))
        if unknown:
            raise SystemExit(f"config file has unknown keys: {', '.join(unknown)}")
        merged.update(doc)
    for key in RUN_DEFAULTS:
        value = getattr(args, key)
        if value is not None:
            merged[key] = value
    if merged["optimizer"] is None:
        raise SystemExit("--optimizer is required (flag or config file)")
    merged["shots"] = _parse_shots(merged["shots"])
    merged["timing"] = bool(merged["timing"])
    return merged


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cli_verify()
    if args.command == "plot":
        render_loss_svg(args.csvs, args.x, args.out)
        print(f"wrote {args.out}")
        return 0
    options = _merge_run_options(args)
    try:
        config = ExperimentConfig(**options)
    except ValueError as exc:
        raise SystemExit(str(exc))
    rows = train_classifier(config)
    last = rows[-1]
    print(
        f"{config.optimizer}: {last.iteration} iterations, "
        f"final epoch loss {last.loss:.6f}, {last.executions} executions"
    )
    if config.out:
        print(f"wrote {config.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
