"""Command-line experiment runner.

    qghnn run <config> [--out DIR] [--threshold T]
    qghnn spectrum <config>
    qghnn sweep <config> --param {layers,learning_rate,noise.p} --values 1,2,3

``<config>`` is a JSON file or the name of a bundled config (exp01..exp03).
Exit status: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

from .errors import NumericalFailureError, QGHNNError
from .experiment import (
    SWEEP_PARAMS,
    load_config,
    run_experiment,
    spectrum_summary,
    sweep_row,
    with_override,
    write_outputs,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("qghnn")


def _apply_overrides(cfg, args):
    if getattr(args, "threshold", None) is not None:
        cfg.threshold = args.threshold
    if getattr(args, "log_every", None) is not None:
        cfg.train = replace(cfg.train, log_every=args.log_every)
    return cfg


def _out_dir(cfg, args) -> Path:
    if args.out:
        return Path(args.out)
    if cfg.output_dir:
        return Path(cfg.output_dir)
    return Path("runs") / cfg.name


def cmd_run(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    t0 = time.perf_counter()
    result = run_experiment(cfg)
    out = write_outputs(result, _out_dir(cfg, args))
    best = result.best
    log.info(
        "%s: final loss %.6f (ground %.6f), best readout %s/%s mse=%.4f in %.1fs -> %s",
        cfg.name, result.report.final_loss, result.report.ground_energy,
        best["method"], best["variant"], best["mse"], time.perf_counter() - t0, out,
    )
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    print(json.dumps(spectrum_summary(cfg), indent=2))
    return EXIT_OK


def _parse_values(text: str) -> list[float]:
    values = [v.strip() for v in text.split(",") if v.strip()]
    if not values:
        raise QGHNNError("--values needs at least one value")
    try:
        return [float(v) for v in values]
    except ValueError:
        raise QGHNNError(f"--values must be numbers, got {text!r}") from None


def cmd_sweep(args) -> int:
    if args.param not in SWEEP_PARAMS:
        raise QGHNNError(f"cannot sweep {args.param!r}; choose from {', '.join(SWEEP_PARAMS)}")
    values = _parse_values(args.values)
    base = _apply_overrides(load_config(args.config), args)
    root = _out_dir(base, args)
    rows = []
    for value in values:
        label = int(value) if args.param == "layers" else value
        cfg = with_override(base, args.param, value)
        cfg.threshold = base.threshold
        cfg.name = f"{base.name}[{args.param}={label}]"
        result = run_experiment(cfg)
        write_outputs(result, root / f"{args.param}={label}")
        rows.append(sweep_row(args.param, label, result))
    root.mkdir(parents=True, exist_ok=True)
    with open(root / "sweep.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["run_id", *rows[0]], lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({"run_id": base.name, **{k: "" if v is None else v for k, v in row.items()}})
    _soft_depth_check(args.param, rows)
    return EXIT_OK


def _soft_depth_check(param: str, rows: list[dict]) -> None:
    if param != "layers" or len(rows) < 2:
        return
    losses = [r["final_loss"] for r in rows]
    ok = sum(b <= a + 1e-9 for a, b in zip(losses, losses[1:]))
    log.info("depth sweep: final loss non-increasing in %d of %d adjacent comparisons", ok, len(losses) - 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qghnn", description=__doc__.split("\n\n")[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="only log warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="train on one experiment config and write results")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default: config output_dir or runs/<name>)")
    p.add_argument("--threshold", type=float, help="binarize decoded graphs at this value in metrics.csv")
    p.add_argument("--log-every", type=int, help="log the loss every N steps (0 disables)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("spectrum", help="print exact spectrum of the graph Hamiltonian")
    p.add_argument("config")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="repeat a run over values of one parameter")
    p.add_argument("config")
    p.add_argument("--param", required=True, help=f"one of {', '.join(SWEEP_PARAMS)}")
    p.add_argument("--values", required=True, help="comma-separated list")
    p.add_argument("--out")
    p.add_argument("--threshold", type=float)
    p.add_argument("--log-every", type=int)
    p.set_defaults(func=cmd_sweep)
    return parser


def _configure_logging(quiet: bool) -> None:
    level = logging.WARNING if quiet else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("qghnn")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_CONFIG
    _configure_logging(args.quiet)
    try:
        return args.func(args)
    except NumericalFailureError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except (QGHNNError, KeyError, TypeError, ValueError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
