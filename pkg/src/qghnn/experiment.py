"""Experiment configuration and the encode -> train -> decode -> score pipeline."""

from __future__ import annotations

import copy
import csv
import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from . import kernels
from .circuit import CircuitSpec, default_layout, run_circuit
from .errors import CapacityError, InvalidArgumentError
from .graph import (
    Graph,
    encode_to_amplitudes,
    make_benchmark_graph,
    make_complete_graph,
    normalize_adjacency,
    qubits_for_nodes,
)
from .noise import NoiseModel, noisy_losses
from .pauli import PauliOperator, build_mapping_hamiltonian, exact_spectrum
from .readout import METHODS, METRIC_NAMES, DecodedGraph, MetricReport, decode, metrics_csv, score
from .trainer import TrainConfig, TrainReport, prepare_hamiltonian, train

log = logging.getLogger(__name__)

BUNDLED = ("exp01", "exp02", "exp03")
DEFAULT_BINARIZE_AT = 0.5
DEFAULT_NOISE_TRIALS = 200


@dataclass
class ExperimentConfig:
    name: str
    graph: Graph
    graph_ref: str | dict
    n_qubits: int
    layers: int
    couplings: tuple[float, float, float] = (1.0, 1.0, 1.0)
    pair_sum: str = "ordered"
    block_order: str = "forward"
    initial_graph: str = "complete"
    train: TrainConfig = field(default_factory=TrainConfig)
    readout: tuple[str, ...] = METHODS
    threshold: float | None = None
    noise: NoiseModel | None = None
    noise_trials: int = DEFAULT_NOISE_TRIALS
    output_dir: str | None = None

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExperimentConfig":
        d = dict(d)
        try:
            graph_ref = d.pop("graph")
        except KeyError:
            raise InvalidArgumentError("config needs a 'graph' entry") from None
        if isinstance(graph_ref, str):
            graph = make_benchmark_graph(graph_ref)
        elif isinstance(graph_ref, dict):
            graph = Graph.from_dict(graph_ref)
        else:
            raise InvalidArgumentError("'graph' must be a benchmark id or an inline graph object")
        n_qubits = int(d.pop("n_qubits", qubits_for_nodes(graph.n)))
        if (1 << n_qubits) < graph.n**2:
            raise CapacityError(
                f"{n_qubits} qubits hold {1 << n_qubits} amplitudes, a {graph.n}-node graph needs {graph.n**2}"
            )
        noise = d.pop("noise", None)
        noise_trials = DEFAULT_NOISE_TRIALS
        if noise is not None:
            noise = dict(noise)
            noise_trials = int(noise.pop("trials", DEFAULT_NOISE_TRIALS))
            noise = NoiseModel.from_dict(noise)
        readout = tuple(d.pop("readout", METHODS))
        bad = set(readout) - set(METHODS)
        if bad or not readout:
            raise InvalidArgumentError(f"readout must be a non-empty subset of {METHODS}, got {readout}")
        couplings = tuple(float(x) for x in d.pop("couplings", (1.0, 1.0, 1.0)))
        if len(couplings) != 3:
            raise InvalidArgumentError("couplings must be [Jx, Jy, Jz]")
        initial = d.pop("initial_graph", "complete")
        if initial not in ("complete", "target"):
            raise InvalidArgumentError("initial_graph must be 'complete' or 'target'")
        threshold = d.pop("threshold", None)
        cfg = cls(
            name=str(d.pop("name", "experiment")),
            graph=graph,
            graph_ref=graph_ref,
            n_qubits=n_qubits,
            layers=int(d.pop("layers", 3)),
            couplings=couplings,
            pair_sum=d.pop("pair_sum", "ordered"),
            block_order=d.pop("block_order", "forward"),
            initial_graph=initial,
            train=TrainConfig.from_dict(d.pop("train", {})),
            readout=readout,
            threshold=None if threshold is None else float(threshold),
            noise=noise,
            noise_trials=noise_trials,
            output_dir=d.pop("output_dir", None),
        )
        if d:
            raise InvalidArgumentError(f"unknown config keys: {sorted(d)}")
        cfg.circuit_spec()  # validates layers / block order
        return cfg

    def to_dict(self) -> dict[str, Any]:
        out = {
            "name": self.name,
            "graph": self.graph_ref,
            "n_qubits": self.n_qubits,
            "layers": self.layers,
            "couplings": list(self.couplings),
            "pair_sum": self.pair_sum,
            "block_order": self.block_order,
            "initial_graph": self.initial_graph,
            "train": self.train.to_dict(),
            "readout": list(self.readout),
            "threshold": self.threshold,
        }
        if self.noise is not None:
            out["noise"] = {**self.noise.to_dict(), "trials": self.noise_trials}
        if self.output_dir is not None:
            out["output_dir"] = self.output_dir
        return out

    def circuit_spec(self) -> CircuitSpec:
        return default_layout(self.n_qubits, self.layers, self.block_order)

    def hamiltonian(self) -> PauliOperator:
        return build_mapping_hamiltonian(self.graph, self.couplings, self.n_qubits, self.pair_sum)

    def initial_state(self):
        g = make_complete_graph(self.graph.n) if self.initial_graph == "complete" else self.graph
        return encode_to_amplitudes(normalize_adjacency(g), self.n_qubits)


def bundled_config_path(name: str) -> Path:
    return Path(str(resources.files("qghnn") / "configs" / f"{name}.json"))


def load_config(ref: str | Path) -> ExperimentConfig:
    """Load a config file, or a bundled one by name (``exp01``...)."""
    path = Path(ref)
    if not path.exists() and str(ref) in BUNDLED:
        path = bundled_config_path(str(ref))
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read config {ref}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"config {ref} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InvalidArgumentError(f"config {ref} must hold a JSON object")
    return ExperimentConfig.from_dict(data)


def spectrum_summary(cfg: ExperimentConfig) -> dict[str, Any]:
    h = cfg.hamiltonian()
    raw = exact_spectrum(h)
    hn, scale = prepare_hamiltonian(h, normalize=True)
    norm = exact_spectrum(hn)
    return {
        "experiment": cfg.name,
        "n_qubits": h.n,
        "terms": len(h),
        "raw": {"lambda_min": raw.min_eig, "lambda_max": raw.max_eig},
        "normalized": {"lambda_min": norm.min_eig, "lambda_max": norm.max_eig},
        "scale": scale,
    }


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    report: TrainReport
    final_state: Any
    decoded: dict[str, DecodedGraph]
    metrics: dict[str, dict[str, Any]]
    best: dict[str, Any]
    spectrum: dict[str, Any]
    noise: dict[str, Any] | None

    def report_dict(self) -> dict[str, Any]:
        out = {
            "experiment": self.config.name,
            "backend": kernels.BACKEND,
            "config": self.config.to_dict(),
            "spectrum": self.spectrum,
            "train": self.report.to_dict(),
            "metrics": self.metrics,
            "best_readout": self.best,
        }
        if self.noise is not None:
            out["noise_extension"] = self.noise
        return out

    def metric_rows(self) -> list[dict[str, Any]]:
        variant = "continuous" if self.config.threshold is None else "binarized"
        rows = []
        for method in self.config.readout:
            m = self.metrics[method][variant]
            rows.append({"run_id": self.config.name, "method": method, **m})
        return rows


def _better(a: dict, b: dict) -> bool:
    # lower mse wins; undefined metrics never beat defined ones
    return (a["mse"], -(a["cosine"] or -2.0)) < (b["mse"], -(b["cosine"] or -2.0))


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    spec = cfg.circuit_spec()
    psi0 = cfg.initial_state()
    h = cfg.hamiltonian()
    log.info(
        "%s: %d nodes, %d qubits, %d layers (%d params), backend %s",
        cfg.name, cfg.graph.n, cfg.n_qubits, cfg.layers, spec.n_params, kernels.BACKEND,
    )
    report = train(spec, cfg.train, psi0, h)
    psi_out = run_circuit(spec, report.final_params, psi0)
    scale = normalize_adjacency(cfg.graph).scale
    threshold = DEFAULT_BINARIZE_AT if cfg.threshold is None else cfg.threshold

    decoded, metrics = {}, {}
    best = None
    for method in cfg.readout:
        dg = decode(psi_out, cfg.graph.n, method, scale)
        decoded[method] = dg
        entry = {
            "continuous": score(cfg.graph, dg, strict=False).to_dict(),
            "binarized": score(cfg.graph, dg.binarized(threshold), strict=False).to_dict(),
            "threshold": threshold,
        }
        metrics[method] = entry
        for variant in ("continuous", "binarized"):
            cand = {"method": method, "variant": variant, **entry[variant]}
            if best is None or _better(cand, best):
                best = cand

    noise = None
    if cfg.noise is not None:
        hn, _ = prepare_hamiltonian(h, cfg.train.normalize_hamiltonian)
        losses = noisy_losses(spec, report.final_params, psi0, hn, cfg.noise, cfg.noise_trials)
        noise = {
            "label": "extension: stochastic Pauli noise study, not a reproduction",
            "model": cfg.noise.to_dict(),
            "trials": cfg.noise_trials,
            "noiseless_loss": report.final_loss,
            "mean_loss": float(np.mean(losses)),
            "std_error": float(np.std(losses, ddof=1) / np.sqrt(len(losses))) if len(losses) > 1 else 0.0,
        }

    return ExperimentResult(cfg, report, psi_out, decoded, metrics, best, spectrum_summary(cfg), noise)


def write_outputs(result: ExperimentResult, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(result.report_dict(), indent=2) + "\n")
    with open(out / "loss_curve.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "loss"])
        for step, value in enumerate(result.report.loss_curve):
            w.writerow([step, repr(float(value))])
    for method, dg in result.decoded.items():
        (out / f"decoded_{method}.json").write_text(json.dumps(dg.to_dict(), indent=2) + "\n")
    (out / "metrics.csv").write_text(metrics_csv(result.metric_rows()))
    return out


def read_metrics_csv(path: str | Path) -> list[dict[str, Any]]:
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            for k in METRIC_NAMES:
                row[k] = float(row[k]) if row[k] not in ("", "nan") else None
            rows.append(row)
    return rows


def read_loss_curve(path: str | Path) -> list[float]:
    with open(path, newline="") as fh:
        return [float(r["loss"]) for r in csv.DictReader(fh)]


SWEEP_PARAMS = ("layers", "learning_rate", "noise.p")


def with_override(cfg: ExperimentConfig, param: str, value: float) -> ExperimentConfig:
    d = copy.deepcopy(cfg.to_dict())
    if param == "layers":
        d["layers"] = int(value)
    elif param == "learning_rate":
        d["train"]["learning_rate"] = float(value)
    elif param == "noise.p":
        d.setdefault("noise", {"kinds": ["X", "Y", "Z"], "seed": 0})["p"] = float(value)
    else:
        raise InvalidArgumentError(f"cannot sweep {param!r}; choose from {SWEEP_PARAMS}")
    return ExperimentConfig.from_dict(d)


def sweep_row(param: str, value, result: ExperimentResult) -> dict[str, Any]:
    row: dict[str, Any] = {"param": param, "value": value, "final_loss": result.report.final_loss}
    row["noisy_loss"] = result.noise["mean_loss"] if result.noise else None
    variant = "continuous" if result.config.threshold is None else "binarized"
    for method in result.config.readout:
        for k in METRIC_NAMES:
            row[f"{method}_{k}"] = result.metrics[method][variant][k]
    return row
