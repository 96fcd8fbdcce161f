"""Command-line entry point.

Subcommands: `spectrum` (walk eigenphases vs dense diagonalization),
`zeno` (sequential-measurement ground-state preparation), and `resources`
(measured censuses plus formula estimates).  Output is deterministic for a
fixed configuration and seed: sorted JSON keys, floats rounded to 12
significant digits, no timestamps.  Exit codes: 0 success, 1 an acceptance
threshold failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields

import numpy as np

from .blocks import walk_eigenphases
from .hamiltonian import (
    HamiltonianFileError,
    InterpolatedModel,
    LcuHamiltonian,
    group,
    long_range_ising,
    normalize,
    product_state,
    read_hamiltonian,
    tfim,
)
from .measurement import uniform_schedule, zeno_prepare
from .resources import CostModel, CostQuery, encoding_table, taylor_cost, trotter_cost, walk_cost
from .walk_binary import binary_walk
from .walk_unary import hybrid_long_range_walk, unary_walk

SCHEMA_VERSION = 1
SPECTRUM_TOLERANCE = 1e-8


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = ""
    model: str = "tfim"
    hamiltonian_file: str | None = None
    n: int = 3
    g: float = 1.0
    J: float = 1.0
    alpha: float = 2.0
    boundary: str = "open"
    encoding: str = "binary"
    mode: str = "analyze"
    seed: int | None = None
    shots: int = 200
    schedule_steps: int = 8
    schedule: str | None = None
    delta: float = 1e-3
    gap: str = "0.1"
    time_constant: float = 1.0
    cost_a: float = 1.0
    cost_b: float = 1.0
    cost_c: float = 1.0
    out: str | None = None
    format: str = "json"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specwalk",
        description="Walk-based spectral measurement: exact small-scale "
        "simulation and fault-tolerant gate accounting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "zeno", "resources"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON file of option overrides")
        p.add_argument("--model", choices=["tfim", "long-range", "file"], default=None)
        p.add_argument("--hamiltonian-file", default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--g", type=float, default=None)
        p.add_argument("--J", type=float, default=None)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--boundary", choices=["open", "periodic"], default=None)
        p.add_argument("--encoding", choices=["binary", "unary", "hybrid"], default=None)
        p.add_argument("--mode", choices=["analyze", "sample"], default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--shots", type=int, default=None)
        p.add_argument("--schedule-steps", type=int, default=None)
        p.add_argument("--schedule", default=None, help="comma-separated g values ending at 1")
        p.add_argument("--delta", type=float, default=None, help="per-gate accuracy")
        p.add_argument("--gap", default=None, help="target resolution(s), comma-separated")
        p.add_argument("--time-constant", type=float, default=None)
        p.add_argument("--cost-a", type=float, default=None)
        p.add_argument("--cost-b", type=float, default=None)
        p.add_argument("--cost-c", type=float, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "csv"], default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, overridden by the --config file, overridden by explicit flags."""
    cfg = RunConfig(command=args.command)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from exc
        valid = {f.name for f in fields(RunConfig)}
        for key, value in overrides.items():
            name = key.replace("-", "_")
            if name not in valid:
                raise InputError(f"unknown config key {key!r}")
            setattr(cfg, name, value)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            setattr(cfg, f.name, flag)
    return cfg


def build_model(cfg: RunConfig) -> LcuHamiltonian:
    if cfg.model == "tfim":
        return tfim(cfg.n, cfg.g, cfg.J, cfg.boundary)
    if cfg.model == "long-range":
        return long_range_ising(cfg.n, cfg.J, cfg.alpha)
    if cfg.model == "file":
        if not cfg.hamiltonian_file:
            raise InputError("--model file requires --hamiltonian-file")
        return read_hamiltonian(cfg.hamiltonian_file)
    raise InputError(f"unknown model {cfg.model!r}")


def build_bundle(cfg: RunConfig, h: LcuHamiltonian):
    rescaled = normalize(h, "auto")
    if cfg.encoding == "binary":
        return binary_walk(rescaled)
    if cfg.encoding == "unary":
        return unary_walk(group(rescaled), rescaled)
    if cfg.encoding == "hybrid":
        if cfg.model != "long-range" and cfg.model != "file":
            raise InputError("the hybrid encoding applies to long-range chains only")
        return hybrid_long_range_walk(rescaled)
    raise InputError(f"unknown encoding {cfg.encoding!r}")


# --- commands ----------------------------------------------------------------


def run_spectrum(cfg: RunConfig) -> tuple[dict, int]:
    h = build_model(cfg)
    bundle = build_bundle(cfg, h)
    report = walk_eigenphases(bundle)
    rows = [
        {
            "theta_expected": e,
            "matched_phase": m,
            "abs_error": err,
            "energy_rescaled": float(np.cos(e)),
        }
        for e, m, err in report.pairs
    ]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "spectrum",
        "model": cfg.model,
        "encoding": cfg.encoding,
        "n": cfg.n,
        "rows": rows,
        "max_error": report.max_error,
        "closure_error": report.closure_error,
        "tolerance": SPECTRUM_TOLERANCE,
        "pass": report.max_error <= SPECTRUM_TOLERANCE,
    }
    return payload, 0 if payload["pass"] else 1


def run_zeno(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.model != "tfim":
        raise InputError("the zeno command drives the tfim interpolation path")
    if cfg.mode == "sample" and cfg.seed is None:
        raise InputError("sample mode requires --seed")
    h0 = tfim(cfg.n, -abs(cfg.g), 0.0, cfg.boundary)
    v = LcuHamiltonian.from_terms(
        cfg.n, [(c, p) for c, p in tfim(cfg.n, 0.0, cfg.J, cfg.boundary).terms]
    )
    model = InterpolatedModel(h0, v, h0_ground=product_state("+" * cfg.n))
    if cfg.schedule:
        try:
            schedule = [float(x) for x in cfg.schedule.split(",")]
        except ValueError as exc:
            raise InputError(f"bad schedule: {exc}") from exc
    else:
        schedule = uniform_schedule(cfg.schedule_steps)
    try:
        trace = zeno_prepare(
            model,
            schedule,
            encoding=cfg.encoding,
            mode=cfg.mode,
            seed=cfg.seed,
            shots=cfg.shots,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = {"schema_version": SCHEMA_VERSION, "command": "zeno", "n": cfg.n}
    payload.update(trace.to_json())
    return payload, 0


def run_resources(cfg: RunConfig) -> tuple[dict, int]:
    model = CostModel(cfg.cost_a, cfg.cost_b, cfg.cost_c)
    try:
        gaps = [float(x) for x in str(cfg.gap).split(",")]
    except ValueError as exc:
        raise InputError(f"bad gap list: {exc}") from exc
    rows = []
    warnings = []
    h = None
    census = None
    table = []
    try:
        h = build_model(cfg)
    except InputError:
        raise
    rescaled = normalize(h, "auto")
    n_terms = rescaled.n_select_terms
    k_distinct = len(group(rescaled).groups)
    buildable = h.n_qubits + n_terms + 4 <= 20
    if buildable:
        with_hybrid = cfg.model == "long-range" and h.n_qubits & (h.n_qubits - 1) == 0
        table = encoding_table(h, with_hybrid=with_hybrid)
        for row in table:
            if row["encoding"] == cfg.encoding:
                from .census import GateCensus

                census = GateCensus(
                    clifford=row["clifford"],
                    toffoli=row["third_level"],
                    rotations=row["rotation_gates"],
                    qubits=row["qubits"],
                )
    else:
        warnings.append("model above the simulation cap; formula estimates only")
    for gap in gaps:
        query = CostQuery(
            n=h.n_qubits,
            n_terms=n_terms,
            k_distinct=k_distinct,
            normalization=rescaled.normalization,
            gap=gap,
            delta=cfg.delta,
            time_constant=cfg.time_constant,
        )
        walk_row = walk_cost(query, model, census)
        walk_row["gap"] = gap
        rows.append(walk_row)
        for regime in ("lattice", "chemistry"):
            row = trotter_cost(query, model, regime)
            row["gap"] = gap
            rows.append(row)
        row = taylor_cost(query, model, census)
        row["gap"] = gap
        rows.append(row)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "resources",
        "model": cfg.model,
        "n": h.n_qubits,
        "n_terms": n_terms,
        "k_distinct": k_distinct,
        "normalization": rescaled.normalization,
        "encoding_table": table,
        "rows": rows,
        "warnings": warnings,
    }
    return payload, 0


# --- serialization -------------------------------------------------------------


def _round_floats(obj):
    """12 significant digits everywhere, for stable printing."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_round_floats(float(v)) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def render(payload: dict, fmt: str) -> str:
    payload = _round_floats(payload)
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        rows = payload.get("rows", [])
        buf = io.StringIO()
        keys = sorted({k for row in rows for k in row})
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in keys})
        return buf.getvalue()
    raise InputError(f"unknown format {fmt!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.command == "spectrum":
            payload, code = run_spectrum(cfg)
        elif cfg.command == "zeno":
            payload, code = run_zeno(cfg)
        elif cfg.command == "resources":
            payload, code = run_resources(cfg)
        else:
            raise InputError(f"unknown command {cfg.command!r}")
        text = render(payload, cfg.format)
    except (InputError, HamiltonianFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
