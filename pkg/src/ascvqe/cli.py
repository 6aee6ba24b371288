"""Command-line front end.

Subcommands:

* ``run``  — full pipeline (select, optimize, map, correct) from a config
  file; writes summary.json, trace.jsonl and aux_report.csv.
* ``scan`` — the same pipeline over a list of FCIDUMP files, one CSV row
  per geometry (potential-energy-surface data).
* ``fci``  — exact ground energy of a single FCIDUMP file.
* ``pool`` — enumerate the excitation pool of a file.

Config files are flat ``key = value`` text (``#`` comments allowed); any
key can be overridden on the command line.  Exit codes: 0 success,
2 configuration or input error, 3 numerical failure.  All outputs are
byte-identical across repeated runs with the same inputs; energies are
serialized with 12 significant digits and error columns are derived
downstream, never stored pre-rounded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .asc import asc_energy, build_auxiliary_pool, map_auxiliary_parameters, overhead_report
from .hamio import (
    FcidumpParseError,
    build_hamiltonian,
    excitation_pool,
    mp2_amplitudes,
    parse_fcidump,
    to_spin_orbitals,
)
from .oracle import SectorTooLargeError, ground_energy
from .simulator import AnsatzFactor, AnsatzState, cnot_estimate, expectation, hf_reference, prepare_state
from .subspace import SelectionConfig, adapt_vqe, mp2s_ansatz
from .vqe import CostFunction, OptimizerDivergenceError, minimize

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

METHODS = ("adapt", "mp2s", "ducc_sd")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    fcidump: str = ""
    method: str = "adapt"
    epsilon: float = 1e-3
    epsilon_bar: float = 1e-4
    init_strategy: str = "recycled"
    asc: bool = True
    grad_tol: float = 1e-8
    max_iter: int = 10000
    outdir: str = "out"
    seed: int = 0  # reserved; runs are deterministic

    def validate(self) -> None:
        if not self.fcidump:
            raise ConfigError("config: fcidump path is required")
        if not Path(self.fcidump).is_file():
            raise ConfigError(f"config: fcidump file not found: {self.fcidump}")
        if self.method not in METHODS:
            raise ConfigError(f"config: method must be one of {METHODS}")
        if self.epsilon <= 0 or self.epsilon_bar <= 0 or self.grad_tol <= 0:
            raise ConfigError("config: thresholds must be positive")
        if self.max_iter <= 0:
            raise ConfigError("config: max_iter must be positive")


_BOOL = {"on": True, "off": False, "true": True, "false": False, "1": True, "0": False}


def parse_config_file(path: Path) -> Dict[str, str]:
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values: Dict[str, str] = {}
    for ln, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{ln}: empty key")
        values[key] = value
    return values


def build_run_config(raw: Dict[str, str], overrides: Dict[str, object]) -> RunConfig:
    cfg = RunConfig()
    converters = {
        "fcidump": str,
        "method": str,
        "epsilon": float,
        "epsilon_bar": float,
        "init_strategy": str,
        "asc": lambda v: _BOOL[str(v).lower()],
        "grad_tol": float,
        "max_iter": int,
        "outdir": str,
        "seed": int,
    }
    for key, value in raw.items():
        if key not in converters:
            raise ConfigError(f"config: unknown key {key!r}")
        try:
            cfg = replace(cfg, **{key: converters[key](value)})
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"config: bad value for {key}: {value!r}") from exc
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "asc" and isinstance(value, str):
            value = _BOOL[value.lower()]
        cfg = replace(cfg, **{key: value})
    cfg.validate()
    return cfg


# --------------------------------------------------------------------------
# serialization helpers
# --------------------------------------------------------------------------


def _sig12(x: Optional[float]) -> Optional[float]:
    return None if x is None else float(f"{x:.12g}")


# --------------------------------------------------------------------------
# the pipeline
# --------------------------------------------------------------------------


@dataclass
class PipelineResult:
    summary: Dict[str, object]
    trace_jsonl: str
    aux_csv: str


def run_pipeline(cfg: RunConfig) -> PipelineResult:
    try:
        m = parse_fcidump(Path(cfg.fcidump).read_text())
    except FcidumpParseError as exc:
        raise ConfigError(f"{cfg.fcidump}: {exc}") from exc
    s = to_spin_orbitals(m)
    h = build_hamiltonian(s, m.e_core)
    n_qubits = s.n_so
    n_elec = m.n_electrons

    e_hf = expectation(hf_reference(n_qubits, n_elec), h)
    pool_sd = excitation_pool(n_qubits, n_elec, ranks={1, 2})

    sel = SelectionConfig(
        method="mp2s" if cfg.method == "mp2s" else "adapt",
        epsilon=cfg.epsilon,
        epsilon_bar=cfg.epsilon_bar,
        init_strategy=cfg.init_strategy,
    )

    reused_singles_pool: set = set()
    if cfg.method == "adapt":
        ansatz, trace = adapt_vqe(
            h, pool_sd, sel, n_qubits, n_elec,
            grad_tol=cfg.grad_tol, max_iter=cfg.max_iter,
        )
        final = prepare_state(ansatz)
        e_final = expectation(final, h)
        total_evals = trace.total_expectation_evals + 1
        trace_jsonl = trace.to_jsonl()
        # the terminating sweep measured <[H,G]> for every SD pool member
        reused_singles_pool = set(pool_sd)
    else:
        if cfg.method == "mp2s":
            amps = mp2_amplitudes(s, n_elec)
            template = mp2s_ansatz(amps, pool_sd, sel, n_qubits, n_elec)
        else:  # ducc_sd: the full pool in canonical order, started from zero
            template = AnsatzState(
                n_qubits,
                n_elec,
                [AnsatzFactor(x, 0.0, principal=True) for x in pool_sd],
            )
        cost = CostFunction(h, template)
        result = minimize(
            cost, template.parameters, grad_tol=cfg.grad_tol, max_iter=cfg.max_iter
        )
        ansatz = template.with_parameters(result.parameters)
        final = prepare_state(ansatz)
        e_final = result.energy
        total_evals = result.total_expectation_evaluations
        trace_jsonl = result.trace_jsonl()

    e_fci: Optional[float] = None
    try:
        e_fci = ground_energy(h, n_elec, m.ms2).ground_energy
    except SectorTooLargeError:
        pass

    e_asc: Optional[float] = None
    aux_csv = ""
    fresh_asc_evals = 0
    if cfg.asc:
        pool_sdtq = excitation_pool(n_qubits, n_elec, ranks={1, 2, 3, 4})
        aux_pool = build_auxiliary_pool(pool_sdtq, ansatz)
        mapping = map_auxiliary_parameters(final, aux_pool, h)
        e_asc, report = asc_energy(final, mapping, h)
        reused = sum(1 for x in aux_pool if x in reused_singles_pool)
        overhead = overhead_report(report, reused)
        fresh_asc_evals = overhead["fresh_evals"]
        total_evals += fresh_asc_evals
        aux_csv = report.to_csv()

    summary = {
        "e_hf": _sig12(e_hf),
        "e_final": _sig12(e_final),
        "e_asc": _sig12(e_asc),
        "e_fci": _sig12(e_fci),
        "n_params": len(ansatz.factors),
        "cnot_estimate": cnot_estimate(ansatz),
        "total_evals": int(total_evals),
        "fresh_asc_evals": int(fresh_asc_evals),
    }
    return PipelineResult(summary=summary, trace_jsonl=trace_jsonl, aux_csv=aux_csv)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_run(args: argparse.Namespace) -> int:
    cfg = build_run_config(
        parse_config_file(args.config) if args.config else {},
        _overrides(args),
    )
    result = run_pipeline(cfg)
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "summary.json").write_text(
        json.dumps(result.summary, indent=2) + "\n"
    )
    (outdir / "trace.jsonl").write_text(result.trace_jsonl + "\n")
    (outdir / "aux_report.csv").write_text(result.aux_csv)
    print(json.dumps(result.summary, indent=2))
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    raw = parse_config_file(args.config) if args.config else {}
    overrides = _overrides(args)
    rows: List[List[str]] = []
    failures = 0
    for path in args.fcidumps:
        label = Path(path).stem
        try:
            cfg = build_run_config(raw, {**overrides, "fcidump": str(path)})
            res = run_pipeline(cfg).summary
            e_m, e_a, e_f = res["e_final"], res["e_asc"], res["e_fci"]
            err_m = None if e_f is None else abs(e_m - e_f)
            err_a = None if (e_f is None or e_a is None) else abs(e_a - e_f)
            fmt = lambda v: "" if v is None else f"{v:.12g}"
            rows.append(
                [
                    label,
                    fmt(e_m),
                    fmt(e_a),
                    fmt(e_f),
                    fmt(err_m),
                    fmt(err_a),
                    str(res["cnot_estimate"]),
                    str(res["total_evals"]),
                ]
            )
        except (ConfigError, OptimizerDivergenceError, SectorTooLargeError) as exc:
            failures += 1
            code = "E_CONFIG" if isinstance(exc, ConfigError) else "E_NUMERICAL"
            print(f"error ({label}): {exc}", file=sys.stderr)
            rows.append([label, code, "", "", "", "", "", ""])

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "label", "e_method", "e_asc", "e_fci",
            "err_method", "err_asc", "cnot_estimate", "total_evals",
        ]
    )
    writer.writerows(rows)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(buf.getvalue())
    print(buf.getvalue(), end="")
    return EXIT_NUMERICAL if failures == len(args.fcidumps) else EXIT_OK


def cmd_fci(args: argparse.Namespace) -> int:
    path = Path(args.fcidump)
    if not path.is_file():
        raise ConfigError(f"file not found: {path}")
    try:
        m = parse_fcidump(path.read_text())
    except FcidumpParseError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    s = to_spin_orbitals(m)
    h = build_hamiltonian(s, m.e_core)
    try:
        result = ground_energy(h, m.n_electrons, m.ms2)
    except SectorTooLargeError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"{result.ground_energy:.10f}")
    return EXIT_OK


def cmd_pool(args: argparse.Namespace) -> int:
    path = Path(args.fcidump)
    if not path.is_file():
        raise ConfigError(f"file not found: {path}")
    try:
        m = parse_fcidump(path.read_text())
    except FcidumpParseError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    ranks = {1, 2} if args.ranks == "sd" else {1, 2, 3, 4}
    pool = excitation_pool(2 * m.n_spatial, m.n_electrons, ranks=ranks)
    for x in pool:
        print(x.label)
    print(f"total: {len(pool)}")
    return EXIT_OK


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    keys = (
        "fcidump", "method", "epsilon", "epsilon_bar",
        "init_strategy", "asc", "grad_tol", "max_iter", "outdir",
    )
    return {k: getattr(args, k, None) for k in keys}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asc-vqe",
        description="VQE with auxiliary-subspace energy corrections",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, help="key=value config file")
        p.add_argument("--method", choices=METHODS)
        p.add_argument("--epsilon", type=float, help="ADAPT gradient threshold")
        p.add_argument("--epsilon-bar", dest="epsilon_bar", type=float,
                       help="MP2 screening threshold")
        p.add_argument("--init-strategy", dest="init_strategy",
                       choices=("hf_zero", "recycled", "generator_informed"))
        p.add_argument("--asc", choices=("on", "off"))
        p.add_argument("--grad-tol", dest="grad_tol", type=float)
        p.add_argument("--max-iter", dest="max_iter", type=int)
        p.add_argument("--outdir")

    p_run = sub.add_parser("run", help="full pipeline on one FCIDUMP file")
    add_common(p_run)
    p_run.add_argument("--fcidump", help="FCIDUMP path (overrides config)")
    p_run.set_defaults(func=cmd_run)

    p_scan = sub.add_parser("scan", help="pipeline over several geometries")
    add_common(p_scan)
    p_scan.add_argument("fcidumps", nargs="+", help="FCIDUMP paths, row order")
    p_scan.add_argument("--out", default="scan.csv", help="output CSV path")
    p_scan.set_defaults(func=cmd_scan)

    p_fci = sub.add_parser("fci", help="exact ground energy of a file")
    p_fci.add_argument("fcidump")
    p_fci.set_defaults(func=cmd_fci)

    p_pool = sub.add_parser("pool", help="enumerate the excitation pool")
    p_pool.add_argument("fcidump")
    p_pool.add_argument("--ranks", choices=("sd", "sdtq"), default="sd")
    p_pool.set_defaults(func=cmd_pool)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OptimizerDivergenceError, SectorTooLargeError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
