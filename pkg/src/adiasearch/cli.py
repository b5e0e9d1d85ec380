"""Command-line surface for the adiabatic search pipeline.

Subcommands: search, spectrum, trotter-audit, nmr-compile, gap-sweep.
Exit codes: 0 success, 2 input error, 3 numeric error.
"""

from __future__ import annotations

import os

# Cap BLAS pools before numpy loads; ADIA_THREADS bounds internal parallelism.
_threads = os.environ.get("ADIA_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse
import json
import sys
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

import numpy as np

from . import database, nmr, reporting
from .errors import InputError, NumericError, WrongQubitCount
from .evolve import (
    EvolutionPlan,
    QuantumState,
    evolve_continuous,
    evolve_discrete_exact,
    evolve_trotter,
    initial_ground_state,
    measure_probabilities,
    operator_fidelity,
    trotter_fidelity_audit,
    trotter_step,
)
from .operators import (
    database_operator,
    initial_hamiltonian,
    operator_to_json,
    pauli_decompose,
    problem_hamiltonian,
)
from .spectrum import gap_scaling_sweep, min_gap, trace_spectrum

DEFAULT_T = 10.45
DEFAULT_S = 10
DEFAULT_G = 1.0
DEFAULT_GRID = 1001
DEFAULT_J_HZ = 214.5

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


@dataclass(frozen=True)
class RunConfig:
    """Resolved command parameters shared by the subcommands."""

    database_path: str
    target_label: str
    g: float = DEFAULT_G
    T: float = DEFAULT_T
    S: int = DEFAULT_S
    method: str = "discrete"
    grid_points: int = DEFAULT_GRID
    output_path: str = ""
    seed: int = 0
    strict: bool = False

    def __post_init__(self):
        if not self.T > 0:
            raise InputError(f"T must be positive, got {self.T}")
        if self.S < 1:
            raise InputError(f"S must be at least 1, got {self.S}")
        if not self.g > 0:
            raise InputError(f"g must be positive, got {self.g}")


def bundled_database_path() -> str:
    """Path of the packaged example phone book."""
    return str(files("adiasearch").joinpath("data/phonebook.csv"))


def _load_instance(config: RunConfig):
    rows = database.load_rows(config.database_path)
    db = database.encode_database(rows)
    target = database.encode_target(db, config.target_label, strict=config.strict)
    Hi = initial_hamiltonian(db.n_qubits, config.g)
    Hp = problem_hamiltonian(database_operator(db), target)
    return db, target, Hi, Hp


def _base_parameters(config: RunConfig, db, target: float) -> dict:
    return {
        "database_path": config.database_path,
        "n_qubits": db.n_qubits,
        "target_label": config.target_label,
        "target_code": target,
        "target_in_database": database.is_in_database(db, config.target_label),
        "g": config.g,
        "T": config.T,
        "S": config.S,
        "tau": config.T / (config.S + 1),
    }


def cmd_search(config: RunConfig) -> int:
    """Run the full pipeline and write the evolution report with decoded outcomes."""
    db, target, Hi, Hp = _load_instance(config)
    plan = EvolutionPlan(T=config.T, S=config.S, g=config.g)
    if config.method == "continuous":
        report = evolve_continuous(Hi, Hp, plan)
    elif config.method == "discrete":
        report = evolve_discrete_exact(Hi, Hp, plan)
    elif config.method == "trotter":
        report = evolve_trotter(Hi, Hp, plan)
    else:
        raise InputError(f"unknown method {config.method!r}")

    outcomes = database.decode_outcome(db, [float(p) for p in report.probabilities])
    parameters = _base_parameters(config, db, target)
    parameters["method"] = config.method
    if config.method == "continuous":
        parameters["dt"] = config.T / 10000.0
    payload = reporting.evolution_report_payload(report, parameters, outcomes)
    payload["problem_hamiltonian"] = operator_to_json(Hp)
    out = config.output_path or "search_report.json"
    reporting.atomic_write_text(out, reporting.dumps_report(payload))
    top = outcomes[0]
    print(f"top outcome: {top.key} (index {top.index}) p={top.probability:.6f}")
    print(f"report written to {out}")
    return EXIT_OK


def cmd_spectrum(config: RunConfig) -> int:
    """Write the level-trace CSV and the gap report JSON."""
    db, target, Hi, Hp = _load_instance(config)
    trace = trace_spectrum(Hi, Hp, config.grid_points)
    gap = min_gap(trace)
    out = Path(config.output_path or "spectrum.csv")
    reporting.atomic_write_text(out, reporting.trace_to_csv(trace))
    parameters = _base_parameters(config, db, target)
    parameters["grid_points"] = config.grid_points
    for key in ("T", "S", "tau"):
        parameters.pop(key)
    gap_out = out.with_suffix(".gap.json")
    reporting.atomic_write_text(
        gap_out, reporting.dumps_report(reporting.gap_report_payload(gap, parameters))
    )
    print(
        f"min gap {gap.min_gap:.6f} at s={gap.s_at_min:.4f}, "
        f"end degeneracy {gap.ground_degeneracy_at_end}"
    )
    print(f"trace written to {out}, gap report to {gap_out}")
    return EXIT_OK


def cmd_trotter_audit(config: RunConfig) -> int:
    """Audit split fidelities against the 0.996 per-step / 0.991 overall thresholds."""
    db, target, Hi, Hp = _load_instance(config)
    plan = EvolutionPlan(T=config.T, S=config.S, g=config.g)
    audit = trotter_fidelity_audit(Hi, Hp, plan)
    per_step_ok = all(f >= 0.996 for f in audit["per_step"])
    overall_ok = abs(audit["overall"] - 0.991) <= 0.005
    parameters = _base_parameters(config, db, target)
    payload = {
        "schema_version": reporting.SCHEMA_VERSION,
        "parameters": parameters,
        "per_step_fidelity": audit["per_step"],
        "overall_fidelity": audit["overall"],
        "thresholds": {"per_step_min": 0.996, "overall": [0.986, 0.996]},
        "per_step_pass": per_step_ok,
        "overall_pass": overall_ok,
    }
    out = config.output_path or "trotter_audit.json"
    reporting.atomic_write_text(out, reporting.dumps_report(payload))
    print(
        f"per-step min {min(audit['per_step']):.6f} "
        f"({'pass' if per_step_ok else 'FAIL'} vs 0.996), "
        f"overall {audit['overall']:.6f} "
        f"({'pass' if overall_ok else 'FAIL'} vs 0.991 +/- 0.005)"
    )
    print(f"audit written to {out}")
    return EXIT_OK


def cmd_nmr_compile(config: RunConfig) -> int:
    """Compile all steps to pulses, verify each against its split unitary."""
    db, target, Hi, Hp = _load_instance(config)
    if db.n_qubits != 2:
        raise WrongQubitCount(
            f"pulse compilation supports 2-qubit databases, got n={db.n_qubits}"
        )
    plan = EvolutionPlan(T=config.T, S=config.S, g=config.g)
    system = nmr.SpinSystem(J=DEFAULT_J_HZ)
    sequences = nmr.compile_full(plan, pauli_decompose(Hp), system)

    fidelities = []
    psi = initial_ground_state(2).amplitudes
    for seq in sequences:
        U_seq = nmr.simulate_sequence(seq)
        fidelities.append(operator_fidelity(trotter_step(Hi, Hp, plan, seq.step_index), U_seq))
        psi = U_seq @ psi
    probs = measure_probabilities(QuantumState(n_qubits=2, amplitudes=psi / np.linalg.norm(psi)))
    outcomes = database.decode_outcome(db, [float(p) for p in probs])

    out = Path(config.output_path or "pulses.jsonl")
    lines = [json.dumps(nmr.sequence_to_json(s), sort_keys=True) for s in sequences]
    reporting.atomic_write_text(out, "\n".join(lines) + "\n")

    parameters = _base_parameters(config, db, target)
    parameters["J_hz"] = system.J
    verify_payload = {
        "schema_version": reporting.SCHEMA_VERSION,
        "parameters": parameters,
        "per_step_fidelity": fidelities,
        "min_fidelity": min(fidelities),
        "all_within_1e-6": all(f >= 1.0 - 1e-6 for f in fidelities),
        "final_probabilities": [float(p) for p in probs],
        "top_outcome": reporting.outcomes_payload(outcomes)[0],
    }
    verify_out = out.with_suffix(".verify.json")
    reporting.atomic_write_text(verify_out, reporting.dumps_report(verify_payload))
    print(
        f"{len(sequences)} step sequences, min fidelity vs split step "
        f"{min(fidelities):.9f}; top outcome {outcomes[0].key} p={outcomes[0].probability:.6f}"
    )
    print(f"pulses written to {out}, verification to {verify_out}")
    return EXIT_OK


def cmd_gap_sweep(config: RunConfig, n_min: int, n_max: int) -> int:
    """Sweep min gap and time-to-success over seeded permutation instances."""
    rows = gap_scaling_sweep(
        list(range(n_min, n_max + 1)),
        seed=config.seed,
        g=config.g,
        grid_points=config.grid_points,
    )
    out = config.output_path or "gap_sweep.csv"
    reporting.atomic_write_text(out, reporting.sweep_to_csv(rows))
    print(f"{len(rows)} rows written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adiasearch",
        description="Oracle-free adiabatic database search simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_evolution=True):
        p.add_argument("--db", default=None, help="database CSV/JSON path (default: bundled phone book)")
        p.add_argument("--target", default="3601002", help="value label to search for")
        p.add_argument("--g", type=float, default=DEFAULT_G, help="transverse-field coupling strength")
        if with_evolution:
            p.add_argument("--T", type=float, default=DEFAULT_T, help="total evolution time")
            p.add_argument("--S", type=int, default=DEFAULT_S, help="step count parameter (S+1 steps)")
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--strict", action="store_true", help="reject out-of-database targets")

    p_search = sub.add_parser("search", help="run the search pipeline end to end")
    add_common(p_search)
    p_search.add_argument(
        "--method",
        choices=("continuous", "discrete", "trotter"),
        default="discrete",
        help="evolution method",
    )

    p_spec = sub.add_parser("spectrum", help="level trace CSV and min-gap report")
    add_common(p_spec, with_evolution=False)
    p_spec.add_argument("--grid", type=int, default=DEFAULT_GRID, help="number of s grid points")

    p_audit = sub.add_parser("trotter-audit", help="per-step and overall split fidelities")
    add_common(p_audit)

    p_nmr = sub.add_parser("nmr-compile", help="compile steps to NMR pulses and verify")
    add_common(p_nmr)

    p_sweep = sub.add_parser("gap-sweep", help="gap and time-to-success scaling table")
    p_sweep.add_argument("--g", type=float, default=DEFAULT_G)
    p_sweep.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p_sweep.add_argument("--seed", type=int, default=0, help="instance generator seed")
    p_sweep.add_argument("--n-min", type=int, default=2, help="smallest register size")
    p_sweep.add_argument("--n-max", type=int, default=5, help="largest register size")
    p_sweep.add_argument("--out", default=None)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        database_path=args.db or bundled_database_path(),
        target_label=args.target,
        g=args.g,
        T=getattr(args, "T", DEFAULT_T),
        S=getattr(args, "S", DEFAULT_S),
        method=getattr(args, "method", "discrete"),
        grid_points=getattr(args, "grid", DEFAULT_GRID),
        output_path=args.out or "",
        seed=getattr(args, "seed", 0),
        strict=getattr(args, "strict", False),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gap-sweep":
            config = RunConfig(
                database_path="",
                target_label="",
                g=args.g,
                grid_points=args.grid,
                output_path=args.out or "",
                seed=args.seed,
            )
            return cmd_gap_sweep(config, args.n_min, args.n_max)
        config = _config_from_args(args)
        if args.command == "search":
            return cmd_search(config)
        if args.command == "spectrum":
            return cmd_spectrum(config)
        if args.command == "trotter-audit":
            return cmd_trotter_audit(config)
        if args.command == "nmr-compile":
            return cmd_nmr_compile(config)
        raise InputError(f"unknown command {args.command!r}")
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
