"""Report serialization: deterministic JSON and CSV, written atomically.

Reports carry no timestamps, so identical inputs produce byte-identical
files. Reals are emitted at full roundtrip precision.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .database import SearchOutcome
from .evolve import EvolutionReport
from .spectrum import GapReport, SpectrumTrace, SweepRow

SCHEMA_VERSION = 1


def dumps_report(payload: dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a temp file in the target directory, then rename over."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def outcomes_payload(outcomes: list[SearchOutcome]) -> list[dict]:
    return [
        {"index": o.index, "key": o.key, "probability": o.probability}
        for o in outcomes
    ]


def evolution_report_payload(
    report: EvolutionReport,
    parameters: dict,
    outcomes: list[SearchOutcome] | None = None,
) -> dict:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "method": report.method,
        "parameters": parameters,
        "probabilities": [float(p) for p in report.probabilities],
        "ground_population_trace": [
            [float(s), float(p)] for s, p in report.ground_population_trace
        ],
        "fidelity_audit": report.fidelity_audit,
    }
    if outcomes is not None:
        payload["outcomes"] = outcomes_payload(outcomes)
        payload["top_outcome"] = payload["outcomes"][0]
    return payload


def trace_to_csv(trace: SpectrumTrace) -> str:
    """Plot-ready CSV: column s, then the sorted levels E0..E_{N-1}."""
    n_levels = trace.levels.shape[1]
    lines = ["s," + ",".join(f"E{k}" for k in range(n_levels))]
    for s, row in zip(trace.s_grid, trace.levels):
        lines.append(",".join([repr(float(s))] + [repr(float(e)) for e in row]))
    return "\n".join(lines) + "\n"


def gap_report_payload(gap: GapReport, parameters: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "parameters": parameters,
        "min_gap": gap.min_gap,
        "s_at_min": gap.s_at_min,
        "ground_degeneracy_at_end": gap.ground_degeneracy_at_end,
    }


def sweep_to_csv(rows: list[SweepRow]) -> str:
    lines = ["n,N,min_gap,T_to_success"]
    for row in rows:
        lines.append(
            f"{row.n},{row.N},{repr(float(row.min_gap))},{repr(float(row.T_to_success))}"
        )
    return "\n".join(lines) + "\n"
