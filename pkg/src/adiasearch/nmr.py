"""Compilation of two-qubit evolution steps to NMR pulse sequences.

Each second-order step splits into two simultaneous x pulses around a
diagonal block; the diagonal block is realized by per-spin z rotations
(the single-Z terms) and free evolution under the scalar coupling (the ZZ
term). The identity term contributes only a global phase, which is dropped
from the pulses but tracked on the sequence so operator comparisons can be
made phase-exact.

Rotation convention: rot_x(theta) = exp(-i (theta/2) sigma_x) per addressed
spin, and likewise for rot_z. Spin k is qubit k; offsets[k] is the
rotating-frame Larmor offset of spin k in rad/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, UnsupportedHamiltonian, WrongQubitCount
from .evolve import EvolutionPlan, expm_hermitian
from .operators import PauliString, single_qubit_operator

ROT_KINDS = ("rot_x", "rot_z")


@dataclass(frozen=True)
class SpinSystem:
    """Two-spin NMR system: scalar coupling J (Hz) and per-spin offsets (rad/s)."""

    J: float
    offsets: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.J > 0:
            raise InputError(f"coupling constant J must be positive, got {self.J}")


@dataclass(frozen=True)
class PulseOp:
    """One pulse primitive: an x or z rotation, or free J-coupling evolution."""

    kind: str
    spins: tuple[int, ...]
    angle: float | None = None
    duration: float | None = None

    def __post_init__(self):
        if self.kind in ROT_KINDS:
            if self.angle is None or self.duration is not None:
                raise InputError(f"{self.kind} carries an angle, not a duration")
            if not self.spins or any(s not in (0, 1) for s in self.spins):
                raise InputError(f"{self.kind} spins must be a nonempty subset of (0, 1)")
        elif self.kind == "free_evolve":
            if self.duration is None or self.angle is not None:
                raise InputError("free_evolve carries a duration, not an angle")
            if not self.duration > 0:
                raise InputError(f"free_evolve duration must be positive, got {self.duration}")
            if tuple(sorted(self.spins)) != (0, 1):
                raise InputError("free_evolve acts on both spins")
        else:
            raise InputError(f"unknown pulse kind {self.kind!r}")


@dataclass(frozen=True)
class PulseSequence:
    """Ordered pulse program for one evolution step.

    ``dropped_identity_phase`` is the angle phi of the omitted global factor
    exp(-i phi): multiplying the simulated unitary by that factor recovers
    the split-step unitary exactly.
    """

    system: SpinSystem
    ops: tuple[PulseOp, ...]
    step_index: int
    dropped_identity_phase: float = 0.0


def _diagonal_coefficients(Hp_paulis: list[PauliString]) -> tuple[float, float, float, float]:
    """Coefficients (c_II, c_Z on qubit 0, c_Z on qubit 1, c_ZZ) of a diagonal 2-qubit H."""
    c = {"II": 0.0, "ZI": 0.0, "IZ": 0.0, "ZZ": 0.0}
    for term in Hp_paulis:
        if len(term.axes) != 2:
            raise WrongQubitCount(
                f"pulse compilation needs 2-qubit terms, got {term.label!r}"
            )
        if any(a not in ("I", "Z") for a in term.axes):
            raise UnsupportedHamiltonian(
                f"non-diagonal term {term.label!r}; only I/Z products compile to pulses"
            )
        c[term.label] += term.coefficient
    # label reads qubit 1 first: "IZ" is Z on qubit 0, "ZI" is Z on qubit 1.
    return c["II"], c["IZ"], c["ZI"], c["ZZ"]


def compile_step(
    plan: EvolutionPlan,
    Hp_paulis: list[PauliString],
    s: int,
    system: SpinSystem,
) -> PulseSequence:
    """Compile step s into x pulses, z rotations, and free evolution.

    The two x pulses of angle theta = (1 - s/S) * tau * g sandwich the
    diagonal block; each z rotation angle is 2 * (s/S) * tau * c_Z; the free
    evolution duration realizes exp(-i (s/S) tau c_ZZ ZZ) under the coupling
    2 pi J Iz Iz, lifted by full periods 4/J when the required angle is
    negative. Zero-angle and zero-duration ops are omitted.
    """
    if not 0 <= s <= plan.S:
        raise InputError(f"step index {s} outside 0..{plan.S}")
    c_identity, c_z0, c_z1, c_zz = _diagonal_coefficients(Hp_paulis)
    x = plan.schedule(s / plan.S)
    tau = plan.tau
    theta = (1.0 - x) * tau * float(plan.g)

    ops: list[PulseOp] = []
    half_x = PulseOp(kind="rot_x", spins=(0, 1), angle=theta) if theta != 0.0 else None
    if half_x is not None:
        ops.append(half_x)
    for spin, c_z in ((0, c_z0), (1, c_z1)):
        phi = 2.0 * x * tau * c_z
        if phi != 0.0:
            ops.append(PulseOp(kind="rot_z", spins=(spin,), angle=phi))
    zz_angle = x * tau * c_zz
    if zz_angle != 0.0:
        duration = (2.0 * zz_angle / (math.pi * system.J)) % (4.0 / system.J)
        if duration > 0.0:
            ops.append(PulseOp(kind="free_evolve", spins=(0, 1), duration=duration))
    if half_x is not None:
        ops.append(half_x)

    return PulseSequence(
        system=system,
        ops=tuple(ops),
        step_index=s,
        dropped_identity_phase=x * tau * c_identity,
    )


def compile_full(
    plan: EvolutionPlan,
    Hp_paulis: list[PauliString],
    system: SpinSystem,
) -> list[PulseSequence]:
    """Pulse sequences for every step s = 0..S, in application order."""
    return [compile_step(plan, Hp_paulis, s, system) for s in range(plan.S + 1)]


def _op_unitary(op: PulseOp, system: SpinSystem) -> np.ndarray:
    if op.kind == "rot_x":
        U = np.eye(4, dtype=complex)
        for spin in op.spins:
            U = expm_hermitian(single_qubit_operator(2, spin, "X"), op.angle / 2.0) @ U
        return U
    if op.kind == "rot_z":
        U = np.eye(4, dtype=complex)
        for spin in op.spins:
            U = expm_hermitian(single_qubit_operator(2, spin, "Z"), op.angle / 2.0) @ U
        return U
    # free evolution under omega_1 Iz0 + omega_2 Iz1 + 2 pi J Iz0 Iz1, Iz = Z/2
    z0 = single_qubit_operator(2, 0, "Z")
    z1 = single_qubit_operator(2, 1, "Z")
    H_sys = (
        system.offsets[0] * z0 / 2.0
        + system.offsets[1] * z1 / 2.0
        + (math.pi * system.J / 2.0) * (z0 @ z1)
    )
    return expm_hermitian(H_sys, op.duration)


def simulate_sequence(seq: PulseSequence) -> np.ndarray:
    """Exact 4x4 unitary of the pulse program; empty sequences give identity."""
    U = np.eye(4, dtype=complex)
    for op in seq.ops:
        U = _op_unitary(op, seq.system) @ U
    return U


def sequence_unitary_with_phase(seq: PulseSequence) -> np.ndarray:
    """Simulated unitary with the dropped identity phase reinstated."""
    return simulate_sequence(seq) * np.exp(-1j * seq.dropped_identity_phase)


def sequence_to_json(seq: PulseSequence) -> dict:
    """JSON-lines record: step index, pulse ops, and the tracked global phase.

    Angles are rounded to 12 significant digits; durations stay in seconds.
    """
    ops = []
    for op in seq.ops:
        entry: dict = {"kind": op.kind, "spins": list(op.spins)}
        if op.kind in ROT_KINDS:
            entry["angle_rad"] = float(f"{op.angle:.12g}")
        else:
            entry["duration_s"] = op.duration
        ops.append(entry)
    return {
        "step": seq.step_index,
        "ops": ops,
        "dropped_identity_phase_rad": seq.dropped_identity_phase,
    }
