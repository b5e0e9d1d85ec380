"""State evolution under the interpolating Hamiltonian.

Three routes to the final state: fixed-step RK4 integration of the
Schrodinger equation (hbar = 1), a product of exact step unitaries
exp(-i H(s/S) tau), and the symmetric second-order split of each step.
Matrix exponentials go through exact Hermitian eigendecomposition so the
splitting error is measurable in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh

from .errors import (
    DimensionMismatch,
    InputError,
    NotNormalized,
    SOutOfRange,
    StepTooLarge,
)
from .operators import CouplingStrength, HermitianOperator, interpolate

NORM_TOL = 1e-9
NORM_DRIFT_TOL = 1e-6
DEGENERACY_TOL = 1e-9
TRACE_POINTS = 101


@dataclass(frozen=True)
class QuantumState:
    """Normalized pure state of an n-qubit register."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_qubits,):
            raise DimensionMismatch(
                f"amplitude vector shape {amps.shape} does not match {self.n_qubits} qubits"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state norm {norm!r} deviates from 1 beyond 1e-9")
        object.__setattr__(self, "amplitudes", amps)


def linear_schedule(x: float) -> float:
    """Default interpolation schedule s(t) = t / T."""
    return x


@dataclass(frozen=True)
class EvolutionPlan:
    """Evolution parameters: total time T, step count S, coupling g, schedule.

    The step length is tau = T / (S + 1): S + 1 unitaries cover the passage.
    The schedule maps the scaled time t/T (or step fraction s/S) onto the
    interpolation parameter; it must be monotone with endpoints 0 and 1.
    """

    T: float
    S: int
    g: CouplingStrength = field(default_factory=lambda: CouplingStrength(1.0))
    schedule: Callable[[float], float] = linear_schedule

    def __post_init__(self):
        if not self.T > 0:
            raise InputError(f"total time must be positive, got {self.T}")
        if self.S < 1:
            raise InputError(f"step count must be at least 1, got {self.S}")
        if isinstance(self.g, (int, float)):
            object.__setattr__(self, "g", CouplingStrength(float(self.g)))
        grid = [self.schedule(x) for x in np.linspace(0.0, 1.0, TRACE_POINTS)]
        if abs(grid[0]) > 1e-12 or abs(grid[-1] - 1.0) > 1e-12:
            raise InputError("schedule must satisfy s(0) = 0 and s(1) = 1")
        if any(b < a - 1e-12 for a, b in zip(grid, grid[1:])):
            raise InputError("schedule must be monotone nondecreasing")

    @property
    def tau(self) -> float:
        return self.T / (self.S + 1)


@dataclass(frozen=True)
class EvolutionReport:
    """Outcome of one evolution: final state, populations, ground-level trace."""

    final_state: QuantumState
    probabilities: np.ndarray
    ground_population_trace: tuple[tuple[float, float], ...]
    method: str
    fidelity_audit: dict | None = None


def initial_ground_state(n: int) -> QuantumState:
    """Ground state of the transverse-field Hamiltonian.

    Amplitude (-1)^popcount(j) / sqrt(2^n) at basis index j: the tensor
    product of (|0> - |1>)/sqrt(2) on every qubit, eigenstate of
    initial_hamiltonian(n, g) with eigenvalue -n*g.
    """
    if n < 1:
        raise InputError(f"need at least one qubit, got {n}")
    dim = 2**n
    signs = np.array([(-1) ** int(j).bit_count() for j in range(dim)], dtype=complex)
    return QuantumState(n_qubits=n, amplitudes=signs / np.sqrt(dim))


def expm_hermitian(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) for Hermitian H, by eigendecomposition.

    Exactly diagonal matrices skip the eigensolve and exponentiate the
    diagonal directly.
    """
    d = np.diagonal(H)
    if np.count_nonzero(H - np.diag(d)) == 0:
        return np.diag(np.exp(-1j * np.real(d) * t))
    w, V = eigh(H)
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def measure_probabilities(psi: QuantumState) -> np.ndarray:
    """Born-rule populations |a_j|^2 over the computational basis."""
    return np.abs(psi.amplitudes) ** 2


def state_overlap(psi: QuantumState, phi: QuantumState) -> float:
    """|<psi|phi>|^2, in [0, 1]."""
    if psi.n_qubits != phi.n_qubits:
        raise DimensionMismatch(
            f"qubit counts differ: {psi.n_qubits} vs {phi.n_qubits}"
        )
    return float(abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)


def operator_fidelity(U: np.ndarray, V: np.ndarray) -> float:
    """Global-phase-invariant unitary similarity |Tr(U^dag V)| / d."""
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape != V.shape or U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DimensionMismatch(f"incompatible shapes {U.shape} and {V.shape}")
    return float(abs(np.trace(U.conj().T @ V)) / U.shape[0])


def ground_population(psi: np.ndarray, H: np.ndarray, tol: float = DEGENERACY_TOL) -> float:
    """Population of the ground level of H, summed over degenerate states."""
    w, V = eigh(H)
    mask = w <= w[0] + tol
    amps = V[:, mask].conj().T @ psi
    return float(np.sum(np.abs(amps) ** 2))


def _check_pair(Hi: HermitianOperator, Hp: HermitianOperator) -> int:
    if Hi.n_qubits != Hp.n_qubits:
        raise DimensionMismatch(
            f"qubit counts differ: {Hi.n_qubits} vs {Hp.n_qubits}"
        )
    return Hi.n_qubits


def evolve_continuous(
    Hi: HermitianOperator,
    Hp: HermitianOperator,
    plan: EvolutionPlan,
    dt: float | None = None,
) -> EvolutionReport:
    """Integrate the Schrodinger equation from t=0 to T with fixed-step RK4.

    Starts from the transverse-field ground state, renormalizes after every
    step, and records the instantaneous-ground-level population on a
    101-point grid. Default dt is T/10000.
    """
    n = _check_pair(Hi, Hp)
    if dt is None:
        dt = plan.T / 10000.0
    if not dt > 0:
        raise InputError(f"time step must be positive, got {dt}")
    # Step count is a multiple of TRACE_POINTS - 1 so the trace grid is hit exactly.
    chunks = TRACE_POINTS - 1
    per_chunk = max(1, int(np.ceil(plan.T / dt / chunks)))
    total = chunks * per_chunk
    h = plan.T / total

    def H_of(frac: float) -> np.ndarray:
        s = plan.schedule(frac)
        return (1.0 - s) * Hi.matrix + s * Hp.matrix

    psi = initial_ground_state(n).amplitudes
    trace = [(plan.schedule(0.0), ground_population(psi, H_of(0.0)))]
    for m in range(total):
        f0 = m / total
        f_mid = (m + 0.5) / total
        f1 = (m + 1) / total
        k1 = -1j * (H_of(f0) @ psi)
        k2 = -1j * (H_of(f_mid) @ (psi + (h / 2) * k1))
        k3 = -1j * (H_of(f_mid) @ (psi + (h / 2) * k2))
        k4 = -1j * (H_of(f1) @ (psi + h * k3))
        psi = psi + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > NORM_DRIFT_TOL:
            raise StepTooLarge(
                f"norm drifted to {norm} at t={f1 * plan.T:.6g}; reduce dt"
            )
        psi = psi / norm
        if (m + 1) % per_chunk == 0:
            s_here = plan.schedule(f1)
            trace.append((s_here, ground_population(psi, H_of(f1))))

    final = QuantumState(n_qubits=n, amplitudes=psi)
    return EvolutionReport(
        final_state=final,
        probabilities=measure_probabilities(final),
        ground_population_trace=tuple(trace),
        method="continuous",
    )


def _step_parameter(plan: EvolutionPlan, s: int) -> float:
    return plan.schedule(s / plan.S)


def exact_step(Hi: HermitianOperator, Hp: HermitianOperator, plan: EvolutionPlan, s: int) -> np.ndarray:
    """Step unitary exp(-i H(s/S) tau) via exact eigendecomposition."""
    if not 0 <= s <= plan.S:
        raise SOutOfRange(f"step index {s} outside 0..{plan.S}")
    x = _step_parameter(plan, s)
    return expm_hermitian(interpolate(Hi, Hp, x).matrix, plan.tau)


def trotter_step(Hi: HermitianOperator, Hp: HermitianOperator, plan: EvolutionPlan, s: int) -> np.ndarray:
    """Symmetric second-order split of the step unitary.

    exp(-i (1-x) Hi tau/2) exp(-i x Hp tau) exp(-i (1-x) Hi tau/2) with
    x = s/S; exact at both endpoints where one factor vanishes.
    """
    _check_pair(Hi, Hp)
    if not 0 <= s <= plan.S:
        raise SOutOfRange(f"step index {s} outside 0..{plan.S}")
    x = _step_parameter(plan, s)
    half = expm_hermitian(Hi.matrix, (1.0 - x) * plan.tau / 2.0)
    middle = expm_hermitian(Hp.matrix, x * plan.tau)
    return half @ middle @ half


def _evolve_stepwise(
    Hi: HermitianOperator,
    Hp: HermitianOperator,
    plan: EvolutionPlan,
    step_fn: Callable[[int], np.ndarray],
    method: str,
    fidelity_audit: dict | None = None,
) -> EvolutionReport:
    n = _check_pair(Hi, Hp)
    psi = initial_ground_state(n).amplitudes
    trace = [(plan.schedule(0.0), ground_population(psi, Hi.matrix))]
    for s in range(plan.S + 1):
        psi = step_fn(s) @ psi
        x = _step_parameter(plan, s)
        trace.append((x, ground_population(psi, interpolate(Hi, Hp, x).matrix)))
    psi = psi / np.linalg.norm(psi)
    final = QuantumState(n_qubits=n, amplitudes=psi)
    return EvolutionReport(
        final_state=final,
        probabilities=measure_probabilities(final),
        ground_population_trace=tuple(trace),
        method=method,
        fidelity_audit=fidelity_audit,
    )


def evolve_discrete_exact(
    Hi: HermitianOperator, Hp: HermitianOperator, plan: EvolutionPlan
) -> EvolutionReport:
    """Apply the exact step unitaries for s = 0..S, ascending."""
    return _evolve_stepwise(
        Hi, Hp, plan,
        step_fn=lambda s: exact_step(Hi, Hp, plan, s),
        method="discrete-exact",
    )


def evolve_trotter(
    Hi: HermitianOperator, Hp: HermitianOperator, plan: EvolutionPlan
) -> EvolutionReport:
    """Apply the second-order split unitaries for s = 0..S, ascending."""
    audit = trotter_fidelity_audit(Hi, Hp, plan)
    return _evolve_stepwise(
        Hi, Hp, plan,
        step_fn=lambda s: trotter_step(Hi, Hp, plan, s),
        method="trotter2",
        fidelity_audit=audit,
    )


def trotter_fidelity_audit(
    Hi: HermitianOperator, Hp: HermitianOperator, plan: EvolutionPlan
) -> dict:
    """Per-step and whole-product fidelities of the split against exact steps.

    Returns {"per_step": [F_0..F_S], "overall": F(prod U_s, prod U'_s)}.
    """
    _check_pair(Hi, Hp)
    dim = Hi.dim
    exact_prod = np.eye(dim, dtype=complex)
    split_prod = np.eye(dim, dtype=complex)
    per_step = []
    for s in range(plan.S + 1):
        U = exact_step(Hi, Hp, plan, s)
        V = trotter_step(Hi, Hp, plan, s)
        per_step.append(operator_fidelity(U, V))
        exact_prod = U @ exact_prod
        split_prod = V @ split_prod
    return {
        "per_step": per_step,
        "overall": operator_fidelity(exact_prod, split_prod),
    }
