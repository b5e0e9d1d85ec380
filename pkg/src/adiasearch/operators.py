"""Hamiltonian construction and Pauli-string algebra.

Qubit convention: qubit 0 is the least significant bit of the basis index,
so a single-qubit operator A on qubit k of an n-qubit register is
I x ... x A x ... x I with A in the (n-1-k)-th Kronecker slot. Pauli string
labels read most significant qubit first, like ket labels |q1 q0>.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .database import EncodedDatabase
from .errors import (
    DimensionMismatch,
    InputError,
    LengthMismatch,
    NonDiagonalInput,
    SOutOfRange,
)

HERMITICITY_TOL = 1e-12
PAULI_DROP_TOL = 1e-12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class CouplingStrength:
    """Strength g > 0 of the transverse field in the initial Hamiltonian."""

    g: float

    def __post_init__(self):
        if not self.g > 0:
            raise InputError(f"coupling strength must be positive, got {self.g}")

    def __float__(self) -> float:
        return float(self.g)


@dataclass(frozen=True)
class HermitianOperator:
    """Dense complex Hermitian matrix on an n-qubit register."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = 2**self.n_qubits
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (dim, dim):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not match {self.n_qubits} qubits"
            )
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=HERMITICITY_TOL):
            raise InputError("matrix is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def is_diagonal(self, tol: float = 0.0) -> bool:
        off = self.matrix - np.diag(np.diagonal(self.matrix))
        return bool(np.max(np.abs(off)) <= tol) if off.size else True

    def diagonal(self) -> np.ndarray:
        return np.real(np.diagonal(self.matrix)).copy()


@dataclass(frozen=True)
class PauliString:
    """One weighted tensor product of Pauli operators.

    ``axes[k]`` is the axis ('I', 'X', 'Y', 'Z') acting on qubit k, so the
    last list position is the most significant qubit. ``label`` renders the
    conventional string with the most significant qubit leftmost.
    """

    coefficient: float
    axes: tuple[str, ...]

    def __post_init__(self):
        if not np.isfinite(self.coefficient):
            raise InputError("Pauli coefficient must be finite")
        bad = [a for a in self.axes if a not in PAULI_MATRICES]
        if bad:
            raise InputError(f"unknown Pauli axes {bad}")
        object.__setattr__(self, "axes", tuple(self.axes))

    @property
    def label(self) -> str:
        return "".join(reversed(self.axes))

    @classmethod
    def from_label(cls, coefficient: float, label: str) -> "PauliString":
        return cls(coefficient=coefficient, axes=tuple(reversed(label)))

    def matrix(self) -> np.ndarray:
        mats = [PAULI_MATRICES[a] for a in reversed(self.axes)]
        return self.coefficient * reduce(np.kron, mats)


def single_qubit_operator(n: int, qubit: int, axis: str) -> np.ndarray:
    """Dense matrix of one Pauli operator acting on a single qubit."""
    ops = [PAULI_MATRICES["I"]] * n
    ops[n - 1 - qubit] = PAULI_MATRICES[axis]
    return reduce(np.kron, ops)


def database_operator(db: EncodedDatabase) -> HermitianOperator:
    """Diagonal operator whose i-th entry is the value stored at index i."""
    return HermitianOperator(
        n_qubits=db.n_qubits,
        matrix=np.diag(np.array(db.values, dtype=complex)),
    )


def problem_hamiltonian(D: HermitianOperator, target: float) -> HermitianOperator:
    """Search Hamiltonian (D - target*I)^2.

    Diagonal and positive semidefinite; its ground energy is 0 exactly when
    the target matches a stored value, and the ground index is the argmin of
    (value_i - target)^2.
    """
    if not D.is_diagonal():
        raise NonDiagonalInput("database operator must be diagonal")
    shifted = D.diagonal() - target
    return HermitianOperator(n_qubits=D.n_qubits, matrix=np.diag((shifted**2).astype(complex)))


def initial_hamiltonian(n: int, g: CouplingStrength | float) -> HermitianOperator:
    """Transverse-field Hamiltonian g * sum_k X_k with known ground state."""
    if n < 1:
        raise InputError(f"need at least one qubit, got {n}")
    strength = float(g)
    if not strength > 0:
        raise InputError(f"coupling strength must be positive, got {strength}")
    H = np.zeros((2**n, 2**n), dtype=complex)
    for k in range(n):
        H += single_qubit_operator(n, k, "X")
    return HermitianOperator(n_qubits=n, matrix=strength * H)


def interpolate(Hi: HermitianOperator, Hp: HermitianOperator, s: float) -> HermitianOperator:
    """Convex combination (1-s)*Hi + s*Hp of the two endpoint Hamiltonians."""
    if Hi.n_qubits != Hp.n_qubits:
        raise DimensionMismatch(
            f"qubit counts differ: {Hi.n_qubits} vs {Hp.n_qubits}"
        )
    if not 0.0 <= s <= 1.0:
        raise SOutOfRange(f"interpolation parameter {s} outside [0, 1]")
    return HermitianOperator(
        n_qubits=Hi.n_qubits,
        matrix=(1.0 - s) * Hi.matrix + s * Hp.matrix,
    )


def _axes_product(axes: tuple[str, ...]) -> np.ndarray:
    mats = [PAULI_MATRICES[a] for a in reversed(axes)]
    return reduce(np.kron, mats)


def pauli_decompose(H: HermitianOperator) -> list[PauliString]:
    """Expand H over the 4^n Pauli strings, dropping negligible terms.

    Coefficients are Tr(P H) / 2^n; Hermiticity makes them real. Terms with
    |c| < 1e-12 are omitted. Output is ordered by label for reproducibility.
    """
    n = H.n_qubits
    dim = H.dim
    terms: list[PauliString] = []
    for combo in np.ndindex(*(4,) * n):
        # combo runs most significant qubit first; flip to per-qubit order.
        axes = tuple("IXYZ"[c] for c in reversed(combo))
        P = _axes_product(axes)
        coeff = complex(np.trace(P @ H.matrix)) / dim
        if abs(coeff.imag) > 1e-9:
            raise InputError(f"non-real Pauli coefficient {coeff} for {axes}")
        if abs(coeff.real) >= PAULI_DROP_TOL:
            terms.append(PauliString(coefficient=coeff.real, axes=axes))
    return terms


def pauli_compose(terms: list[PauliString], n: int) -> HermitianOperator:
    """Rebuild the dense matrix sum_P c_P * P from a term list."""
    dim = 2**n
    M = np.zeros((dim, dim), dtype=complex)
    for term in terms:
        if len(term.axes) != n:
            raise LengthMismatch(
                f"term {term.label!r} has {len(term.axes)} axes, expected {n}"
            )
        M += term.matrix()
    return HermitianOperator(n_qubits=n, matrix=M)


def operator_to_json(H: HermitianOperator) -> dict:
    """Serializable form: qubit count plus the Pauli expansion."""
    return {
        "n_qubits": H.n_qubits,
        "pauli_terms": [
            {"coeff": t.coefficient, "axes": t.label} for t in pauli_decompose(H)
        ],
    }


def operator_from_json(data: dict) -> HermitianOperator:
    n = int(data["n_qubits"])
    terms = [
        PauliString.from_label(float(t["coeff"]), t["axes"])
        for t in data["pauli_terms"]
    ]
    return pauli_compose(terms, n)
