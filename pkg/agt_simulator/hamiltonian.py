"""
hamiltonian.py — Interpolated Hamiltonians, gates and pair couplings

This module turns Pauli sums into the time-dependent Hamiltonians that the
adiabatic protocols sweep through:

    H(s) = f(s)·H_initial + g(s)·H_final + static_terms,   s = t/T ∈ [0, 1]

Responsibilities:
    • Schedules (linear, smoothstep) with endpoint and monotonicity checks
    • The gate library (I, H, X, Y, Z, A, A†, B, B†, CZ) as validated unitaries
    • Unitary conjugation of Pauli sums, re-expanded in the Pauli basis
    • The standard −ω(XX+ZZ) and isotropic +ω(XX+YY+ZZ) pair couplings
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from collections.abc import Callable
import logging
import math

import numpy as np

from .errors import ConsistencyError, DomainError, QubitIndexError, StructuralError, UnsupportedGateError
from .pauli import (
    HERMITIAN_TOL,
    PAULI_LETTERS,
    PauliSum,
    PauliTerm,
    max_entry,
    pauli_on,
    realize,
    single_qubit_matrix,
)

log = logging.getLogger(__name__)

UNITARY_TOL = 1e-12
S_TOL = 1e-12


# --- Schedules ---
@dataclass(frozen=True)
class Schedule:
    """
    Envelope pair turning H_initial off (f) and H_final on (g).

    Attributes:
        f (Callable): Map [0,1] → [0,1] with f(0)=1, f(1)=0, non-increasing.
        g (Callable): Map [0,1] → [0,1] with g(0)=0, g(1)=1, non-decreasing.
        tag (str): Descriptor written to protocol files ("linear", "smoothstep").
    """
    f: Callable[[float], float]
    g: Callable[[float], float]
    tag: str = "custom"

    def check(self, tol: float = 1e-12, grid_step: float = 1e-3) -> "Schedule":
        """
        Verifies the endpoint and monotonicity invariants.

        Returns:
            Schedule: self, so the call can be chained.

        Raises:
            DomainError: If an endpoint is off by more than `tol` or an envelope
                moves the wrong way on the grid.
        """
        endpoints = {"f(0)": (self.f(0.0), 1.0), "f(1)": (self.f(1.0), 0.0),
                     "g(0)": (self.g(0.0), 0.0), "g(1)": (self.g(1.0), 1.0)}
        for name, (value, expected) in endpoints.items():
            if abs(value - expected) > tol:
                raise DomainError(f"Schedule '{self.tag}': {name}={value}, expected {expected}.")
        grid = np.arange(0.0, 1.0 + grid_step / 2, grid_step)
        f_values = np.array([self.f(s) for s in grid])
        g_values = np.array([self.g(s) for s in grid])
        if np.any(np.diff(f_values) > tol) or np.any(np.diff(g_values) < -tol):
            raise DomainError(f"Schedule '{self.tag}' is not monotone on a {grid_step} grid.")
        return self


def _smoothstep(s: float) -> float:
    return s * s * (3.0 - 2.0 * s)


LINEAR = Schedule(f=lambda s: 1.0 - s, g=lambda s: s, tag="linear")
SMOOTHSTEP = Schedule(f=lambda s: 1.0 - _smoothstep(s), g=_smoothstep, tag="smoothstep")

SCHEDULES = {schedule.tag: schedule for schedule in (LINEAR, SMOOTHSTEP)}


def schedule_from_tag(tag: str) -> Schedule:
    try:
        return SCHEDULES[tag]
    except KeyError:
        raise DomainError(f"Unknown schedule '{tag}'. Known: {', '.join(SCHEDULES)}.") from None


# --- Gates ---
_SQRT2 = math.sqrt(2.0)

GATE_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2,
    "X": single_qubit_matrix("X"),
    "Y": single_qubit_matrix("Y"),
    "Z": single_qubit_matrix("Z"),
    # A² = i(X+Z)/√2, a square root of Hadamard up to phase
    "A": 0.5 * np.array([[1 + 1j * _SQRT2, 1], [1, -1 + 1j * _SQRT2]], dtype=complex),
    # B⁴ = Z
    "B": np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    # control is the first target
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}
GATE_MATRICES["A†"] = GATE_MATRICES["A"].conj().T
GATE_MATRICES["B†"] = GATE_MATRICES["B"].conj().T

GATE_ALIASES = {"Adg": "A†", "Bdg": "B†", "Hadamard": "H"}


@dataclass(frozen=True, eq=False)
class GateSpec:
    """
    A named unitary acting on specific qubits of a register.

    Attributes:
        name (str): Library name ("A", "CZ", ...) or "custom".
        matrix (np.ndarray): Unitary of dimension 2^len(targets).
        targets (tuple[int, ...]): 1-based qubit indices; the first target is the
            most significant factor of `matrix`.
    """
    name: str
    matrix: np.ndarray
    targets: tuple[int, ...] = (1,)

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        targets = tuple(int(q) for q in self.targets)
        dim = 2 ** len(targets)
        if matrix.shape != (dim, dim):
            raise StructuralError(
                f"Gate '{self.name}' has shape {matrix.shape} but targets {targets} need {dim}x{dim}."
            )
        if len(set(targets)) != len(targets) or min(targets) < 1:
            raise QubitIndexError(f"Gate '{self.name}' has invalid targets {targets}.")
        if max_entry(matrix @ matrix.conj().T - np.eye(dim)) > UNITARY_TOL:
            raise DomainError(f"Gate '{self.name}' is not unitary to {UNITARY_TOL}.")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "targets", targets)

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    def on(self, *targets: int) -> "GateSpec":
        return GateSpec(self.name, self.matrix, tuple(targets))

    def dagger(self) -> "GateSpec":
        names = {"A": "A†", "A†": "A", "B": "B†", "B†": "B"}
        name = names.get(self.name, self.name if self.name in ("I", "H", "X", "Y", "Z", "CZ", "CNOT") else "custom")
        return GateSpec(name, self.matrix.conj().T, self.targets)

    def __repr__(self):
        return f"GateSpec({self.name!r}, targets={self.targets})"


def gate(name: str, *targets: int) -> GateSpec:
    """
    Looks up a library gate and places it on `targets` (defaults to qubit 1, or 1,2 for CZ and CNOT).

    Raises:
        UnsupportedGateError: If `name` is not in the library.
    """
    key = GATE_ALIASES.get(name, name)
    if key not in GATE_MATRICES:
        raise UnsupportedGateError(f"Unknown gate '{name}'. Known: {', '.join(GATE_MATRICES)}.")
    matrix = GATE_MATRICES[key]
    if not targets:
        targets = (1, 2) if matrix.shape[0] == 4 else (1,)
    return GateSpec(key, matrix, tuple(targets))


# --- Pair couplings ---
def _check_pair(a: int, b: int, n_qubits: int):
    if a == b:
        raise QubitIndexError(f"A pair coupling needs two distinct qubits, got {a} and {b}.")
    for q in (a, b):
        if not 1 <= q <= n_qubits:
            raise QubitIndexError(f"Qubit {q} outside register of {n_qubits} qubits.")


def standard_pair(a: int, b: int, omega: float, n_qubits: int) -> PauliSum:
    """
    The teleportation coupling −ω(X_a X_b + Z_a Z_b).

    Its ground state on (a, b) is the Bell pair (|00⟩+|11⟩)/√2 at energy −2ω.

    Raises:
        QubitIndexError: If a = b or either index is out of range.
    """
    _check_pair(a, b, n_qubits)
    return PauliSum((
        pauli_on(n_qubits, {a: "X", b: "X"}, -omega),
        pauli_on(n_qubits, {a: "Z", b: "Z"}, -omega),
    ), n_qubits)


def isotropic_pair(a: int, b: int, omega: float, n_qubits: int) -> PauliSum:
    """Antiferromagnetic exchange +ω(X_a X_b + Y_a Y_b + Z_a Z_b); singlet ground state at −3ω."""
    _check_pair(a, b, n_qubits)
    return PauliSum(tuple(
        pauli_on(n_qubits, {a: letter, b: letter}, omega) for letter in "XYZ"
    ), n_qubits)


# --- Conjugation ---
def _local_expansion(letters: str, matrix: np.ndarray) -> list[tuple[str, float]]:
    """Expands U·P·U† (P given by `letters` on the gate's targets) in local Pauli strings."""
    k = len(letters)
    local = single_qubit_matrix(letters[0])
    for letter in letters[1:]:
        local = np.kron(local, single_qubit_matrix(letter))
    rotated = matrix @ local @ matrix.conj().T
    expansion = []
    for candidate in product(PAULI_LETTERS, repeat=k):
        basis = single_qubit_matrix(candidate[0])
        for letter in candidate[1:]:
            basis = np.kron(basis, single_qubit_matrix(letter))
        weight = np.trace(basis @ rotated) / 2 ** k
        if abs(weight.imag) > HERMITIAN_TOL:
            raise ConsistencyError(f"Conjugated string has non-real weight {weight} on {''.join(candidate)}.")
        if abs(weight.real) >= HERMITIAN_TOL:
            expansion.append(("".join(candidate), float(weight.real)))
    return expansion


def conjugate(h: PauliSum, gate_spec: GateSpec) -> PauliSum:
    """
    Computes U·h·U† and re-expands it in the Pauli basis.

    The rotation is done locally on the gate's targets for each term and
    projected back with trace inner products; weights below 1e-12 are dropped.

    Args:
        h (PauliSum): Hamiltonian to rotate.
        gate_spec (GateSpec): Unitary with targets inside h's register.

    Returns:
        PauliSum: Isospectral sum whose realization equals U·realize(h)·U†.

    Raises:
        QubitIndexError: If a target lies outside h's register.
        ConsistencyError: If a weight comes out non-real.
    """
    for q in gate_spec.targets:
        if q > h.n_qubits:
            raise QubitIndexError(f"Gate target {q} outside register of {h.n_qubits} qubits.")
    positions = [q - 1 for q in gate_spec.targets]
    cache: dict[str, list[tuple[str, float]]] = {}
    terms = []
    for term in h.terms:
        local = "".join(term.letters[p] for p in positions)
        if local not in cache:
            cache[local] = _local_expansion(local, gate_spec.matrix)
        for replacement, weight in cache[local]:
            chars = list(term.letters)
            for p, letter in zip(positions, replacement):
                chars[p] = letter
            terms.append(PauliTerm("".join(chars), term.coefficient * weight))
    return PauliSum(tuple(terms), h.n_qubits).simplify()


# --- Time-dependent Hamiltonian ---
@dataclass(frozen=True)
class TimeDependentHamiltonian:
    """
    H(s) = f(s)·h_initial + g(s)·h_final + static_terms.

    Attributes:
        h_initial (PauliSum): Hamiltonian switched off by f.
        h_final (PauliSum): Hamiltonian switched on by g.
        schedule (Schedule): Envelope pair, linear by default.
        static_terms (PauliSum | None): Couplings left on for the whole sweep.
    """
    h_initial: PauliSum
    h_final: PauliSum
    schedule: Schedule = LINEAR
    static_terms: PauliSum | None = field(default=None)

    def __post_init__(self):
        n = self.h_initial.n_qubits
        if self.static_terms is None:
            object.__setattr__(self, "static_terms", PauliSum.empty(n))
        for name, part in (("h_final", self.h_final), ("static_terms", self.static_terms)):
            if part.n_qubits != n:
                raise StructuralError(f"{name} acts on {part.n_qubits} qubits, h_initial on {n}.")

    @property
    def n_qubits(self) -> int:
        return self.h_initial.n_qubits

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    @cached_property
    def dense_parts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Realized (h_initial, h_final, static_terms); static is zero when empty."""
        static = realize(self.static_terms) if self.static_terms.terms else np.zeros((self.dim, self.dim), complex)
        return realize(self.h_initial), realize(self.h_final), static

    def at(self, s: float) -> PauliSum:
        """The Pauli sum of H(s), term lists concatenated."""
        s = _check_s(s)
        return (self.h_initial.scaled(self.schedule.f(s))
                + self.h_final.scaled(self.schedule.g(s))
                + self.static_terms)

    def matrix(self, s: float) -> np.ndarray:
        s = _check_s(s)
        initial, final, static = self.dense_parts
        return self.schedule.f(s) * initial + self.schedule.g(s) * final + static


def _check_s(s: float) -> float:
    if not -S_TOL <= s <= 1.0 + S_TOL:
        raise DomainError(f"Scaled time s={s} outside [0, 1].")
    return min(max(float(s), 0.0), 1.0)


def evaluate(hamiltonian: TimeDependentHamiltonian, s: float) -> np.ndarray:
    """
    Dense H(s) = realize(f(s)·h_i + g(s)·h_f + static_terms).

    Raises:
        DomainError: If s lies outside [0, 1].
    """
    return hamiltonian.matrix(s)
