"""
dynamics.py — State vectors, Schrödinger propagation and run metrics

Propagates ψ(0) under H(s), s = t/T, with one exact exponential of the midpoint
Hamiltonian per step:

    ψ_{k+1} = exp(−i·H(s_k + ½Δs)·Δt) ψ_k

The exponential is taken from the eigendecomposition of H (default) or from
scipy.linalg.expm. Both are unitary to rounding; the norm is checked to 1e-12, never rescaled.

Metrics:
    • fidelity |⟨φ|ψ⟩|², insensitive to global phase
    • leakage 1 − ⟨ψ|P|ψ⟩ out of a ground projector P
    • orthogonal residual ‖ψ − ⟨φ|ψ⟩φ‖²
"""

from collections.abc import Mapping
from dataclasses import dataclass
from functools import reduce
import logging
import math

import numpy as np
from scipy import linalg

from .errors import ConsistencyError, DomainError, ParseError, QubitIndexError, StructuralError
from .hamiltonian import GateSpec, TimeDependentHamiltonian
from .models import PropagationConfig

log = logging.getLogger(__name__)

NORM_TOL = 1e-10
NORM_DRIFT_TOL = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_BASIS_LABELS = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex),
    "-": np.array([_SQRT_HALF, -_SQRT_HALF], dtype=complex),
}


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Normalized amplitudes over 2^n basis states (qubit 1 = most significant bit).

    Raises:
        StructuralError: If the length is not a power of two.
        DomainError: If the 2-norm differs from 1 by more than 1e-10.
    """
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        size = amplitudes.size
        if size < 2 or size & (size - 1):
            raise StructuralError(f"State of length {size} is not a qubit register.")
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"State norm is {norm}, expected 1.")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise DomainError("Cannot normalize the zero vector.")
        return cls(amplitudes / norm)

    @classmethod
    def basis(cls, label: str) -> "StateVector":
        """
        Product state from one character per qubit over {0, 1, +, -}, e.g. "+1".

        Raises:
            ParseError: On any other character (names the 1-based position).
        """
        if not label:
            raise ParseError("Empty state label.")
        for position, char in enumerate(label, start=1):
            if char not in _BASIS_LABELS:
                raise ParseError(f"Invalid state character '{char}' at position {position}.", position)
        return cls(reduce(np.kron, (_BASIS_LABELS[char] for char in label)))

    @classmethod
    def from_amplitudes(cls, alpha: complex, beta: complex) -> "StateVector":
        """α|0⟩ + β|1⟩, renormalized."""
        return cls.normalized([alpha, beta])

    @classmethod
    def bell(cls) -> "StateVector":
        """|Φ⟩ = (|00⟩ + |11⟩)/√2."""
        return cls(np.array([_SQRT_HALF, 0, 0, _SQRT_HALF], dtype=complex))

    @classmethod
    def singlet(cls) -> "StateVector":
        """(|01⟩ − |10⟩)/√2."""
        return cls(np.array([0, _SQRT_HALF, -_SQRT_HALF, 0], dtype=complex))

    @classmethod
    def random(cls, n_qubits: int, rng: np.random.Generator) -> "StateVector":
        """Haar-random state from complex Gaussian amplitudes."""
        dim = 2 ** n_qubits
        return cls.normalized(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))

    def tensor(self, *others: "StateVector") -> "StateVector":
        return StateVector(reduce(np.kron, (other.amplitudes for other in others), self.amplitudes))

    def as_pairs(self) -> list[tuple[float, float]]:
        """[re, im] per amplitude, for JSON reports."""
        return [(float(a.real), float(a.imag)) for a in self.amplitudes]


def place(pieces: Mapping[tuple[int, ...], StateVector], n_qubits: int) -> StateVector:
    """
    Product state with each piece placed on its (1-based) qubits.

    Example:
        place({(1, 2): StateVector.bell(), (3,): psi}, 3) == |Φ⟩₁₂ ⊗ ψ₃

    Raises:
        QubitIndexError: If the qubit tuples do not partition 1..n_qubits exactly.
        StructuralError: If a piece's size does not match its qubit tuple.
    """
    order = [q for qubits in pieces for q in qubits]
    if sorted(order) != list(range(1, n_qubits + 1)):
        raise QubitIndexError(f"Pieces cover qubits {order}, expected each of 1..{n_qubits} once.")
    for qubits, piece in pieces.items():
        if piece.n_qubits != len(qubits):
            raise StructuralError(f"Piece on qubits {qubits} has {piece.n_qubits} qubits.")
    product = reduce(np.kron, (piece.amplitudes for piece in pieces.values()))
    axes = [order.index(q) for q in range(1, n_qubits + 1)]
    return StateVector(np.transpose(product.reshape([2] * n_qubits), axes).reshape(-1))


def apply_gate(state: StateVector, gate_spec: GateSpec) -> StateVector:
    """
    Applies a gate to its target qubits of `state`.

    Raises:
        QubitIndexError: If a target lies outside the state's register.
    """
    n = state.n_qubits
    if max(gate_spec.targets) > n:
        raise QubitIndexError(f"Gate targets {gate_spec.targets} outside register of {n} qubits.")
    k = gate_spec.n_targets
    axes = [q - 1 for q in gate_spec.targets]
    tensor = state.amplitudes.reshape([2] * n)
    matrix = gate_spec.matrix.reshape([2] * (2 * k))
    rotated = np.tensordot(matrix, tensor, axes=(list(range(k, 2 * k)), axes))
    return StateVector(np.moveaxis(rotated, list(range(k)), axes).reshape(-1))


def _vector(state) -> np.ndarray:
    return state.amplitudes if isinstance(state, StateVector) else np.asarray(state, dtype=complex).reshape(-1)


def fidelity(psi, phi) -> float:
    """
    |⟨φ|ψ⟩|² clipped to [0, 1]; symmetric in its arguments.

    Raises:
        StructuralError: If the dimensions differ.
    """
    a, b = _vector(psi), _vector(phi)
    if a.size != b.size:
        raise StructuralError(f"Cannot compare states of dimension {a.size} and {b.size}.")
    return float(min(1.0, max(0.0, abs(np.vdot(b, a)) ** 2)))


def orthogonal_residual(psi, phi) -> float:
    """‖ψ − ⟨φ|ψ⟩φ‖², the weight of ψ outside the ray of φ."""
    a, b = _vector(psi), _vector(phi)
    if a.size != b.size:
        raise StructuralError(f"Cannot compare states of dimension {a.size} and {b.size}.")
    rest = a - np.vdot(b, a) * b
    return float(np.vdot(rest, rest).real)


def leakage(psi, projector: np.ndarray) -> float:
    """
    1 − ⟨ψ|P|ψ⟩ clipped to [0, 1].

    Raises:
        StructuralError: If P does not match ψ's dimension.
    """
    a = _vector(psi)
    if projector.shape != (a.size, a.size):
        raise StructuralError(f"Projector of shape {projector.shape} does not act on dimension {a.size}.")
    inside = float(np.vdot(a, projector @ a).real)
    return float(min(1.0, max(0.0, 1.0 - inside)))


def _step_spectral(matrix: np.ndarray, psi: np.ndarray, dt: float) -> np.ndarray:
    if not np.any(matrix.imag):
        matrix = matrix.real
    values, vectors = linalg.eigh(matrix)
    return vectors @ (np.exp(-1j * values * dt) * (vectors.conj().T @ psi))


def _step_expm(matrix: np.ndarray, psi: np.ndarray, dt: float) -> np.ndarray:
    return linalg.expm(-1j * dt * matrix) @ psi


_STEPPERS = {"spectral": _step_spectral, "expm": _step_expm}


def propagate(hamiltonian: TimeDependentHamiltonian, psi0: StateVector, cfg: PropagationConfig) -> StateVector:
    """
    Integrates i·dψ/dt = H(t/T)·ψ from t = 0 to T.

    Each of the `cfg.steps` steps applies exp(−i·H(s_mid)·Δt) at the step's
    midpoint s, a second-order scheme in Δt.

    Args:
        hamiltonian (TimeDependentHamiltonian): The sweep.
        psi0 (StateVector): Initial state on the same register.
        cfg (PropagationConfig): T, step count and exponential method.

    Returns:
        StateVector: ψ(T).

    Raises:
        StructuralError: If ψ0 and H act on different dimensions.
        ConsistencyError: If the norm drifts by more than 1e-12.
    """
    if psi0.dim != hamiltonian.dim:
        raise StructuralError(f"State of dimension {psi0.dim} does not match H of dimension {hamiltonian.dim}.")
    step = _STEPPERS[cfg.method]
    dt = cfg.dt
    psi = psi0.amplitudes.copy()
    log.debug(f"[Propagation] Starte Propagation: T={cfg.total_time}, Schritte={cfg.steps}, Methode={cfg.method}.")
    for k in range(cfg.steps):
        s_mid = (k + 0.5) / cfg.steps
        psi = step(hamiltonian.matrix(s_mid), psi, dt)
    drift = abs(float(np.linalg.norm(psi)) - float(np.linalg.norm(psi0.amplitudes)))
    if drift > NORM_DRIFT_TOL:
        raise ConsistencyError(f"Norm drifted by {drift:.3e} during propagation.")
    return StateVector(psi)


def random_states(n_qubits: int, count: int, seed: int) -> list[StateVector]:
    """`count` reproducible random states from one seeded generator."""
    rng = np.random.default_rng(seed)
    return [StateVector.random(n_qubits, rng) for _ in range(count)]
