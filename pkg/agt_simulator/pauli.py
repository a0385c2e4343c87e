"""
pauli.py — Pauli strings and their dense-operator realizations

This module is the representation layer of the simulator. Every Hamiltonian of the
scheme is a real-weighted sum of Pauli strings; other modules build, conjugate and
diagonalize them through the types defined here.

Conventions:
    • Qubit 1 is the leftmost letter and the most significant bit of a basis index.
    • Coefficients are real. Complex coefficients are rejected at construction.
    • Realization is dense (at most 2^8 x 2^8 here).

Types:
    - PauliTerm: coefficient-weighted tensor product of I/X/Y/Z letters.
    - PauliSum: list of terms on a common register; the universal Hamiltonian type.
    - LogicalFrame: the six encoded operators of the three-qubit teleportation code.
"""

from dataclasses import dataclass
from functools import lru_cache, reduce
from collections.abc import Iterable, Mapping
import logging
import math
import numbers

import numpy as np

from .errors import ConsistencyError, DomainError, ParseError, QubitIndexError, StructuralError

log = logging.getLogger(__name__)

PAULI_LETTERS = "IXYZ"
HERMITIAN_TOL = 1e-12

_SINGLE_QUBIT = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def single_qubit_matrix(letter: str) -> np.ndarray:
    """Returns a copy of the 2x2 matrix for one Pauli letter."""
    return _SINGLE_QUBIT[letter].copy()


@dataclass(frozen=True)
class PauliTerm:
    """
    A single Pauli string with a real coefficient.

    Attributes:
        letters (str): One letter from I/X/Y/Z per qubit, qubit 1 first.
        coefficient (float): Real weight (energy units inside a Hamiltonian).
    """
    letters: str
    coefficient: float = 1.0

    def __post_init__(self):
        if not self.letters:
            raise StructuralError("A Pauli term needs at least one qubit.")
        for position, letter in enumerate(self.letters, start=1):
            if letter not in PAULI_LETTERS:
                raise ParseError(f"Invalid Pauli letter '{letter}' at position {position}.", position)
        if isinstance(self.coefficient, (complex, np.complexfloating)):
            raise DomainError(f"Complex coefficient {self.coefficient!r} rejected; Pauli sums are real-weighted.")
        if not isinstance(self.coefficient, numbers.Real):
            raise DomainError(f"Coefficient must be a real number, got {self.coefficient!r}.")
        coefficient = float(self.coefficient)
        if not math.isfinite(coefficient):
            raise DomainError(f"Coefficient must be finite, got {coefficient}.")
        object.__setattr__(self, "coefficient", coefficient)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def support(self) -> tuple[int, ...]:
        """1-based indices of the qubits carrying a non-identity letter."""
        return tuple(i for i, letter in enumerate(self.letters, start=1) if letter != "I")

    @property
    def arity(self) -> int:
        return len(self.support)

    def scaled(self, factor: float) -> "PauliTerm":
        return PauliTerm(self.letters, self.coefficient * factor)

    def __str__(self):
        return f"{self.coefficient:+g}*{self.letters}"


def parse_pauli(label: str, coefficient: float = 1.0) -> PauliTerm:
    """
    Parses a Pauli label such as "XXI" into a term.

    Args:
        label (str): Characters from I/X/Y/Z, qubit 1 leftmost.
        coefficient (float): Real weight of the term.

    Returns:
        PauliTerm: The parsed term.

    Raises:
        ParseError: If a character is not a Pauli letter (names the 1-based position).
    """
    return PauliTerm(label, coefficient)


def pauli_on(n_qubits: int, letters: Mapping[int, str], coefficient: float = 1.0) -> PauliTerm:
    """
    Builds a term from positional letters, e.g. pauli_on(3, {2: "X", 3: "X"}) == IXX.

    Raises:
        QubitIndexError: If an index lies outside 1..n_qubits.
    """
    chars = ["I"] * n_qubits
    for qubit, letter in letters.items():
        if not 1 <= qubit <= n_qubits:
            raise QubitIndexError(f"Qubit {qubit} outside register of {n_qubits} qubits.")
        chars[qubit - 1] = letter
    return PauliTerm("".join(chars), coefficient)


@dataclass(frozen=True)
class PauliSum:
    """
    Real-weighted sum of Pauli strings on a register of `n_qubits` qubits.

    An empty term list is a valid value (e.g. no static terms), but it cannot be realized.
    """
    terms: tuple[PauliTerm, ...]
    n_qubits: int

    def __post_init__(self):
        terms = tuple(self.terms)
        if self.n_qubits < 1:
            raise StructuralError(f"Register size must be positive, got {self.n_qubits}.")
        for term in terms:
            if term.n_qubits != self.n_qubits:
                raise StructuralError(
                    f"Term {term.letters} has {term.n_qubits} qubits, sum declares {self.n_qubits}."
                )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_terms(cls, terms: Iterable[PauliTerm]) -> "PauliSum":
        terms = tuple(terms)
        if not terms:
            raise StructuralError("Cannot infer the register size of an empty term list.")
        return cls(terms, terms[0].n_qubits)

    @classmethod
    def from_labels(cls, pairs: Iterable[tuple[str, float]]) -> "PauliSum":
        return cls.from_terms(parse_pauli(label, coefficient) for label, coefficient in pairs)

    @classmethod
    def empty(cls, n_qubits: int) -> "PauliSum":
        return cls((), n_qubits)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise StructuralError(f"Cannot add sums on {self.n_qubits} and {other.n_qubits} qubits.")
        return PauliSum(self.terms + other.terms, self.n_qubits)

    def scaled(self, factor: float) -> "PauliSum":
        return PauliSum(tuple(term.scaled(factor) for term in self.terms), self.n_qubits)

    def simplify(self, tol: float = HERMITIAN_TOL) -> "PauliSum":
        """Merges identical strings (first-occurrence order) and drops |c| < tol."""
        merged: dict[str, float] = {}
        for term in self.terms:
            merged[term.letters] = merged.get(term.letters, 0.0) + term.coefficient
        return PauliSum(
            tuple(PauliTerm(letters, c) for letters, c in merged.items() if abs(c) >= tol),
            self.n_qubits,
        )

    def to_pairs(self) -> list[tuple[str, float]]:
        return [(term.letters, term.coefficient) for term in self.terms]

    def __str__(self):
        return " ".join(str(term) for term in self.terms) or "0"


@lru_cache(maxsize=256)
def _string_matrix(letters: str) -> np.ndarray:
    matrix = reduce(np.kron, (_SINGLE_QUBIT[letter] for letter in letters))
    matrix.setflags(write=False)
    return matrix


def term_matrix(term: PauliTerm) -> np.ndarray:
    """Dense matrix of a single term, coefficient included."""
    return term.coefficient * _string_matrix(term.letters)


def max_entry(matrix: np.ndarray) -> float:
    """Max-entry norm, the norm used for every tolerance in this package."""
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def realize(pauli_sum: PauliSum) -> np.ndarray:
    """
    Realizes a Pauli sum as a dense 2^n x 2^n complex matrix.

    Args:
        pauli_sum (PauliSum): Non-empty sum.

    Returns:
        np.ndarray: Σ c_k ⊗_j P_{k,j}.

    Raises:
        StructuralError: If the sum has no terms.
        ConsistencyError: If the result is not Hermitian to 1e-12 (cannot happen for real weights).
    """
    if not pauli_sum.terms:
        raise StructuralError("Cannot realize an empty Pauli sum.")
    dim = 2 ** pauli_sum.n_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    for term in pauli_sum.terms:
        matrix += term.coefficient * _string_matrix(term.letters)
    if max_entry(matrix - matrix.conj().T) > HERMITIAN_TOL:
        raise ConsistencyError("Realized Pauli sum is not Hermitian.")
    return matrix


def commutes(a: PauliTerm, b: PauliTerm) -> bool:
    """
    Terms commute iff the number of sites where both letters are non-identity
    and differ is even.

    Raises:
        StructuralError: If the terms act on registers of different size.
    """
    if a.n_qubits != b.n_qubits:
        raise StructuralError(f"Cannot compare {a.letters} and {b.letters}: lengths differ.")
    clashes = sum(1 for x, y in zip(a.letters, b.letters) if x != y and x != "I" and y != "I")
    return clashes % 2 == 0


def diagonal_sum(values: Iterable[float], tol: float = HERMITIAN_TOL) -> PauliSum:
    """
    Expands a real diagonal operator on the I/Z string basis.

    Args:
        values: Diagonal entries in basis-index order; length must be a power of two.

    Returns:
        PauliSum: Sum of I/Z strings whose realization is diag(values).
    """
    values = np.asarray(list(values), dtype=float)
    n_qubits = int(round(math.log2(len(values)))) if len(values) else 0
    if n_qubits < 1 or 2 ** n_qubits != len(values):
        raise StructuralError(f"Diagonal of length {len(values)} is not a qubit register.")
    indices = np.arange(len(values))
    terms = []
    for mask in range(len(values)):
        parity = np.array([bin(mask & x).count("1") % 2 for x in indices])
        coefficient = float(np.mean(values * (1 - 2 * parity)))
        if abs(coefficient) < tol:
            continue
        letters = "".join("Z" if (mask >> (n_qubits - j)) & 1 else "I" for j in range(1, n_qubits + 1))
        terms.append(PauliTerm(letters, coefficient))
    if not terms:
        terms.append(PauliTerm("I" * n_qubits, 0.0))
    return PauliSum(tuple(terms), n_qubits)


@dataclass(frozen=True)
class LogicalFrame:
    """
    Encoded operators of the three-qubit teleportation code.

    Attributes:
        x (tuple): X̄₁, X̄₂, X̄₃.
        z (tuple): Z̄₁, Z̄₂, Z̄₃.
    """
    x: tuple[PauliTerm, PauliTerm, PauliTerm]
    z: tuple[PauliTerm, PauliTerm, PauliTerm]

    @classmethod
    def standard(cls) -> "LogicalFrame":
        return cls(
            x=(parse_pauli("XXX"), parse_pauli("IXX"), parse_pauli("XXI")),
            z=(parse_pauli("ZZZ"), parse_pauli("ZZI"), parse_pauli("IZZ")),
        )

    def pattern_residuals(self) -> list[tuple[str, float]]:
        """
        Matrix-level residuals of the encoded algebra.

        For X̄_i, Z̄_j the residual is ‖XZ + ZX‖ when i = j and ‖XZ − ZX‖ otherwise;
        X̄'s among themselves and Z̄'s among themselves must commute. Zero everywhere
        means the frame is a valid set of three logical qubits.
        """
        residuals = []
        for i, xi in enumerate(self.x, start=1):
            for j, zj in enumerate(self.z, start=1):
                a, b = term_matrix(xi), term_matrix(zj)
                sign = 1 if i == j else -1
                residuals.append((f"X{i}Z{j}", max_entry(a @ b + sign * (b @ a))))
        for label, ops in (("X", self.x), ("Z", self.z)):
            for i in range(3):
                for j in range(i + 1, 3):
                    a, b = term_matrix(ops[i]), term_matrix(ops[j])
                    residuals.append((f"{label}{i + 1}{label}{j + 1}", max_entry(a @ b - b @ a)))
        return residuals
