"""
spectral.py — Exact diagonalization and gap tracking

Dense Hermitian eigendecomposition (scipy.linalg.eigh), projectors onto the
degenerate ground set, and the gap profile Δ(s) of an interpolated Hamiltonian.

The gap is measured from the degenerate ground *set* to the first level above it,
because the computation lives inside the ground space and excitation out of it is
the error channel.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import linalg

from .errors import DomainError, StructuralError
from .hamiltonian import TimeDependentHamiltonian
from .pauli import max_entry

log = logging.getLogger(__name__)

HERMITIAN_INPUT_TOL = 1e-10
DEFAULT_DEGENERACY_TOL = 1e-9

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def _as_hermitian(op: np.ndarray) -> np.ndarray:
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise StructuralError(f"Expected a square matrix, got shape {op.shape}.")
    if max_entry(op - op.conj().T) > HERMITIAN_INPUT_TOL:
        raise DomainError(f"Matrix is not Hermitian to {HERMITIAN_INPUT_TOL}.")
    # real symmetric input takes the faster real solver
    if np.iscomplexobj(op) and not np.any(op.imag):
        return op.real
    return op


@dataclass(frozen=True)
class SpectrumResult:
    """
    Ascending eigenvalues with orthonormal eigenvectors (columns).
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def spectrum(op: np.ndarray) -> SpectrumResult:
    """
    Full eigendecomposition of a Hermitian matrix.

    Raises:
        DomainError: If `op` is not Hermitian to 1e-10.
    """
    values, vectors = linalg.eigh(_as_hermitian(op))
    return SpectrumResult(values, vectors)


def ground_space(op: np.ndarray, tol: float = DEFAULT_DEGENERACY_TOL) -> tuple[float, np.ndarray]:
    """
    Ground energy and an orthonormal basis (columns) of every eigenvector within
    `tol` of the minimum eigenvalue.
    """
    if tol <= 0:
        raise DomainError(f"Degeneracy tolerance must be positive, got {tol}.")
    result = spectrum(op)
    degeneracy = int(np.count_nonzero(result.eigenvalues < result.ground_energy + tol))
    return result.ground_energy, result.eigenvectors[:, :degeneracy]


def ground_projector(op: np.ndarray, tol: float = DEFAULT_DEGENERACY_TOL) -> tuple[np.ndarray, int]:
    """
    Projector onto the degenerate ground set.

    Args:
        op (np.ndarray): Hermitian matrix.
        tol (float): Energy window above the minimum counted as degenerate.

    Returns:
        tuple: (projector, degeneracy).

    Raises:
        DomainError: If tol ≤ 0 or `op` is not Hermitian.
    """
    _, basis = ground_space(op, tol)
    return basis @ basis.conj().T, basis.shape[1]


def max_off_diagonal(op: np.ndarray) -> float:
    """Largest |entry| off the diagonal; zero for operators diagonal in the computational basis."""
    op = np.asarray(op)
    return max_entry(op - np.diag(np.diag(op)))


# --- Gap profile ---
@dataclass(frozen=True)
class GapSample:
    s: float
    gap: float
    ground_energy: float
    ground_degeneracy: int


@dataclass(frozen=True)
class GapProfile:
    """
    Sampled Δ(s) with its refined minimum.

    Attributes:
        samples (tuple[GapSample, ...]): One entry per grid point, ascending s.
        minimum (tuple[float, float]): (s*, Δ*), never above any sampled gap.
        level_crossings (tuple[tuple[float, float], ...]): Adjacent sample pairs whose
            ground degeneracy differs.
    """
    samples: tuple[GapSample, ...]
    minimum: tuple[float, float]
    level_crossings: tuple[tuple[float, float], ...] = ()

    @property
    def min_s(self) -> float:
        return self.minimum[0]

    @property
    def min_gap(self) -> float:
        return self.minimum[1]

    def gaps(self) -> np.ndarray:
        return np.array([sample.gap for sample in self.samples])


def _gap_from_eigenvalues(values: np.ndarray, tol: float) -> tuple[float, float, int]:
    ground = float(values[0])
    degeneracy = int(np.count_nonzero(values < ground + tol))
    if degeneracy == len(values):
        return 0.0, ground, degeneracy
    return float(values[degeneracy] - ground), ground, degeneracy


def gap_at(hamiltonian: TimeDependentHamiltonian, s: float, tol: float = DEFAULT_DEGENERACY_TOL) -> GapSample:
    """Gap, ground energy and ground degeneracy of H(s)."""
    values = linalg.eigh(_as_hermitian(hamiltonian.matrix(s)), eigvals_only=True)
    gap, ground, degeneracy = _gap_from_eigenvalues(values, tol)
    return GapSample(float(s), gap, ground, degeneracy)


def golden_section_minimize(func, a: float, b: float, tol: float = 1e-6) -> tuple[float, float]:
    """
    Golden-section search for the minimum of a unimodal `func` on [a, b].

    Shrinks the bracket until it is shorter than `tol` and returns the best
    evaluated point as (x, func(x)).
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, func(x)

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = func(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = func(d)

    return (c, yc) if yc < yd else (d, yd)


def gap_profile(
        hamiltonian: TimeDependentHamiltonian,
        grid_points: int = 101,
        refine_tol: float = 1e-6,
        degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
        workers: int | None = None,
) -> GapProfile:
    """
    Samples Δ(s) on a uniform grid and refines its minimum.

    The minimum is bracketed by the neighbours of the smallest sample and refined
    by golden-section search until the bracket is shorter than `refine_tol`.
    Changes of ground degeneracy between neighbouring samples are reported as
    level crossings (logged as warnings), not raised.

    Args:
        hamiltonian (TimeDependentHamiltonian): The sweep to analyze.
        grid_points (int): Number of samples on [0, 1], at least 11.
        refine_tol (float): Target width of the refined s-bracket.
        degeneracy_tol (float): Energy window of the ground set.
        workers (int | None): Thread pool size for sampling; results stay keyed by s.

    Returns:
        GapProfile: Samples, refined minimum and level-crossing flags.

    Raises:
        DomainError: If grid_points < 11.
    """
    if grid_points < 11:
        raise DomainError(f"A gap profile needs at least 11 grid points, got {grid_points}.")
    grid = np.linspace(0.0, 1.0, grid_points)

    def sample(s):
        return gap_at(hamiltonian, float(s), degeneracy_tol)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = tuple(pool.map(sample, grid))
    else:
        samples = tuple(sample(s) for s in grid)

    crossings = tuple(
        (left.s, right.s) for left, right in zip(samples, samples[1:])
        if left.ground_degeneracy != right.ground_degeneracy
    )
    for left, right in crossings:
        log.warning(f"[Gap] Grundzustands-Entartung ändert sich zwischen s={left:.4f} und s={right:.4f}.")

    gaps = np.array([item.gap for item in samples])
    i = int(np.argmin(gaps))
    best = (samples[i].s, samples[i].gap)
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
    s_ref, gap_ref = golden_section_minimize(lambda s: sample(s).gap, lo, hi, refine_tol)
    if gap_ref < best[1]:
        best = (float(s_ref), float(gap_ref))

    log.debug(f"[Gap] Minimum Δ*={best[1]:.10f} bei s*={best[0]:.6f}.")
    return GapProfile(samples, best, crossings)
