"""
gadgets.py — Two-body perturbation gadget for the controlled-phase teleportation

The three-body couplings of the two-qubit AGT are replaced by two-body terms on an
encoded qubit. Each logical side (L, R) uses four physical qubits; qubits 3 and 4
are bound into span{|00⟩, |11⟩} by a strong −ω·Z₃Z₄ coupling left on for the whole
sweep, and the weak couplings have strength λ = r·ω.

Qubit layout (1-based register index):

    1L 2L 3L 4L 1R 2R 3R 4R  →  1 2 3 4 5 6 7 8

Closed forms cross-checked against exact diagonalization:
    • α(r) = (½ + 1/(2√(4r²+1)))^½, overlap of the dressed mediator state with |Φ⟩
    • ΔE(s) = ω√(A+χ) − ω√(A−χ), A = 1 + r²(3s²−4s+2), χ = 2√(r²s² + r⁴(1−s)²(2s²−2s+1))
    • ΔE(s) ≥ ω·r² for r < 0.5
"""

from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import linalg

from .dynamics import StateVector, apply_gate, fidelity, leakage, orthogonal_residual, place, propagate
from .errors import DomainError, StructuralError
from .hamiltonian import LINEAR, Schedule, TimeDependentHamiltonian, conjugate, gate
from .models import BoundCheckReport, CouplingConfig, PropagationConfig, RunReport
from .pauli import PauliSum, PauliTerm, max_entry, pauli_on, realize, term_matrix
from .protocols import prepare_ground_state
from .spectral import DEFAULT_DEGENERACY_TOL, gap_profile, ground_projector

log = logging.getLogger(__name__)

N_QUBITS = 8
SIDES = {"L": 0, "R": 4}
DATA_QUBITS = (1, 5)
BOUND_GRID_POINTS = 1001
ENCODED_TOL = 1e-10


def qubit(label: str) -> int:
    """Register index of a label such as "3L" or "4R"."""
    try:
        return int(label[:-1]) + SIDES[label[-1]]
    except (KeyError, ValueError):
        raise StructuralError(f"Invalid gadget qubit label '{label}'.") from None


def _term(letters: dict[str, str], coefficient: float) -> PauliTerm:
    return pauli_on(N_QUBITS, {qubit(label): letter for label, letter in letters.items()}, coefficient)


def _mirror(label: str) -> str:
    return label[:-1] + ("R" if label[-1] == "L" else "L")


def _both_sides(letters: dict[str, str], coefficient: float) -> list[PauliTerm]:
    """The term and its L↔R image."""
    return [_term(letters, coefficient), _term({_mirror(k): v for k, v in letters.items()}, coefficient)]


@dataclass(frozen=True)
class GadgetSystem:
    """
    Eight-qubit two-body gadget.

    Attributes:
        config (CouplingConfig): ω, λ.
        encoded_z (str): "z4" uses Z̄₃ = Z₄ in the cross coupling X₄ᴸZ̄₃ᴿ, "z3" uses Z̄₃ = Z₃.
        coupling_initial (PauliSum): −λ(X₂X₃ + X₄ᴸZ̄₃ᴿ + Z₂Z₃) + [L↔R].
        coupling_final (PauliSum): −λ(X₁X₂ + Z₁Z₂) + [L↔R].
        static_terms (PauliSum): −ω(Z₃ᴸZ₄ᴸ + Z₃ᴿZ₄ᴿ), on for the whole sweep.
    """
    config: CouplingConfig
    encoded_z: str
    coupling_initial: PauliSum
    coupling_final: PauliSum
    static_terms: PauliSum

    @property
    def h_initial(self) -> PauliSum:
        return self.coupling_initial + self.static_terms

    @property
    def h_final(self) -> PauliSum:
        return self.coupling_final + self.static_terms

    @property
    def encoded_operators(self) -> dict[str, PauliTerm]:
        """X̄₃ = X₃X₄ and the chosen Z̄₃ for each side."""
        z = "4" if self.encoded_z == "z4" else "3"
        operators = {}
        for side in SIDES:
            operators[f"X3{side}"] = _term({f"3{side}": "X", f"4{side}": "X"}, 1.0)
            operators[f"Z3{side}"] = _term({f"{z}{side}": "Z"}, 1.0)
        return operators

    def hamiltonian(self, schedule: Schedule = LINEAR) -> TimeDependentHamiltonian:
        return TimeDependentHamiltonian(self.coupling_initial, self.coupling_final, schedule, self.static_terms)

    def target_hamiltonian(self) -> PauliSum:
        """
        The encoded three-body target −λ(X₂ᴸX̄₃ᴸZ̄₃ᴿ + Z₂ᴸZ₃ᴸ) − ωZ₃ᴸZ₄ᴸ + [L↔R].
        """
        lam, omega = self.config.lam, self.config.omega
        z = "4" if self.encoded_z == "z4" else "3"
        terms = (
            _both_sides({"2L": "X", "3L": "X", "4L": "X", f"{z}R": "Z"}, -lam)
            + _both_sides({"2L": "Z", "3L": "Z"}, -lam)
            + _both_sides({"3L": "Z", "4L": "Z"}, -omega)
        )
        return PauliSum(tuple(terms), N_QUBITS)


def gadget_hamiltonians(cfg: CouplingConfig, encoded_z: str = "z4") -> GadgetSystem:
    """
    Builds the two-body gadget for couplings ω, λ.

    Args:
        cfg (CouplingConfig): Validated couplings (r < 0.5 is enforced by the model).
        encoded_z (str): "z4" (default) or "z3", the encoded Z̄₃ in the cross coupling.

    Returns:
        GadgetSystem: 6 λ-terms initially, 4 finally, 2 static ω-terms.

    Raises:
        DomainError: If encoded_z is neither "z4" nor "z3".
    """
    if encoded_z not in ("z4", "z3"):
        raise DomainError(f"encoded_z must be 'z4' or 'z3', got '{encoded_z}'.")
    lam, omega = cfg.lam, cfg.omega
    z = "4" if encoded_z == "z4" else "3"
    initial = (
        _both_sides({"2L": "X", "3L": "X"}, -lam)
        + _both_sides({"4L": "X", f"{z}R": "Z"}, -lam)
        + _both_sides({"2L": "Z", "3L": "Z"}, -lam)
    )
    final = _both_sides({"1L": "X", "2L": "X"}, -lam) + _both_sides({"1L": "Z", "2L": "Z"}, -lam)
    static = _both_sides({"3L": "Z", "4L": "Z"}, -omega)
    return GadgetSystem(
        config=cfg,
        encoded_z=encoded_z,
        coupling_initial=PauliSum(tuple(initial), N_QUBITS),
        coupling_final=PauliSum(tuple(final), N_QUBITS),
        static_terms=PauliSum(tuple(static), N_QUBITS),
    )


def decoupled_initial(system: GadgetSystem) -> PauliSum:
    """h_initial after undoing CZ between 4L and 4R; splits into L and R terms for encoded_z="z4"."""
    return conjugate(system.h_initial, gate("CZ", qubit("4L"), qubit("4R")))


def transformed_logicals() -> dict[str, tuple[PauliTerm, PauliTerm]]:
    """
    Per-side conserved operators in the decoupled basis: (Z₁Z₂Z₃, X₁X₂X₃X₄).

    They commute with both decoupled endpoint Hamiltonians and act as logical Z and X.
    """
    return {
        side: (
            _term({f"1{side}": "Z", f"2{side}": "Z", f"3{side}": "Z"}, 1.0),
            _term({f"{k}{side}": "X" for k in range(1, 5)}, 1.0),
        )
        for side in SIDES
    }


def _cnot_layer(h: PauliSum) -> PauliSum:
    for side in SIDES:
        h = conjugate(h, gate("CNOT", qubit(f"3{side}"), qubit(f"2{side}")))
    return h.simplify()


def cnot_basis(system: GadgetSystem) -> tuple[PauliSum, PauliSum]:
    """
    Endpoints in the basis reached by CNOT(3→2) on each side after `decoupled_initial`.

    For encoded_z="z4" this gives, per side,
        H(0) → −λ(Z₂ + X₃ + X₄) − ωZ₃Z₄
        H(1) → −λ(X₁X₂ + Z₁Z₂Z₃) − ωZ₃Z₄
    so qubit 2 is polarized at s = 0 and (3, 4) only see a transverse field.
    """
    return _cnot_layer(decoupled_initial(system)), _cnot_layer(system.h_final)


def cnot_logicals() -> dict[str, tuple[PauliTerm, PauliTerm]]:
    """`transformed_logicals` after the CNOT layer: (Z₁Z₂, X₁X₃X₄) per side."""
    rotated = {}
    for side, pair in transformed_logicals().items():
        rotated[side] = tuple(_cnot_layer(PauliSum((op,), N_QUBITS)).terms[0] for op in pair)
    return rotated


def _check_r(r: float, closed: bool = False):
    upper_ok = r <= 0.5 if closed else r < 0.5
    if not math.isfinite(r) or r < 0 or not upper_ok:
        bound = "≤" if closed else "<"
        raise DomainError(f"r = {r} outside 0 ≤ r {bound} 0.5.")


def gadget_alpha(r: float) -> float:
    """
    Closed-form overlap α(r) = (½ + 1/(2√(4r²+1)))^½ of the mediator ground state with |Φ⟩.

    Raises:
        DomainError: Outside 0 ≤ r ≤ 0.5.
    """
    _check_r(r, closed=True)
    return math.sqrt(0.5 + 0.5 / math.sqrt(4.0 * r * r + 1.0))


def _mediator_hamiltonian(r: float) -> np.ndarray:
    """−r(X₃ + X₄) − Z₃Z₄ in units of ω, on qubits (3, 4)."""
    return realize(PauliSum.from_labels([("XI", -r), ("IX", -r), ("ZZ", -1.0)]))


def gadget_overlap_numeric(r: float) -> float:
    """
    |⟨Φ|g⟩| from diagonalizing the mediator Hamiltonian −λ(X₃+X₄) − ωZ₃Z₄.

    Measured as √⟨Φ|P|Φ⟩ with P the ground projector, which stays well defined as
    r → 0 where the ground level becomes degenerate with |Φ⁻⟩.
    """
    _check_r(r)
    projector, _ = ground_projector(_mediator_hamiltonian(r))
    bell = StateVector.bell().amplitudes
    return math.sqrt(max(0.0, float(np.vdot(bell, projector @ bell).real)))


def _check_s(s: float):
    if not math.isfinite(s) or not 0.0 <= s <= 1.0:
        raise DomainError(f"s = {s} outside [0, 1].")


def _check_open_r(r: float):
    if not math.isfinite(r) or not 0.0 < r < 0.5:
        raise DomainError(f"r = {r} outside 0 < r < 0.5.")


def gadget_gap_closed(s: float, r: float) -> float:
    """
    ΔE(s)/ω between the two lowest levels of the reduced mediator sweep.

    Raises:
        DomainError: If s ∉ [0, 1] or r ∉ (0, 0.5).
    """
    _check_s(s)
    _check_open_r(r)
    a = 1.0 + r * r * (3 * s * s - 4 * s + 2)
    chi = 2.0 * math.sqrt(r * r * s * s + r ** 4 * (1 - s) ** 2 * (2 * s * s - 2 * s + 1))
    return math.sqrt(a + chi) - math.sqrt(a - chi)


def reduced_hamiltonian(s: float, r: float) -> np.ndarray:
    """H(s) = −(1−s)[r(X₃+X₄) + Z₃Z₄] − s[r·Z₃ + Z₃Z₄], units of ω."""
    return realize(PauliSum.from_labels([
        ("XI", -(1 - s) * r), ("IX", -(1 - s) * r), ("ZI", -s * r), ("ZZ", -1.0),
    ]))


def reduced_gap_numeric(s: float, r: float) -> float:
    """Difference of the two lowest eigenvalues of `reduced_hamiltonian(s, r)`."""
    _check_s(s)
    _check_open_r(r)
    values = linalg.eigh(reduced_hamiltonian(s, r).real, eigvals_only=True)
    return float(values[1] - values[0])


def gap_lower_bound(s: float, r: float) -> float:
    """Intermediate bound 2/√(1+2r²)·√(r²s² + r⁴(1−s)³/3) on ΔE(s)/ω."""
    return 2.0 / math.sqrt(1 + 2 * r * r) * math.sqrt(r * r * s * s + r ** 4 * (1 - s) ** 3 / 3)


def bound_maximizer(r: float) -> float:
    """s = (1 + r² − √(1+2r²))/r², where the intermediate bound is evaluated."""
    _check_open_r(r)
    return (1 + r * r - math.sqrt(1 + 2 * r * r)) / (r * r)


def gadget_gap_bound_check(r: float, grid_points: int = BOUND_GRID_POINTS) -> BoundCheckReport:
    """
    Verifies min_s ΔE(s) ≥ ω·r² on a uniform grid and records the bound chain.

    Returns:
        BoundCheckReport: A failing bound is reported (passed=False), not raised.
    """
    _check_open_r(r)
    grid = np.linspace(0.0, 1.0, grid_points)
    gaps = np.array([gadget_gap_closed(float(s), r) for s in grid])
    i = int(np.argmin(gaps))
    s_max = bound_maximizer(r)
    report = BoundCheckReport(
        r=r,
        grid_points=grid_points,
        min_gap=float(gaps[i]),
        min_gap_s=float(grid[i]),
        bound=r * r,
        slack=float(gaps[i]) - r * r,
        maximizer_s=s_max,
        lower_bound_at_maximizer=gap_lower_bound(min(max(s_max, 0.0), 1.0), r),
        passed=bool(gaps[i] >= r * r),
    )
    if not report.passed:
        log.warning(f"[Gadget] Schranke verletzt bei r={r}: min ΔE={report.min_gap} < r²={r * r}.")
    return report


def alpha_rows(rs) -> list[tuple[float, float, float]]:
    """(r, closed-form α, numeric overlap) per r."""
    return [(float(r), gadget_alpha(r), gadget_overlap_numeric(r)) for r in rs]


def gap_rows(r: float, grid_points: int = 21) -> list[tuple[float, float, float, float]]:
    """(s, closed-form ΔE, numeric ΔE, bound r²) on a uniform s-grid."""
    return [
        (float(s), gadget_gap_closed(float(s), r), reduced_gap_numeric(float(s), r), r * r)
        for s in np.linspace(0.0, 1.0, grid_points)
    ]


def encoded_target(psi_in: StateVector) -> StateVector:
    """
    |Φ⟩ on (1L,2L) and (1R,2R) with CZ·ψ_in encoded as |a⟩ → |aa⟩ on (3,4) of each side.
    """
    if psi_in.n_qubits != 2:
        raise StructuralError(f"The gadget carries two logical qubits, input has {psi_in.n_qubits}.")
    rotated = apply_gate(psi_in, gate("CZ", 1, 2)).amplitudes
    encoded = np.zeros(16, dtype=complex)
    for a in (0, 1):
        for b in (0, 1):
            encoded[int(f"{a}{a}{b}{b}", 2)] = rotated[2 * a + b]
    return place({
        (1, 2): StateVector.bell(),
        (5, 6): StateVector.bell(),
        (3, 4, 7, 8): StateVector(encoded),
    }, N_QUBITS)


def default_gadget_steps(total_time: float, omega: float) -> int:
    """max(1000, ceil(2·T·ω)); the sweep is slow on the scale 1/ω."""
    return max(1000, math.ceil(2.0 * total_time * omega))


def run_gadget(psi_in: StateVector, cfg: CouplingConfig, total_time: float, steps: int | None = None,
               method: str = "spectral", schedule: Schedule = LINEAR, name: str = "gadget") -> RunReport:
    """
    Full eight-qubit propagation of the gadget sweep.

    The initial state is ψ_in on (1L, 1R) projected into the 4-fold ground space of
    H(0); the result is scored against the ideal encoded output.

    Args:
        psi_in (StateVector): Two-qubit input (L first).
        cfg (CouplingConfig): Gadget couplings.
        total_time (float): T; T = 200/(ω·r²) keeps the run adiabatic.
        steps (int | None): Midpoint steps; default max(1000, ceil(2·T·ω)).

    Returns:
        RunReport: Fidelity, leakage and minimum gap of the run.
    """
    log_prefix = f"[Run: {name}]"
    system = gadget_hamiltonians(cfg)
    hamiltonian = system.hamiltonian(schedule)
    prop_cfg = PropagationConfig.for_time(total_time, steps or default_gadget_steps(total_time, cfg.omega),
                                          method, cfg.omega)
    log.info(f"{log_prefix} Starte Gadget-Propagation (r={cfg.r}, T={prop_cfg.total_time}, Schritte={prop_cfg.steps}).")
    try:
        psi0 = prepare_ground_state(hamiltonian.matrix(0.0), DATA_QUBITS, psi_in)
        target = encoded_target(psi_in)
        final = propagate(hamiltonian, psi0, prop_cfg)
        profile = gap_profile(hamiltonian, degeneracy_tol=DEFAULT_DEGENERACY_TOL * cfg.omega)
        projector, _ = ground_projector(hamiltonian.matrix(1.0), DEFAULT_DEGENERACY_TOL * cfg.omega)
    except Exception as e:
        log.error(f"{log_prefix} Gadget-Lauf abgebrochen: {e}")
        raise

    report = RunReport(
        name=name,
        protocol="gadget",
        n_qubits=N_QUBITS,
        fidelity=fidelity(final, target),
        residual=orthogonal_residual(final, target),
        leakage=leakage(final, projector),
        min_gap=profile.min_gap,
        min_gap_s=profile.min_s,
        total_time=prop_cfg.total_time,
        steps=prop_cfg.steps,
        method=prop_cfg.method,
        final_state=final.as_pairs(),
        config={"omega": cfg.omega, "lambda": cfg.lam, "r": cfg.r, "schedule": schedule.tag,
                "input_state": psi_in.as_pairs()},
    )
    log.info(f"{log_prefix} Abgeschlossen: Fidelity={report.fidelity:.9f}, Leckage={report.leakage:.3e}.")
    return report


def encoded_operator_check(system: GadgetSystem,
                           operators: dict[str, PauliTerm] | None = None) -> dict[str, bool]:
    """
    Whether each encoded operator acts as a logical Pauli of the final ground space.

    With P the ground projector of H(1), an operator O passes when it commutes with
    H(1) and with the static terms, (POP)² = P, POP anticommutes with its partner on
    the same side ("X3L" ↔ "Z3L") and commutes with the operators of the other side.

    Args:
        system (GadgetSystem): The gadget.
        operators (dict | None): Name → operator, names shaped like "X3L"; defaults to
            `system.encoded_operators`.

    Returns:
        dict[str, bool]: Verdict per operator name.
    """
    operators = operators if operators is not None else system.encoded_operators
    h = realize(system.h_final)
    static = realize(system.static_terms)
    projector, _ = ground_projector(h, DEFAULT_DEGENERACY_TOL * system.config.omega)
    full = {name: term_matrix(op) for name, op in operators.items()}
    restricted = {name: projector @ m @ projector for name, m in full.items()}

    def _commutator(a, b):
        return max_entry(a @ b - b @ a)

    verdicts = {}
    for name, m in full.items():
        side = name[-1]
        partner = ("Z" if name[0] == "X" else "X") + name[1:]
        r = restricted[name]
        checks = [
            _commutator(h, m) <= ENCODED_TOL,
            _commutator(static, m) <= ENCODED_TOL,
            max_entry(r @ r - projector) <= ENCODED_TOL,
        ]
        if partner in restricted:
            checks.append(max_entry(r @ restricted[partner] + restricted[partner] @ r) <= ENCODED_TOL)
        checks.extend(_commutator(r, other) <= ENCODED_TOL
                      for other_name, other in restricted.items() if other_name[-1] != side)
        verdicts[name] = all(checks)
        if not verdicts[name]:
            log.warning(f"[Gadget] Kodierter Operator {name} ist kein logisches Pauli des Grundraums.")
    return verdicts
