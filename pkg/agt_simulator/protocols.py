"""
protocols.py — Named adiabatic protocols and their runners

Builds every protocol of the scheme as a `ProtocolSpec` and runs it end to end:

    • teleportation_protocol: drag −ω(X₂X₃+Z₂Z₃) → −ω(X₁X₂+Z₁Z₂); data 1 → 3
    • agt_single: the same with U₃·H_i·U₃†, delivering U|ψ⟩ on qubit 3
    • agp: rotate a standing pair −ω(X₂X₃+Z₂Z₃) into its A- or B-conjugated form
    • agt_two_qubit: two teleportations joined by CZ(3, 6) in the initial Hamiltonian
    • isotropic_teleportation: +ω(XX+YY+ZZ) couplings, singlet resource
    • no_go_diagonal: the diagonal two-qubit interpolation that cannot swap

Initial states are built directly as |ψ⟩ ⊗ pairs for the anisotropic family. For the
isotropic family both the initial state and the final template are constructed
numerically from ground projectors and the conserved logical operators, so no sign
convention is hard-coded.
"""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
import logging
import math

import numpy as np

from .dynamics import StateVector, apply_gate, fidelity, leakage, orthogonal_residual, place, propagate
from .errors import ConsistencyError, DomainError, StructuralError, UnsupportedGateError
from .hamiltonian import (
    LINEAR,
    GateSpec,
    Schedule,
    TimeDependentHamiltonian,
    conjugate,
    gate,
    isotropic_pair,
    schedule_from_tag,
    standard_pair,
)
from .models import CheckReport, NoGoConfig, NoGoReport, PropagationConfig, ProtocolFile, RunReport, TermEntry
from .pauli import LogicalFrame, PauliSum, PauliTerm, diagonal_sum, max_entry, parse_pauli, term_matrix
from .spectral import DEFAULT_DEGENERACY_TOL, GapProfile, gap_profile, ground_projector, ground_space, max_off_diagonal

log = logging.getLogger(__name__)

FRAME_TOL = 1e-12
AGP_GATES = ("A", "B")


def _check_omega(omega: float):
    if not math.isfinite(omega) or omega <= 0:
        raise DomainError(f"Coupling ω must be positive, got {omega}.")


@dataclass(frozen=True, eq=False)
class ProtocolSpec:
    """
    A named adiabatic protocol with its qubit roles.

    Attributes:
        name (str): Protocol name used in logs, reports and files.
        hamiltonian (TimeDependentHamiltonian): The sweep.
        data_qubits (tuple[int, ...]): Qubits holding the input state.
        output_qubits (tuple[int, ...]): Qubits holding the result.
        initial_pairs (tuple): Pairs bound into the resource state at s = 0.
        final_pairs (tuple): Pairs bound at s = 1.
        family (str): "teleport" (conjugated initial pair), "agp" (conjugated final
            pair) or "isotropic" (numerically built states).
        target_gate (GateSpec | None): Gate expected on the output, placed on its qubits.
        omega (float): Coupling strength, the unit for default step counts.
    """
    name: str
    hamiltonian: TimeDependentHamiltonian
    data_qubits: tuple[int, ...]
    output_qubits: tuple[int, ...]
    initial_pairs: tuple[tuple[int, int], ...]
    final_pairs: tuple[tuple[int, int], ...]
    family: str = "teleport"
    target_gate: GateSpec | None = None
    omega: float = 1.0

    def __post_init__(self):
        touched = {q for term in self.hamiltonian.h_initial for q in term.support}
        if self.family == "agp":
            touched |= {q for term in self.hamiltonian.h_final for q in term.support}
        clash = touched & set(self.data_qubits)
        if clash:
            raise StructuralError(f"Protocol '{self.name}': initial Hamiltonian acts on data qubits {sorted(clash)}.")

    @property
    def n_qubits(self) -> int:
        return self.hamiltonian.n_qubits

    @property
    def n_data(self) -> int:
        return len(self.data_qubits)

    def _check_input(self, psi_in: StateVector):
        if psi_in.n_qubits != self.n_data:
            raise StructuralError(
                f"Protocol '{self.name}' carries {self.n_data} data qubit(s), input has {psi_in.n_qubits}."
            )

    def initial_state(self, psi_in: StateVector) -> StateVector:
        """Ground-space state of H(0) carrying ψ_in on the data qubits."""
        self._check_input(psi_in)
        if self.family == "isotropic":
            return prepare_ground_state(self.hamiltonian.matrix(0.0), self.data_qubits, psi_in)
        pieces = {tuple(self.data_qubits): psi_in}
        pieces.update({pair: StateVector.bell() for pair in self.initial_pairs})
        state = place(pieces, self.n_qubits)
        if self.family == "teleport" and self.target_gate is not None:
            state = apply_gate(state, self.target_gate)
        return state

    def target_state(self, psi_in: StateVector) -> StateVector:
        """Expected final ground-state template for input ψ_in."""
        self._check_input(psi_in)
        if self.family == "isotropic":
            return logical_template(
                self.initial_state(psi_in),
                ground_space(self.hamiltonian.matrix(0.0))[1],
                ground_space(self.hamiltonian.matrix(1.0))[1],
                z_ops=[parse_pauli("ZZZ")],
                x_ops=[parse_pauli("XXX")],
            )
        pieces = {pair: StateVector.bell() for pair in self.final_pairs}
        pieces[tuple(self.output_qubits)] = psi_in
        state = place(pieces, self.n_qubits)
        if self.target_gate is not None:
            state = apply_gate(state, self.target_gate)
        return state

    def final_ground_projector(self, tol: float = DEFAULT_DEGENERACY_TOL) -> np.ndarray:
        return ground_projector(self.hamiltonian.matrix(1.0), tol * self.omega)[0]

    def template_residual(self, psi_in: StateVector) -> float:
        """‖(1 − P_final)·template‖, zero when the template lies in the final ground space."""
        target = self.target_state(psi_in).amplitudes
        outside = target - self.final_ground_projector() @ target
        return float(np.linalg.norm(outside))


# --- Constructors ---
def teleportation_protocol(omega: float = 1.0, schedule: Schedule = LINEAR) -> ProtocolSpec:
    """
    Adiabatic teleportation of qubit 1 onto qubit 3.

    Args:
        omega (float): Coupling strength ω > 0.
        schedule (Schedule): Envelope pair, linear by default.

    Returns:
        ProtocolSpec: h_i = −ω(X₂X₃+Z₂Z₃), h_f = −ω(X₁X₂+Z₁Z₂); template |Φ⟩₁₂ ⊗ |ψ⟩₃.

    Raises:
        DomainError: If ω ≤ 0.
    """
    _check_omega(omega)
    return ProtocolSpec(
        name="teleport",
        hamiltonian=TimeDependentHamiltonian(standard_pair(2, 3, omega, 3), standard_pair(1, 2, omega, 3), schedule),
        data_qubits=(1,),
        output_qubits=(3,),
        initial_pairs=((2, 3),),
        final_pairs=((1, 2),),
        omega=omega,
    )


def _single_qubit_gate(gate_or_name: GateSpec | str) -> GateSpec:
    gate_spec = gate(gate_or_name) if isinstance(gate_or_name, str) else gate_or_name
    if gate_spec.n_targets != 1:
        raise UnsupportedGateError(f"Gate '{gate_spec.name}' acts on {gate_spec.n_targets} qubits; a single-qubit gate is required.")
    return gate_spec


def agt_single(gate_or_name: GateSpec | str, omega: float = 1.0, schedule: Schedule = LINEAR) -> ProtocolSpec:
    """
    Adiabatic gate teleportation of one qubit: H_i′ = U₃·H_i·U₃†, same H_f.

    The spectrum of H(s) is that of plain teleportation, so the gap stays √2·ω.

    Raises:
        UnsupportedGateError: If the gate acts on more than one qubit.
        DomainError: If ω ≤ 0.
    """
    _check_omega(omega)
    u3 = _single_qubit_gate(gate_or_name).on(3)
    h_initial = conjugate(standard_pair(2, 3, omega, 3), u3)
    return ProtocolSpec(
        name=f"agt-{u3.name}",
        hamiltonian=TimeDependentHamiltonian(h_initial, standard_pair(1, 2, omega, 3), schedule),
        data_qubits=(1,),
        output_qubits=(3,),
        initial_pairs=((2, 3),),
        final_pairs=((1, 2),),
        target_gate=u3,
        omega=omega,
    )


def agp(gate_or_name: GateSpec | str, omega: float = 1.0, schedule: Schedule = LINEAR) -> ProtocolSpec:
    """
    Adiabatic gate preparation: drags −ω(X₂X₃+Z₂Z₃) into its U₃-conjugated form.

    Only A and B are accepted. A general U can close the gap: for U = X₃ the final
    ground state X₃|Φ⟩ is orthogonal to |Φ⟩ and the two levels cross.

    Raises:
        UnsupportedGateError: For any gate other than A or B.
    """
    _check_omega(omega)
    gate_spec = _single_qubit_gate(gate_or_name)
    if gate_spec.name not in AGP_GATES:
        raise UnsupportedGateError(
            f"AGP supports only {', '.join(AGP_GATES)}, got '{gate_spec.name}'. "
            "For U = X_b the conjugated pair's ground state is orthogonal to the initial one and the gap closes."
        )
    u3 = gate_spec.on(3)
    h = standard_pair(2, 3, omega, 3)
    return ProtocolSpec(
        name=f"agp-{gate_spec.name}",
        hamiltonian=TimeDependentHamiltonian(h, conjugate(h, u3), schedule),
        data_qubits=(1,),
        output_qubits=(1,),
        initial_pairs=((2, 3),),
        final_pairs=((2, 3),),
        family="agp",
        target_gate=u3,
        omega=omega,
    )


def agt_two_qubit(omega: float = 1.0, schedule: Schedule = LINEAR) -> ProtocolSpec:
    """
    Two teleportations joined by a controlled-phase in the initial Hamiltonian.

    h_i = −ω(X₂X₃Z₆ + Z₂Z₃ + Z₅Z₆ + Z₃X₅X₆), h_f = −ω(X₁X₂+Z₁Z₂+X₄X₅+Z₄Z₅).
    Data on qubits 1 and 4 arrives on 3 and 6 with CZ applied.
    """
    _check_omega(omega)
    cz = gate("CZ", 3, 6)
    plain = standard_pair(2, 3, omega, 6) + standard_pair(5, 6, omega, 6)
    return ProtocolSpec(
        name="agt2-CZ",
        hamiltonian=TimeDependentHamiltonian(
            conjugate(plain, cz),
            standard_pair(1, 2, omega, 6) + standard_pair(4, 5, omega, 6),
            schedule,
        ),
        data_qubits=(1, 4),
        output_qubits=(3, 6),
        initial_pairs=((2, 3), (5, 6)),
        final_pairs=((1, 2), (4, 5)),
        target_gate=cz,
        omega=omega,
    )


def isotropic_teleportation(omega: float = 1.0, schedule: Schedule = LINEAR) -> ProtocolSpec:
    """
    Teleportation with antiferromagnetic exchange +ω(XX+YY+ZZ).

    Raises:
        DomainError: If ω ≤ 0; a negative sign would make the coupling ferromagnetic
            and the singlet would no longer be the ground state.
    """
    if not math.isfinite(omega) or omega <= 0:
        raise DomainError(f"Isotropic coupling must be antiferromagnetic (ω > 0), got {omega}.")
    return ProtocolSpec(
        name="isotropic",
        hamiltonian=TimeDependentHamiltonian(isotropic_pair(2, 3, omega, 3), isotropic_pair(1, 2, omega, 3), schedule),
        data_qubits=(1,),
        output_qubits=(3,),
        initial_pairs=((2, 3),),
        final_pairs=((1, 2),),
        family="isotropic",
        omega=omega,
    )


PROTOCOL_BUILDERS = {
    "teleport": lambda gate_name, omega, schedule: teleportation_protocol(omega, schedule),
    "agt": lambda gate_name, omega, schedule: agt_single(gate_name, omega, schedule),
    "agp": lambda gate_name, omega, schedule: agp(gate_name, omega, schedule),
    "agt2": lambda gate_name, omega, schedule: agt_two_qubit(omega, schedule),
    "isotropic": lambda gate_name, omega, schedule: isotropic_teleportation(omega, schedule),
}


def build_protocol(name: str, gate_name: str = "A", omega: float = 1.0, schedule: Schedule = LINEAR) -> ProtocolSpec:
    try:
        builder = PROTOCOL_BUILDERS[name]
    except KeyError:
        raise DomainError(f"Unknown protocol '{name}'. Known: {', '.join(PROTOCOL_BUILDERS)}.") from None
    return builder(gate_name, omega, schedule)


# --- Numeric ground-space states ---
def prepare_ground_state(h0: np.ndarray, data_qubits: Sequence[int], psi_in: StateVector,
                         tol: float = DEFAULT_DEGENERACY_TOL) -> StateVector:
    """
    Projects |ψ_in⟩ ⊗ |v⟩ onto the ground space of h0 and renormalizes.

    |v⟩ is the computational basis state of the non-data qubits with the largest
    projected norm (first in index order on ties).

    Raises:
        ConsistencyError: If every candidate is orthogonal to the ground space.
    """
    n_qubits = int(round(math.log2(h0.shape[0])))
    projector, _ = ground_projector(h0, tol)
    others = tuple(q for q in range(1, n_qubits + 1) if q not in data_qubits)
    if not others:
        return psi_in
    best, best_norm = None, 0.0
    for bits in product("01", repeat=len(others)):
        candidate = place({tuple(data_qubits): psi_in, others: StateVector.basis("".join(bits))}, n_qubits)
        projected = projector @ candidate.amplitudes
        norm = float(np.linalg.norm(projected))
        if norm > best_norm + 1e-12:
            best, best_norm = projected, norm
    if best is None or best_norm < 1e-8:
        raise ConsistencyError("No product reference state overlaps the ground space.")
    return StateVector(best / best_norm)


def _logical_basis(basis: np.ndarray, z_ops: Sequence[PauliTerm], x_ops: Sequence[PauliTerm]) -> np.ndarray:
    """Columns |b⟩ = Π X̄_j^{b_j} |0…0⟩_L inside the span of `basis` (columns)."""
    k = len(z_ops)
    if basis.shape[1] != 2 ** k:
        raise ConsistencyError(f"Ground space of dimension {basis.shape[1]} cannot hold {k} logical qubit(s).")
    joint = np.eye(basis.shape[1], dtype=complex)
    for z in z_ops:
        restricted = basis.conj().T @ term_matrix(z) @ basis
        joint = joint @ (np.eye(basis.shape[1]) + restricted) / 2
    values, vectors = np.linalg.eigh((joint + joint.conj().T) / 2)
    zero = basis @ vectors[:, -1]
    if abs(values[-1] - 1.0) > 1e-8:
        raise ConsistencyError("Logical Z operators have no joint +1 eigenvector in the ground space.")
    columns = []
    for bits in product((0, 1), repeat=k):
        vector = zero
        for bit, x in zip(bits, x_ops):
            if bit:
                vector = term_matrix(x) @ vector
        columns.append(vector)
    return np.column_stack(columns)


def logical_template(psi0: StateVector, initial_basis: np.ndarray, final_basis: np.ndarray,
                     z_ops: Sequence[PauliTerm], x_ops: Sequence[PauliTerm]) -> StateVector:
    """
    Carries ψ0 from the initial to the final ground space along conserved logicals.

    Both spaces get the logical basis |b⟩ = Π X̄_j^{b_j}|0…0⟩ (|0…0⟩ the joint +1
    eigenvector of the Z̄_j); the template has the same coordinates in the final
    basis as ψ0 has in the initial one. Defined up to one global phase.
    """
    initial = _logical_basis(initial_basis, z_ops, x_ops)
    final = _logical_basis(final_basis, z_ops, x_ops)
    coordinates = initial.conj().T @ psi0.amplitudes
    return StateVector.normalized(final @ coordinates)


# --- Checks ---
def logical_frame_check(frame: LogicalFrame | None = None, omega: float = 1.0, grid_points: int = 101,
                        tol: float = FRAME_TOL) -> CheckReport:
    """
    Matrix-level verification of the encoded algebra of the teleportation code.

    Checks:
        - the (anti)commutation pattern of the six encoded operators
        - [H(s), X̄₁] = [H(s), Z̄₁] = 0 on a `grid_points` grid
        - ZII = Z̄₁Z̄₃, XII = X̄₁X̄₂, IIZ = Z̄₁Z̄₂, IIX = X̄₁X̄₃
        - H(s) = −ω[(1−s)(X̄₂ + Z̄₃) + s(X̄₃ + Z̄₂)] on the grid

    Returns:
        CheckReport: Failing identities are reported, not raised.
    """
    frame = frame or LogicalFrame.standard()
    x1, x2, x3 = (term_matrix(t) for t in frame.x)
    z1, z2, z3 = (term_matrix(t) for t in frame.z)
    residuals = frame.pattern_residuals()

    h = teleportation_protocol(omega).hamiltonian
    grid = np.linspace(0.0, 1.0, grid_points)
    commutator_x, commutator_z, form = 0.0, 0.0, 0.0
    for s in grid:
        hs = h.matrix(s)
        commutator_x = max(commutator_x, max_entry(hs @ x1 - x1 @ hs))
        commutator_z = max(commutator_z, max_entry(hs @ z1 - z1 @ hs))
        logical_form = -omega * ((1.0 - s) * (x2 + z3) + s * (x3 + z2))
        form = max(form, max_entry(hs - logical_form))
    residuals += [("[H(s),X1]", commutator_x), ("[H(s),Z1]", commutator_z)]

    for label, lhs, rhs in (("ZII=Z1Z3", "ZII", z1 @ z3), ("XII=X1X2", "XII", x1 @ x2),
                            ("IIZ=Z1Z2", "IIZ", z1 @ z2), ("IIX=X1X3", "IIX", x1 @ x3)):
        residuals.append((label, max_entry(term_matrix(parse_pauli(lhs)) - rhs)))
    residuals.append(("H(s)=logical form", form))

    report = CheckReport.from_residuals("logical-frame", residuals, tol)
    if not report.passed:
        log.warning(f"[Frame] Prüfung fehlgeschlagen: {', '.join(report.failures)}.")
    return report


def no_go_hamiltonian(cfg: NoGoConfig) -> TimeDependentHamiltonian:
    """
    H_a = δ₁(|01⟩⟨01| + |11⟩⟨11|) + δ₂|00⟩⟨00| + δ₃|10⟩⟨10| and
    H_b = γ₁(|10⟩⟨10| + |11⟩⟨11|) + γ₂|00⟩⟨00| + γ₃|01⟩⟨01| on I/Z strings.
    """
    d1, d2, d3 = cfg.delta
    g1, g2, g3 = cfg.gamma
    return TimeDependentHamiltonian(
        diagonal_sum([d2, d1, d3, d1]),
        diagonal_sum([g2, g3, g1, g1]),
        schedule_from_tag(cfg.schedule),
    )


def no_go_diagonal(cfg: NoGoConfig | None = None, total_time: float = 50.0, steps: int | None = None,
                   grid_points: int = 101) -> NoGoReport:
    """
    Shows that ramping between two diagonal Hamiltonians cannot move amplitude.

    Reports the largest off-diagonal entry of H(s) over the grid, the fidelity of
    the evolved |10⟩ with |01⟩, and, as a contrast, the off-diagonal size of the
    three-qubit teleportation H(1/2).
    """
    cfg = cfg or NoGoConfig()
    h = no_go_hamiltonian(cfg)
    off_diagonal = max(max_off_diagonal(h.matrix(s)) for s in np.linspace(0.0, 1.0, grid_points))
    final = propagate(h, StateVector.basis("10"), PropagationConfig.for_time(total_time, steps))
    swap = fidelity(final, StateVector.basis("01"))
    contrast = max_off_diagonal(teleportation_protocol().hamiltonian.matrix(0.5))
    passed = off_diagonal <= 1e-14 and swap <= 1e-12 and contrast > 0
    if not passed:
        log.warning(f"[NoGo] Unerwartetes Ergebnis: Nebendiagonale={off_diagonal}, Swap-Fidelity={swap}.")
    return NoGoReport(
        config=cfg.model_dump(mode="json"),
        max_off_diagonal=off_diagonal,
        swap_fidelity=swap,
        contrast_off_diagonal=contrast,
        total_time=total_time,
        passed=passed,
    )


# --- Runs ---
def run_protocol(spec: ProtocolSpec, psi_in: StateVector, total_time: float = 50.0, steps: int | None = None,
                 method: str = "spectral", profile: GapProfile | None = None, with_gap: bool = True,
                 name: str | None = None) -> RunReport:
    """
    Propagates the protocol from its initial ground state and scores the result.

    Args:
        spec (ProtocolSpec): Protocol to run.
        psi_in (StateVector): Input on the data qubits.
        total_time (float): T in units of 1/ω.
        steps (int | None): Midpoint steps; default max(1000, ceil(100·T·ω)).
        method (str): "spectral" or "expm".
        profile (GapProfile | None): Precomputed gap profile (sweeps share one).
        with_gap (bool): Compute the gap profile when none is given.
        name (str | None): Run name for logs and the report.

    Returns:
        RunReport: Fidelity to the template, residual, leakage, min gap, final state.
    """
    name = name or spec.name
    log_prefix = f"[Run: {name}]"
    cfg = PropagationConfig.for_time(total_time, steps, method, spec.omega)
    log.info(f"{log_prefix} Starte Propagation (T={cfg.total_time}, Schritte={cfg.steps}).")
    try:
        psi0 = spec.initial_state(psi_in)
        target = spec.target_state(psi_in)
        final = propagate(spec.hamiltonian, psi0, cfg)
        if profile is None and with_gap:
            profile = gap_profile(spec.hamiltonian, degeneracy_tol=DEFAULT_DEGENERACY_TOL * spec.omega)
    except Exception as e:
        log.error(f"{log_prefix} Lauf abgebrochen: {e}")
        raise

    report = RunReport(
        name=name,
        protocol=spec.name,
        n_qubits=spec.n_qubits,
        fidelity=fidelity(final, target),
        residual=orthogonal_residual(final, target),
        leakage=leakage(final, spec.final_ground_projector()),
        min_gap=profile.min_gap if profile else None,
        min_gap_s=profile.min_s if profile else None,
        total_time=cfg.total_time,
        steps=cfg.steps,
        method=cfg.method,
        final_state=final.as_pairs(),
        config={"omega": spec.omega, "schedule": spec.hamiltonian.schedule.tag,
                "input_state": psi_in.as_pairs()},
    )
    log.info(f"{log_prefix} Abgeschlossen: Fidelity={report.fidelity:.9f}, Leckage={report.leakage:.3e}.")
    return report


def adiabatic_sweep(spec: ProtocolSpec, total_times: Sequence[float], psi_in: StateVector,
                    steps: int | None = None, method: str = "spectral", workers: int = 1) -> list[RunReport]:
    """
    Runs the protocol at several total times; reports come back sorted by T.

    With the linear ramp the infidelity oscillates in T (it has nodes, e.g. near T = 5/ω
    for teleportation); the smoothstep ramp gives a monotone trend.

    The gap profile is computed once and shared. With workers > 1 the runs are
    spread over a thread pool (numpy releases the GIL inside the eigensolver).
    """
    profile = gap_profile(spec.hamiltonian, degeneracy_tol=DEFAULT_DEGENERACY_TOL * spec.omega)

    def one(total_time):
        return run_protocol(spec, psi_in, total_time, steps, method, profile=profile,
                            name=f"{spec.name}@T={total_time:g}")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(one, total_times))
    else:
        reports = [one(t) for t in total_times]
    return sorted(reports, key=lambda report: report.total_time)


# --- Files ---
def _entries(pauli_sum: PauliSum) -> list[TermEntry]:
    return [TermEntry(pauli=letters, coefficient=c) for letters, c in pauli_sum.to_pairs()]


def _sum(entries: Sequence[TermEntry], n_qubits: int) -> PauliSum:
    return PauliSum(tuple(PauliTerm(e.pauli, e.coefficient) for e in entries), n_qubits)


def protocol_to_file(spec: ProtocolSpec) -> ProtocolFile:
    """Serializable form with the full term lists and the qubit → bit map."""
    h = spec.hamiltonian
    n = spec.n_qubits
    return ProtocolFile(
        name=spec.name,
        family=spec.family,
        omega=spec.omega,
        n_qubits=n,
        schedule=h.schedule.tag,
        h_initial=_entries(h.h_initial),
        h_final=_entries(h.h_final),
        static_terms=_entries(h.static_terms),
        data_qubits=list(spec.data_qubits),
        output_qubits=list(spec.output_qubits),
        initial_pairs=list(spec.initial_pairs),
        final_pairs=list(spec.final_pairs),
        target_gate=spec.target_gate.name if spec.target_gate else None,
        target_qubits=list(spec.target_gate.targets) if spec.target_gate else [],
        bit_index_map={str(k): n - k for k in range(1, n + 1)},
    )


def protocol_from_file(data: ProtocolFile) -> ProtocolSpec:
    """
    Rebuilds a ProtocolSpec from its file form.

    Raises:
        UnsupportedGateError: If the target gate is not a library gate.
    """
    n = data.n_qubits
    hamiltonian = TimeDependentHamiltonian(
        _sum(data.h_initial, n),
        _sum(data.h_final, n),
        schedule_from_tag(data.schedule),
        _sum(data.static_terms, n),
    )
    target_gate = gate(data.target_gate, *data.target_qubits) if data.target_gate else None
    return ProtocolSpec(
        name=data.name,
        hamiltonian=hamiltonian,
        data_qubits=tuple(data.data_qubits),
        output_qubits=tuple(data.output_qubits),
        initial_pairs=tuple(tuple(pair) for pair in data.initial_pairs),
        final_pairs=tuple(tuple(pair) for pair in data.final_pairs),
        family=data.family,
        target_gate=target_gate,
        omega=data.omega,
    )

