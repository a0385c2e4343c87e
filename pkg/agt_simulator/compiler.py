"""
compiler.py — Circuits compiled into piecewise-adiabatic schedules

A circuit over {A, B} (and CZ between wires) becomes a sequence of segments. Each
segment is one adiabatic drag; segment k's final Hamiltonian is segment k+1's initial
Hamiltonian, and segment k carries the cyclic label H_{(k−1) mod 3 + 1}.

Layouts:
    • chain: one wire over 2l+1 qubits; gate i is imprinted on the pair (2i, 2i+1)
      and the data hops two sites per segment. Pairs outside the active window keep
      their coupling on as static terms.
    • 3n: per wire w the qubits (3w−2, 3w−1, 3w); the data bounces between the first
      and third qubit. A pair that must be re-used in conjugated form is first
      rotated by an AGP segment (A, B only), so CZ may only be the first step.
      `gadgetized=True` swaps the three-body CZ step for the two-body gadget
      (one ancilla per wire); such programs are emitted, not simulated.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
import logging

from .dynamics import StateVector, apply_gate, fidelity, leakage, orthogonal_residual, place, propagate
from .errors import CompileError, ConsistencyError, DomainError, ParseError, ResourceError, StructuralError
from .gadgets import gadget_hamiltonians
from .hamiltonian import GateSpec, TimeDependentHamiltonian, conjugate, gate, standard_pair
from .models import CompiledProgramFile, CouplingConfig, PropagationConfig, RunReport, SegmentEntry, TermEntry
from .pauli import PauliSum
from .spectral import DEFAULT_DEGENERACY_TOL, gap_profile, ground_projector

log = logging.getLogger(__name__)

SINGLE_QUBIT_GATES = ("A", "B")
SUPPORTED_GATES = SINGLE_QUBIT_GATES + ("CZ",)
MAX_SIMULATED_QUBITS = 8
CONTINUITY_TOL = 1e-12


# --- Circuits ---
@dataclass(frozen=True)
class CircuitGate:
    name: str
    wires: tuple[int, ...] = (1,)

    def __str__(self):
        return " ".join([self.name, *map(str, self.wires)])


@dataclass(frozen=True)
class CircuitProgram:
    """
    Ordered gate list on `n_wires` logical wires.

    Raises:
        CompileError: If a gate is outside {A, B, CZ} or addresses a missing wire.
    """
    gates: tuple[CircuitGate, ...]
    n_wires: int = 1

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if g.name not in SUPPORTED_GATES:
                raise CompileError(f"Gate '{g.name}' is not supported; circuits use {', '.join(SUPPORTED_GATES)}.")
            expected = 2 if g.name == "CZ" else 1
            if len(g.wires) != expected or len(set(g.wires)) != expected:
                raise CompileError(f"Gate '{g}' needs {expected} distinct wire(s).")
            if any(not 1 <= w <= self.n_wires for w in g.wires):
                raise CompileError(f"Gate '{g}' addresses a wire outside 1..{self.n_wires}.")

    @property
    def length(self) -> int:
        return len(self.gates)

    def apply(self, psi: StateVector) -> StateVector:
        """The whole-circuit unitary applied to an n_wires-qubit state."""
        if psi.n_qubits != self.n_wires:
            raise StructuralError(f"Circuit on {self.n_wires} wire(s) cannot act on {psi.n_qubits} qubit(s).")
        for g in self.gates:
            psi = apply_gate(psi, gate(g.name, *g.wires))
        return psi


def parse_circuit(text: str, n_wires: int | None = None) -> CircuitProgram:
    """
    Parses a line-oriented circuit: `A`, `B 2`, `CZ 1 2`; `#` starts a comment.

    A single-qubit gate without a wire acts on wire 1.

    Raises:
        ParseError: On malformed wire numbers (position = line number).
        CompileError: On unsupported gates or if `n_wires` is too small.
    """
    gates = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, *args = line.split()
        try:
            wires = tuple(int(a) for a in args)
        except ValueError:
            raise ParseError(f"Line {line_no}: wire numbers must be integers, got '{line}'.", line_no) from None
        if any(w < 1 for w in wires):
            raise ParseError(f"Line {line_no}: wires are numbered from 1.", line_no)
        gates.append(CircuitGate(name, wires or (1,)))
    needed = max((w for g in gates for w in g.wires), default=1)
    if n_wires is not None and n_wires < needed:
        raise CompileError(f"Circuit addresses wire {needed} but only {n_wires} wire(s) were declared.")
    return CircuitProgram(tuple(gates), n_wires or needed)


def _as_program(circuit: CircuitProgram | Sequence[str]) -> CircuitProgram:
    if isinstance(circuit, CircuitProgram):
        return circuit
    return parse_circuit("\n".join(circuit))


# --- Compiled programs ---
@dataclass(frozen=True, eq=False)
class Segment:
    """
    One adiabatic drag of a compiled program.

    Attributes:
        index (int): 1-based position in the program.
        label (str): Cyclic label H1/H2/H3.
        kind (str): "agt" (teleports data) or "agp" (rotates a standing pair).
        gate (str | None): Circuit gate imprinted by this segment.
        window (tuple[int, ...]): Qubits whose couplings change.
    """
    index: int
    label: str
    kind: str
    gate: str | None
    window: tuple[int, ...]
    hamiltonian: TimeDependentHamiltonian
    data_qubits: tuple[int, ...] = ()
    output_qubits: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class CompiledProgram:
    layout: str
    circuit: CircuitProgram
    n_qubits: int
    segments: tuple[Segment, ...]
    data_qubits: tuple[int, ...]
    output_qubits: tuple[int, ...]
    initial_pairs: tuple[tuple[int, int], ...] = ()
    initial_gates: tuple[GateSpec, ...] = ()
    final_pairs: tuple[tuple[int, int], ...] = ()
    gadgetized: bool = False
    emission_only: bool = False
    omega: float = 1.0
    notes: dict = field(default_factory=dict)

    @property
    def n_wires(self) -> int:
        return self.circuit.n_wires

    def initial_state(self, psi_in: StateVector) -> StateVector:
        pieces = {self.data_qubits: psi_in}
        pieces.update({pair: StateVector.bell() for pair in self.initial_pairs})
        state = place(pieces, self.n_qubits)
        for g in self.initial_gates:
            state = apply_gate(state, g)
        return state

    def target_state(self, psi_in: StateVector) -> StateVector:
        pieces = {pair: StateVector.bell() for pair in self.final_pairs}
        pieces[self.output_qubits] = self.circuit.apply(psi_in)
        return place(pieces, self.n_qubits)

    def continuity_residuals(self) -> list[float]:
        """Max coefficient mismatch between H(1) of segment k and H(0) of segment k+1."""
        return [
            _pauli_distance(left.hamiltonian.at(1.0), right.hamiltonian.at(0.0))
            for left, right in zip(self.segments, self.segments[1:])
        ]

    def check_structure(self):
        """
        Raises:
            ConsistencyError: If continuity or the cyclic labeling is broken.
        """
        for k, residual in enumerate(self.continuity_residuals(), start=1):
            if residual > CONTINUITY_TOL:
                raise ConsistencyError(f"Segments {k} and {k + 1} do not join (mismatch {residual}).")
        for segment in self.segments:
            if segment.label != cyclic_label(segment.index):
                raise ConsistencyError(f"Segment {segment.index} carries label {segment.label}.")


def cyclic_label(index: int) -> str:
    return f"H{(index - 1) % 3 + 1}"


def _pauli_distance(a: PauliSum, b: PauliSum) -> float:
    left = dict(a.simplify().to_pairs())
    right = dict(b.simplify().to_pairs())
    return max((abs(left.get(k, 0.0) - right.get(k, 0.0)) for k in left.keys() | right.keys()), default=0.0)


def _total(parts: Sequence[PauliSum]) -> PauliSum | None:
    parts = [p for p in parts if p.terms]
    if not parts:
        return None
    result = parts[0]
    for p in parts[1:]:
        result = result + p
    return result


def compile_chain(circuit: CircuitProgram | Sequence[str], omega: float = 1.0) -> CompiledProgram:
    """
    Compiles a one-wire circuit onto a chain of 2l+1 qubits.

    Segment i drags the data from qubit 2i−1 to 2i+1: initial coupling U_i-conjugated
    on (2i, 2i+1), final coupling on (2i−1, 2i). Couplings of other pairs stay on.

    Raises:
        CompileError: For CZ or more than one wire.
    """
    program = _as_program(circuit)
    if program.n_wires != 1 or any(g.name == "CZ" for g in program.gates):
        raise CompileError("The chain layout compiles single-wire circuits over A and B; use the 3n layout for CZ.")
    length = program.length
    n = 2 * length + 1
    gates = [gate(g.name, 2 * i + 1) for i, g in enumerate(program.gates, start=1)]
    conjugated = [conjugate(standard_pair(2 * i, 2 * i + 1, omega, n), u) for i, u in enumerate(gates, start=1)]
    finals = [standard_pair(2 * i - 1, 2 * i, omega, n) for i in range(1, length + 1)]

    segments = []
    for i in range(1, length + 1):
        static = _total(finals[:i - 1] + conjugated[i:])
        segments.append(Segment(
            index=i,
            label=cyclic_label(i),
            kind="agt",
            gate=program.gates[i - 1].name,
            window=(2 * i - 1, 2 * i, 2 * i + 1),
            hamiltonian=TimeDependentHamiltonian(conjugated[i - 1], finals[i - 1], static_terms=static),
            data_qubits=(2 * i - 1,),
            output_qubits=(2 * i + 1,),
        ))

    compiled = CompiledProgram(
        layout="chain",
        circuit=program,
        n_qubits=n,
        segments=tuple(segments),
        data_qubits=(1,),
        output_qubits=(n,),
        initial_pairs=tuple((2 * i, 2 * i + 1) for i in range(1, length + 1)),
        initial_gates=tuple(gates),
        final_pairs=tuple((2 * i - 1, 2 * i) for i in range(1, length + 1)),
        omega=omega,
    )
    compiled.check_structure()
    log.info(f"[Compiler] Kette kompiliert: {length} Segment(e) auf {n} Qubits.")
    return compiled


def _wire_qubits(w: int) -> tuple[int, int, int]:
    return 3 * w - 2, 3 * w - 1, 3 * w


def compile_3n(circuit: CircuitProgram | Sequence[str], omega: float = 1.0, gadgetized: bool = False,
               coupling: CouplingConfig | None = None, n_wires: int | None = None) -> CompiledProgram:
    """
    Compiles an n-wire circuit onto 3n qubits, teleporting first → third register and back.

    Odd steps move the data from 3w−2 to 3w (initial coupling on (3w−1, 3w)), even
    steps move it back (initial coupling on (3w−2, 3w−1)). Every step moves all wires;
    wires without a gate are teleported unchanged.

    Args:
        circuit: Program or circuit lines.
        omega (float): Pair coupling strength.
        gadgetized (bool): Replace the three-body CZ by the two-body gadget (emission only).
        coupling (CouplingConfig | None): Gadget couplings; defaults to ω and λ = 0.1·ω.
        n_wires (int | None): Wire count when circuit lines are given.

    Raises:
        CompileError: For CZ after the first step or an invalid gadgetized circuit.
    """
    program = _as_program(circuit)
    if n_wires is not None and n_wires != program.n_wires:
        program = CircuitProgram(program.gates, n_wires)
    if gadgetized:
        return _compile_gadgetized(program, coupling or CouplingConfig(omega=omega, lam=0.1 * omega))

    n_wires = program.n_wires
    n = 3 * n_wires
    first = tuple(_wire_qubits(w)[0] for w in range(1, n_wires + 1))
    third = tuple(_wire_qubits(w)[2] for w in range(1, n_wires + 1))

    def pairs_for(step: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]], dict[int, int]]:
        """(initial pairs, final pairs, wire → destination qubit) of a step."""
        initial, final, destination = [], [], {}
        for w in range(1, n_wires + 1):
            a, m, c = _wire_qubits(w)
            if step % 2:
                initial.append((m, c))
                final.append((a, m))
                destination[w] = c
            else:
                initial.append((a, m))
                final.append((m, c))
                destination[w] = a
        return initial, final, destination

    def plain(pairs):
        return _total([standard_pair(a, b, omega, n) for a, b in pairs])

    segments: list[Segment] = []
    initial_gates: tuple[GateSpec, ...] = ()
    initial_pairs = [(_wire_qubits(w)[1], _wire_qubits(w)[2]) for w in range(1, n_wires + 1)]
    final_pairs = initial_pairs

    for step, g in enumerate(program.gates, start=1):
        initial, final, destination = pairs_for(step)
        spec = gate(g.name, *(destination[w] for w in g.wires))
        source = first if step % 2 else third
        target = third if step % 2 else first

        if step == 1:
            initial_gates = (spec,)
        elif g.name == "CZ":
            raise CompileError(
                f"CZ at step {step}: a standing pair can only be re-prepared by AGP, which supports A and B."
            )
        else:
            wire = g.wires[0]
            gated_pair = initial[wire - 1]
            standing = [p for i, p in enumerate(initial) if i != wire - 1]
            h_pair = standard_pair(*gated_pair, omega, n)
            index = len(segments) + 1
            segments.append(Segment(
                index=index,
                label=cyclic_label(index),
                kind="agp",
                gate=str(g),
                window=tuple(sorted(gated_pair)),
                hamiltonian=TimeDependentHamiltonian(h_pair, conjugate(h_pair, spec),
                                                     static_terms=plain(standing) if standing else None),
            ))

        index = len(segments) + 1
        segments.append(Segment(
            index=index,
            label=cyclic_label(index),
            kind="agt",
            gate=str(g),
            window=tuple(range(1, n + 1)),
            hamiltonian=TimeDependentHamiltonian(conjugate(plain(initial), spec), plain(final)),
            data_qubits=source,
            output_qubits=target,
        ))
        final_pairs = final

    compiled = CompiledProgram(
        layout="3n",
        circuit=program,
        n_qubits=n,
        segments=tuple(segments),
        data_qubits=first,
        output_qubits=third if program.length % 2 else first,
        initial_pairs=tuple(initial_pairs),
        initial_gates=initial_gates,
        final_pairs=tuple(final_pairs),
        emission_only=n > MAX_SIMULATED_QUBITS,
        omega=omega,
    )
    compiled.check_structure()
    log.info(f"[Compiler] 3n-Layout kompiliert: {len(segments)} Segment(e) auf {n} Qubits.")
    return compiled


def _compile_gadgetized(program: CircuitProgram, coupling: CouplingConfig) -> CompiledProgram:
    if program.n_wires != 2 or [g.name for g in program.gates] != ["CZ"]:
        raise CompileError("The gadgetized layout compiles exactly one CZ step on two wires.")
    system = gadget_hamiltonians(coupling)
    segment = Segment(
        index=1,
        label=cyclic_label(1),
        kind="agt",
        gate=str(program.gates[0]),
        window=tuple(range(1, 9)),
        hamiltonian=system.hamiltonian(),
        data_qubits=(1, 5),
        output_qubits=(3, 4, 7, 8),
    )
    log.info("[Compiler] Gadget-Layout kompiliert: 1 Segment auf 8 Qubits (nur Ausgabe).")
    return CompiledProgram(
        layout="3n",
        circuit=program,
        n_qubits=8,
        segments=(segment,),
        data_qubits=(1, 5),
        output_qubits=(3, 4, 7, 8),
        final_pairs=((1, 2), (5, 6)),
        gadgetized=True,
        emission_only=True,
        omega=coupling.omega,
        notes={"lambda": coupling.lam, "r": coupling.r},
    )


# --- Simulation ---
def simulate_program(program: CompiledProgram, psi_in: StateVector, t_per_segment: float = 50.0,
                     steps: int | None = None, segment_times: Sequence[float] | None = None,
                     method: str = "spectral", with_gap: bool = True, name: str | None = None) -> RunReport:
    """
    Propagates a compiled program segment by segment.

    Args:
        program (CompiledProgram): Output of compile_chain / compile_3n.
        psi_in (StateVector): Input on the logical wires.
        t_per_segment (float): Uniform T per segment.
        steps (int | None): Steps per segment; default from T.
        segment_times (Sequence[float] | None): Per-segment T override.

    Returns:
        RunReport: Fidelity against the whole-circuit unitary applied to ψ_in at the
            final data location; min_gap is the smallest over all segments.

    Raises:
        ResourceError: Above 8 physical qubits or for emission-only programs.
        DomainError: If segment_times does not match the segment count.
    """
    name = name or f"{program.layout}-program"
    log_prefix = f"[Run: {name}]"
    if program.emission_only or program.n_qubits > MAX_SIMULATED_QUBITS:
        raise ResourceError(
            f"Program on {program.n_qubits} qubits is emission-only; simulation is limited to {MAX_SIMULATED_QUBITS}."
        )
    times = list(segment_times) if segment_times is not None else [t_per_segment] * len(program.segments)
    if len(times) != len(program.segments):
        raise DomainError(f"{len(times)} segment times given for {len(program.segments)} segments.")

    log.info(f"{log_prefix} Starte Simulation von {len(program.segments)} Segment(en).")
    state = program.initial_state(psi_in)
    target = program.target_state(psi_in)
    min_gap, min_gap_s, total_steps = None, None, 0
    for segment, total_time in zip(program.segments, times):
        cfg = PropagationConfig.for_time(total_time, steps, method, program.omega)
        log.info(f"{log_prefix} Segment {segment.index} ({segment.label}, {segment.kind}, {segment.gate}): T={total_time}.")
        state = propagate(segment.hamiltonian, state, cfg)
        total_steps += cfg.steps
        if with_gap:
            profile = gap_profile(segment.hamiltonian, degeneracy_tol=DEFAULT_DEGENERACY_TOL * program.omega)
            if min_gap is None or profile.min_gap < min_gap:
                min_gap, min_gap_s = profile.min_gap, profile.min_s

    if program.segments:
        projector, _ = ground_projector(program.segments[-1].hamiltonian.matrix(1.0),
                                        DEFAULT_DEGENERACY_TOL * program.omega)
        leak = leakage(state, projector)
    else:
        leak = 0.0

    report = RunReport(
        name=name,
        protocol=f"{program.layout}-program",
        n_qubits=program.n_qubits,
        fidelity=fidelity(state, target),
        residual=orthogonal_residual(state, target),
        leakage=leak,
        min_gap=min_gap,
        min_gap_s=min_gap_s,
        total_time=float(sum(times)),
        steps=total_steps,
        method=method,
        final_state=state.as_pairs(),
        config={"circuit": [str(g) for g in program.circuit.gates], "layout": program.layout,
                "segment_times": times, "omega": program.omega, "input_state": psi_in.as_pairs()},
    )
    log.info(f"{log_prefix} Abgeschlossen: Fidelity={report.fidelity:.9f}.")
    return report


def _entries(pauli_sum: PauliSum | None) -> list[TermEntry]:
    if pauli_sum is None:
        return []
    return [TermEntry(pauli=letters, coefficient=c) for letters, c in pauli_sum.to_pairs()]


def program_to_file(program: CompiledProgram) -> CompiledProgramFile:
    """JSON schedule with the full term lists of every segment."""
    return CompiledProgramFile(
        layout=program.layout,
        n_wires=program.n_wires,
        n_qubits=program.n_qubits,
        gadgetized=program.gadgetized,
        emission_only=program.emission_only,
        circuit=[str(g) for g in program.circuit.gates],
        data_qubits=list(program.data_qubits),
        output_qubits=list(program.output_qubits),
        segments=[
            SegmentEntry(
                index=s.index,
                label=s.label,
                kind=s.kind,
                gate=s.gate,
                window=list(s.window),
                h_initial=_entries(s.hamiltonian.h_initial),
                h_final=_entries(s.hamiltonian.h_final),
                static_terms=_entries(s.hamiltonian.static_terms),
            )
            for s in program.segments
        ],
    )
