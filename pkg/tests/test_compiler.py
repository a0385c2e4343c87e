"""
Tests for agt_simulator.compiler: circuit parsing, chain and 3n layouts, simulation and
the JSON schedule.
"""
import math

import numpy as np
import pytest

from agt_simulator.compiler import (
    CircuitGate,
    CircuitProgram,
    compile_3n,
    compile_chain,
    parse_circuit,
    program_to_file,
    simulate_program,
)
from agt_simulator.dynamics import StateVector, random_states
from agt_simulator.errors import CompileError, DomainError, ParseError, ResourceError, StructuralError
from agt_simulator.hamiltonian import GATE_MATRICES
from agt_simulator.protocols import agt_single, agt_two_qubit, run_protocol
from agt_simulator.spectral import gap_profile

SQRT2 = math.sqrt(2.0)


class TestParseCircuit:

    def test_lines_comments_and_wires(self):
        program = parse_circuit("# header\nA\n\nB 2   # second wire\nCZ 1 2\n")
        assert [str(g) for g in program.gates] == ["A 1", "B 2", "CZ 1 2"]
        assert program.n_wires == 2
        assert program.length == 3

    def test_file(self, circuit_file):
        program = parse_circuit(circuit_file.read_text(encoding="utf-8"))
        assert [g.name for g in program.gates] == ["A", "B", "A"]

    def test_bad_wire_reports_line(self):
        with pytest.raises(ParseError) as excinfo:
            parse_circuit("A\nB x\n")
        assert excinfo.value.position == 2

    def test_wire_zero(self):
        with pytest.raises(ParseError):
            parse_circuit("A 0")

    @pytest.mark.parametrize("text", ["X", "CZ 1", "CZ 1 1", "A 1 2"])
    def test_unsupported_lines(self, text):
        with pytest.raises(CompileError):
            parse_circuit(text)

    def test_declared_wires_too_few(self):
        with pytest.raises(CompileError):
            parse_circuit("B 3", n_wires=2)

    def test_circuit_unitary(self):
        program = CircuitProgram((CircuitGate("A"), CircuitGate("B")))
        psi = StateVector.basis("+")
        expected = GATE_MATRICES["B"] @ GATE_MATRICES["A"] @ psi.amplitudes
        assert np.allclose(program.apply(psi).amplitudes, expected)


class TestChainLayout:

    def test_structure(self):
        program = compile_chain(["A", "B", "A", "B"])
        assert program.n_qubits == 9
        assert [s.label for s in program.segments] == ["H1", "H2", "H3", "H1"]
        assert [s.window for s in program.segments][:2] == [(1, 2, 3), (3, 4, 5)]
        assert max(program.continuity_residuals()) <= 1e-12
        assert program.output_qubits == (9,)

    def test_idle_pairs_stay_on(self):
        segment = compile_chain(["A", "B", "A"]).segments[1]
        supports = {term.support for term in segment.hamiltonian.static_terms}
        assert (1, 2) in supports
        assert any(set(s) <= {6, 7} for s in supports)

    def test_rejects_cz_and_wires(self):
        with pytest.raises(CompileError):
            compile_chain(["CZ 1 2"])
        with pytest.raises(CompileError):
            compile_chain(["A 2"])

    def test_empty_circuit(self):
        program = compile_chain([])
        assert program.n_qubits == 1 and program.segments == ()
        report = simulate_program(program, StateVector.basis("+"))
        assert report.fidelity == pytest.approx(1.0)
        assert report.leakage == 0.0 and report.min_gap is None

    def test_segment_gaps(self):
        for segment in compile_chain(["A", "B"]).segments:
            assert gap_profile(segment.hamiltonian).min_gap == pytest.approx(SQRT2, abs=1e-6)

    def test_single_gate_matches_protocol(self):
        psi = random_states(1, 1, seed=41)[0]
        compiled = simulate_program(compile_chain(["A"]), psi, 50.0, with_gap=False)
        direct = run_protocol(agt_single("A"), psi, 50.0, with_gap=False)
        assert compiled.fidelity == pytest.approx(direct.fidelity, abs=1e-10)

    def test_composition(self):
        psi = random_states(1, 1, seed=43)[0]
        pair = simulate_program(compile_chain(["A", "B"]), psi, 50.0, with_gap=False)
        single_a = run_protocol(agt_single("A"), psi, 50.0, with_gap=False)
        single_b = run_protocol(agt_single("B"), psi, 50.0, with_gap=False)
        assert pair.fidelity >= single_a.fidelity * single_b.fidelity - 1e-3

    @pytest.mark.slow
    def test_aba_program(self, circuit_file):
        program = compile_chain(parse_circuit(circuit_file.read_text(encoding="utf-8")))
        assert program.n_qubits == 7
        for psi in random_states(1, 3, seed=47):
            report = simulate_program(program, psi, 50.0)
            assert report.fidelity >= 0.997
            assert report.min_gap == pytest.approx(SQRT2, abs=1e-6)


class Test3nLayout:

    def test_cz_matches_two_qubit_protocol(self):
        program = compile_3n(["CZ 1 2"])
        assert program.n_qubits == 6 and len(program.segments) == 1
        reference = agt_two_qubit().hamiltonian
        for s in (0.0, 0.5, 1.0):
            assert np.allclose(program.segments[0].hamiltonian.matrix(s), reference.matrix(s))

    def test_agp_is_inserted_before_later_steps(self):
        program = compile_3n(["A", "B"])
        assert [s.kind for s in program.segments] == ["agt", "agp", "agt"]
        assert [s.label for s in program.segments] == ["H1", "H2", "H3"]
        assert program.output_qubits == (1,)
        assert max(program.continuity_residuals()) <= 1e-12

    def test_two_alternating_teleport_segments(self):
        program = compile_3n(["A", "B"])
        teleports = [s for s in program.segments if s.kind == "agt"]
        assert len(teleports) == 2
        assert [(s.data_qubits, s.output_qubits) for s in teleports] == [((1,), (3,)), ((3,), (1,))]
        (agp_segment,) = [s for s in program.segments if s.kind == "agp"]
        assert agp_segment.window == (1, 2) and agp_segment.gate == "B 1"

    def test_agp_segment_gap(self):
        agp_segment = compile_3n(["A", "B"]).segments[1]
        assert gap_profile(agp_segment.hamiltonian).min_gap == pytest.approx(math.sqrt(2 + SQRT2), abs=1e-6)

    def test_two_step_program(self):
        psi = random_states(1, 1, seed=53)[0]
        report = simulate_program(compile_3n(["A", "B"]), psi, 50.0, with_gap=False)
        assert report.fidelity >= 0.999

    def test_gate_on_second_wire(self):
        psi = random_states(2, 1, seed=59)[0]
        program = compile_3n(["A 2"])
        assert program.output_qubits == (3, 6)
        assert simulate_program(program, psi, 50.0, with_gap=False).fidelity >= 0.999

    def test_cz_after_first_step(self):
        with pytest.raises(CompileError):
            compile_3n(["A 1", "CZ 1 2"])

    def test_empty_circuit_keeps_state(self):
        program = compile_3n(CircuitProgram((), n_wires=2))
        psi = StateVector.basis("+1")
        assert np.allclose(program.initial_state(psi).amplitudes, program.target_state(psi).amplitudes)

    def test_large_programs_are_emission_only(self):
        program = compile_3n(["A 1", "B 3"])
        assert program.n_qubits == 9 and program.emission_only
        with pytest.raises(ResourceError):
            simulate_program(program, StateVector.basis("000"))

    def test_gadgetized_cz(self):
        program = compile_3n(["CZ 1 2"], gadgetized=True)
        assert program.gadgetized and program.emission_only and program.n_qubits == 8
        assert all(term.arity <= 2 for term in program.segments[0].hamiltonian.h_initial)
        with pytest.raises(ResourceError):
            simulate_program(program, StateVector.basis("00"))

    def test_gadgetized_needs_single_cz(self):
        with pytest.raises(CompileError):
            compile_3n(["A"], gadgetized=True)


class TestSimulationErrors:

    def test_segment_times_length(self):
        with pytest.raises(DomainError):
            simulate_program(compile_chain(["A", "B"]), StateVector.basis("0"), segment_times=[10.0])

    def test_input_size(self):
        with pytest.raises(StructuralError):
            simulate_program(compile_chain(["A"]), StateVector.basis("00"))

    def test_per_segment_times(self):
        report = simulate_program(compile_chain(["A", "B"]), StateVector.basis("0"),
                                  segment_times=[30.0, 40.0], with_gap=False)
        assert report.total_time == pytest.approx(70.0)
        assert report.config["segment_times"] == [30.0, 40.0]


class TestProgramFile:

    def test_schedule_json(self):
        data = program_to_file(compile_3n(["A", "B"])).model_dump(mode="json")
        assert data["layout"] == "3n" and data["n_qubits"] == 3
        assert [s["kind"] for s in data["segments"]] == ["agt", "agp", "agt"]
        assert data["segments"][0]["h_final"] == [{"pauli": "XXI", "coefficient": -1.0},
                                                  {"pauli": "ZZI", "coefficient": -1.0}]
        assert data["circuit"] == ["A 1", "B 1"]
