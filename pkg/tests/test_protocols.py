"""
Tests for agt_simulator.protocols: gaps, gate correctness, isotropic and no-go variants,
the logical frame check, sweeps and protocol files.
"""
import math

import numpy as np
import pytest

from agt_simulator.dynamics import StateVector, random_states
from agt_simulator.errors import DomainError, StructuralError, UnsupportedGateError
from agt_simulator.hamiltonian import SMOOTHSTEP
from agt_simulator.models import NoGoConfig
from agt_simulator.pauli import LogicalFrame, parse_pauli
from agt_simulator.protocols import (
    adiabatic_sweep,
    agp,
    agt_single,
    agt_two_qubit,
    build_protocol,
    isotropic_teleportation,
    logical_frame_check,
    no_go_diagonal,
    protocol_from_file,
    protocol_to_file,
    run_protocol,
    teleportation_protocol,
)
from agt_simulator.spectral import gap_at, gap_profile

SQRT2 = math.sqrt(2.0)


class TestGaps:

    @pytest.mark.parametrize("name", ["I", "H", "A", "B"])
    def test_agt_is_isospectral_to_teleportation(self, name):
        profile = gap_profile(agt_single(name).hamiltonian)
        assert profile.min_gap == pytest.approx(SQRT2, abs=1e-6)
        assert profile.min_s == pytest.approx(0.5, abs=1e-3)

    def test_agp_a(self):
        assert gap_profile(agp("A").hamiltonian).min_gap == pytest.approx(SQRT2, abs=1e-6)

    def test_agp_b(self):
        profile = gap_profile(agp("B").hamiltonian)
        assert profile.min_gap == pytest.approx(math.sqrt(2 + SQRT2), abs=1e-6)
        assert profile.min_gap == pytest.approx(1.847759, abs=1e-6)

    def test_two_qubit_agt(self):
        h = agt_two_qubit().hamiltonian
        profile = gap_profile(h)
        assert profile.min_gap == pytest.approx(SQRT2, abs=1e-6)
        assert gap_at(h, 0.3).ground_degeneracy == 4

    def test_isotropic_gap_minimum_at_midpoint(self):
        profile = gap_profile(isotropic_teleportation().hamiltonian)
        s_min, gap_min = profile.minimum
        assert s_min == pytest.approx(0.5, abs=1e-3)
        assert gap_min == pytest.approx(2.0, abs=1e-6)
        assert {sample.ground_degeneracy for sample in profile.samples} == {2}

    def test_isotropic_gap_closed_form(self):
        # quartet at +ω, doublets at −ω ± 2ω√q with q = 1 − 3s + 3s²
        profile = gap_profile(isotropic_teleportation().hamiltonian)
        for sample in profile.samples:
            root = math.sqrt(1 - 3 * sample.s + 3 * sample.s ** 2)
            assert sample.gap == pytest.approx(min(4 * root, 2 + 2 * root), abs=1e-9)
        assert profile.gaps()[0] == pytest.approx(4.0, abs=1e-9)

    @pytest.mark.parametrize("name", ["H", "A", "B"])
    def test_agt_profile_matches_teleportation_pointwise(self, name):
        reference = gap_profile(teleportation_protocol().hamiltonian).gaps()
        assert np.allclose(gap_profile(agt_single(name).hamiltonian).gaps(), reference, atol=1e-9, rtol=0.0)

    def test_gap_scales_with_omega(self):
        assert gap_profile(teleportation_protocol(omega=3.0).hamiltonian).min_gap == pytest.approx(3 * SQRT2, abs=1e-6)


class TestConstructionErrors:

    def test_agp_rejects_other_gates(self):
        with pytest.raises(UnsupportedGateError) as excinfo:
            agp("X")
        assert "X_b" in str(excinfo.value)

    def test_agt_rejects_two_qubit_gate(self):
        with pytest.raises(UnsupportedGateError):
            agt_single("CZ")

    def test_isotropic_needs_antiferromagnetic_coupling(self):
        with pytest.raises(DomainError):
            isotropic_teleportation(omega=-1.0)

    def test_teleportation_needs_positive_omega(self):
        with pytest.raises(DomainError):
            teleportation_protocol(omega=0.0)

    def test_unknown_protocol(self):
        with pytest.raises(DomainError):
            build_protocol("swap")

    def test_input_size_is_checked(self):
        with pytest.raises(StructuralError):
            teleportation_protocol().initial_state(StateVector.basis("00"))


class TestGateCorrectness:

    @pytest.mark.parametrize("name", ["I", "H", "A", "B"])
    def test_single_qubit_agt(self, name):
        spec = agt_single(name)
        for psi in random_states(1, 5, seed=17):
            report = run_protocol(spec, psi, total_time=50.0, with_gap=False)
            assert report.fidelity >= 0.999
            assert report.fidelity + report.residual == pytest.approx(1.0, abs=1e-10)

    def test_fine_steps_agree(self):
        spec = agt_single("A")
        psi = random_states(1, 1, seed=23)[0]
        coarse = run_protocol(spec, psi, 50.0, steps=5000, with_gap=False)
        fine = run_protocol(spec, psi, 50.0, steps=50000, with_gap=False)
        assert coarse.fidelity == pytest.approx(fine.fidelity, abs=1e-8)

    @pytest.mark.parametrize("name", ["I", "A"])
    def test_logical_linearity(self, name):
        spec = agt_single(name)
        basis = min(run_protocol(spec, StateVector.basis(label), 50.0, with_gap=False).fidelity for label in "01")
        for psi in random_states(1, 5, seed=37):
            assert run_protocol(spec, psi, 50.0, with_gap=False).fidelity >= basis - 1e-6

    def test_two_qubit_cz(self):
        spec = agt_two_qubit()
        for psi in random_states(2, 2, seed=29) + [StateVector.basis("++")]:
            assert run_protocol(spec, psi, 50.0, with_gap=False).fidelity >= 0.999

    @pytest.mark.parametrize("name", ["A", "B"])
    def test_agp_preparation(self, name):
        report = run_protocol(agp(name), StateVector.basis("+"), 50.0)
        assert report.fidelity >= 0.999
        assert report.leakage <= 1e-3

    def test_smoothstep_schedule(self):
        spec = teleportation_protocol(schedule=SMOOTHSTEP)
        assert run_protocol(spec, StateVector.basis("1"), 50.0, with_gap=False).fidelity >= 0.999


class TestIsotropic:

    def test_template_lies_in_final_ground_space(self, single_qubit_inputs):
        spec = isotropic_teleportation()
        for psi in single_qubit_inputs:
            assert spec.template_residual(psi) <= 1e-10

    def test_run_reaches_template(self):
        spec = isotropic_teleportation()
        for psi in random_states(1, 3, seed=31):
            report = run_protocol(spec, psi, 50.0, with_gap=False)
            assert report.fidelity >= 0.999

    def test_template_carries_input_on_last_qubit(self):
        # singlet on (1, 2) ⊗ ψ on 3, up to a phase
        spec = isotropic_teleportation()
        psi = StateVector.basis("1")
        expected = StateVector.singlet().tensor(psi)
        overlap = abs(np.vdot(expected.amplitudes, spec.target_state(psi).amplitudes)) ** 2
        assert overlap == pytest.approx(1.0, abs=1e-10)


class TestChecks:

    def test_logical_frame_passes(self):
        report = logical_frame_check()
        assert report.passed
        names = [check.name for check in report.checks]
        assert {"[H(s),X1]", "[H(s),Z1]", "ZII=Z1Z3", "XII=X1X2", "IIZ=Z1Z2", "IIX=X1X3",
                "H(s)=logical form"} <= set(names)

    def test_logical_frame_detects_corruption(self):
        frame = LogicalFrame.standard()
        broken = LogicalFrame(x=(frame.x[0], parse_pauli("IXZ"), frame.x[2]), z=frame.z)
        report = logical_frame_check(broken)
        assert not report.passed
        assert "H(s)=logical form" in report.failures

    def test_no_go(self):
        report = no_go_diagonal()
        assert report.passed
        assert report.max_off_diagonal <= 1e-14
        assert report.swap_fidelity <= 1e-12
        assert report.contrast_off_diagonal > 0.1

    def test_no_go_other_parameters(self):
        report = no_go_diagonal(NoGoConfig(delta=(0.5, 4.0, 2.0), gamma=(1.0, 1.5, 3.0), schedule="smoothstep"))
        assert report.passed

    def test_no_go_config_ordering(self):
        with pytest.raises(DomainError):
            NoGoConfig(delta=(3.0, 2.0, 4.0))


class TestSweep:

    def test_infidelity_decreases_with_time(self):
        reports = adiabatic_sweep(teleportation_protocol(schedule=SMOOTHSTEP), [50.0, 0.5, 5.0], StateVector.basis("+"))
        assert [r.total_time for r in reports] == [0.5, 5.0, 50.0]
        infidelities = [r.infidelity for r in reports]
        assert infidelities[0] > infidelities[1] > infidelities[2]
        assert len({r.min_gap for r in reports}) == 1

    def test_linear_ramp_oscillates(self):
        reports = adiabatic_sweep(teleportation_protocol(), [1.0, 5.0, 20.0], StateVector.basis("+"))
        infidelities = [r.infidelity for r in reports]
        assert infidelities[1] < infidelities[2]

    def test_threaded_sweep_matches_serial(self):
        spec = teleportation_protocol()
        serial = adiabatic_sweep(spec, [1.0, 5.0], StateVector.basis("0"))
        threaded = adiabatic_sweep(spec, [5.0, 1.0], StateVector.basis("0"), workers=2)
        assert [r.fidelity for r in serial] == [r.fidelity for r in threaded]


class TestProtocolFiles:

    def test_file_rebuilds_the_same_sweep(self):
        spec = agt_two_qubit()
        data = protocol_to_file(spec)
        rebuilt = protocol_from_file(data)
        assert data.bit_index_map == {"1": 5, "2": 4, "3": 3, "4": 2, "5": 1, "6": 0}
        assert data.target_gate == "CZ" and data.target_qubits == [3, 6]
        for s in (0.0, 0.4, 1.0):
            assert np.allclose(rebuilt.hamiltonian.matrix(s), spec.hamiltonian.matrix(s))

    def test_json_form(self):
        data = protocol_to_file(teleportation_protocol()).model_dump(mode="json")
        assert data["h_initial"] == [{"pauli": "IXX", "coefficient": -1.0}, {"pauli": "IZZ", "coefficient": -1.0}]
        assert data["schedule"] == "linear"
        assert data["initial_pairs"] == [[2, 3]]
