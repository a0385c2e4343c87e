"""
Tests for agt_simulator.dynamics: state vectors, gate application, metrics, propagation.
"""
import numpy as np
import pytest

from agt_simulator.dynamics import (
    StateVector,
    apply_gate,
    fidelity,
    leakage,
    orthogonal_residual,
    place,
    propagate,
    random_states,
)
from agt_simulator.errors import DomainError, ParseError, QubitIndexError, StructuralError
from agt_simulator.hamiltonian import gate
from agt_simulator.models import PropagationConfig
from agt_simulator.protocols import teleportation_protocol
from agt_simulator.spectral import ground_projector


class TestStateVector:

    def test_length_must_be_power_of_two(self):
        with pytest.raises(StructuralError):
            StateVector(np.ones(3) / np.sqrt(3))

    def test_norm_is_checked(self):
        with pytest.raises(DomainError):
            StateVector(np.array([1.0, 1.0]))

    def test_basis_labels(self):
        psi = StateVector.basis("+1")
        assert psi.n_qubits == 2
        assert np.allclose(psi.amplitudes, [0, 1 / np.sqrt(2), 0, 1 / np.sqrt(2)])

    def test_invalid_label_position(self):
        with pytest.raises(ParseError) as excinfo:
            StateVector.basis("0a")
        assert excinfo.value.position == 2

    def test_amplitudes_are_renormalized(self):
        psi = StateVector.from_amplitudes(3.0, 4.0)
        assert np.allclose(psi.amplitudes, [0.6, 0.8])

    def test_amplitudes_are_read_only(self):
        with pytest.raises(ValueError):
            StateVector.bell().amplitudes[0] = 0.0

    def test_random_states_are_reproducible(self):
        a = random_states(2, 3, seed=5)
        b = random_states(2, 3, seed=5)
        assert all(np.array_equal(x.amplitudes, y.amplitudes) for x, y in zip(a, b))


class TestPlaceAndGates:

    def test_place_orders_qubits(self):
        psi = place({(3,): StateVector.basis("1"), (1, 2): StateVector.basis("00")}, 3)
        assert fidelity(psi, StateVector.basis("001")) == pytest.approx(1.0)

    def test_place_bell_on_non_adjacent_qubits(self):
        psi = place({(1, 3): StateVector.bell(), (2,): StateVector.basis("0")}, 3)
        expected = (StateVector.basis("000").amplitudes + StateVector.basis("101").amplitudes) / np.sqrt(2)
        assert np.allclose(psi.amplitudes, expected)

    def test_place_requires_partition(self):
        with pytest.raises(QubitIndexError):
            place({(1,): StateVector.basis("0")}, 2)

    def test_apply_single_qubit_gate(self):
        flipped = apply_gate(StateVector.basis("000"), gate("X", 2))
        assert fidelity(flipped, StateVector.basis("010")) == pytest.approx(1.0)

    def test_apply_cz_on_non_adjacent_qubits(self):
        psi = apply_gate(StateVector.basis("+0+"), gate("CZ", 1, 3))
        expected = StateVector.basis("+0+").amplitudes * np.array([1, 1, 1, 1, 1, -1, 1, -1])
        assert np.allclose(psi.amplitudes, expected)

    def test_gate_outside_register(self):
        with pytest.raises(QubitIndexError):
            apply_gate(StateVector.basis("0"), gate("X", 2))


class TestMetrics:

    def test_fidelity_ignores_global_phase(self):
        psi = StateVector.basis("+")
        assert fidelity(StateVector(1j * psi.amplitudes), psi) == pytest.approx(1.0)

    def test_fidelity_and_residual_sum_to_one(self, rng):
        a, b = StateVector.random(3, rng), StateVector.random(3, rng)
        assert fidelity(a, b) + orthogonal_residual(a, b) == pytest.approx(1.0, abs=1e-12)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a))

    def test_dimension_mismatch(self):
        with pytest.raises(StructuralError):
            fidelity(StateVector.basis("0"), StateVector.basis("00"))

    def test_leakage(self):
        projector = np.diag([1.0, 0.0])
        assert leakage(StateVector.basis("0"), projector) == pytest.approx(0.0)
        assert leakage(StateVector.basis("+"), projector) == pytest.approx(0.5)
        with pytest.raises(StructuralError):
            leakage(StateVector.basis("00"), projector)


class TestPropagate:

    def test_teleportation_is_adiabatic_at_large_t(self):
        spec = teleportation_protocol()
        psi = StateVector.basis("+")
        final = propagate(spec.hamiltonian, spec.initial_state(psi), PropagationConfig.for_time(50.0))
        assert fidelity(final, spec.target_state(psi)) >= 1 - 1e-4
        assert leakage(final, ground_projector(spec.hamiltonian.matrix(1.0))[0]) <= 1e-4

    def test_methods_agree(self):
        spec = teleportation_protocol()
        psi0 = spec.initial_state(StateVector.basis("1"))
        a = propagate(spec.hamiltonian, psi0, PropagationConfig.for_time(5.0, 500, "spectral"))
        b = propagate(spec.hamiltonian, psi0, PropagationConfig.for_time(5.0, 500, "expm"))
        assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-10)

    @pytest.mark.parametrize(("total_time", "method"), [(50.0, "spectral"), (5.0, "expm")])
    def test_norm_is_not_rescaled(self, total_time, method):
        spec = teleportation_protocol()
        psi0 = spec.initial_state(random_states(1, 1, seed=5)[0])
        final = propagate(spec.hamiltonian, psi0, PropagationConfig.for_time(total_time, method=method))
        assert abs(np.linalg.norm(final.amplitudes) - 1.0) <= 1e-12

    def test_step_halving_converges(self):
        spec = teleportation_protocol()
        psi = random_states(1, 1, seed=3)[0]
        target = spec.target_state(psi)
        coarse = propagate(spec.hamiltonian, spec.initial_state(psi), PropagationConfig.for_time(20.0, 2000))
        fine = propagate(spec.hamiltonian, spec.initial_state(psi), PropagationConfig.for_time(20.0, 4000))
        assert abs(fidelity(coarse, target) - fidelity(fine, target)) < 1e-6

    def test_dimension_mismatch(self):
        spec = teleportation_protocol()
        with pytest.raises(StructuralError):
            propagate(spec.hamiltonian, StateVector.basis("00"), PropagationConfig.for_time(1.0))

    def test_default_steps(self):
        assert PropagationConfig.for_time(50.0).steps == 5000
        assert PropagationConfig.for_time(1.0).steps == 1000
        with pytest.raises(DomainError):
            PropagationConfig.for_time(1.0, steps=5)
        with pytest.raises(DomainError):
            PropagationConfig.for_time(-1.0)
