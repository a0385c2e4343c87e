"""
Tests for agt_simulator.pauli: parsing, realization, commutation, diagonal expansion.
"""
from itertools import product

import numpy as np
import pytest

from agt_simulator.errors import DomainError, ParseError, QubitIndexError, StructuralError
from agt_simulator.pauli import (
    LogicalFrame,
    PauliSum,
    PauliTerm,
    commutes,
    diagonal_sum,
    max_entry,
    parse_pauli,
    pauli_on,
    realize,
    single_qubit_matrix,
    term_matrix,
)

X = single_qubit_matrix("X")
Z = single_qubit_matrix("Z")
I2 = np.eye(2)


class TestParsePauli:

    def test_valid_label(self):
        term = parse_pauli("XXI", -1.0)
        assert term.letters == "XXI"
        assert term.coefficient == -1.0
        assert term.support == (1, 2)
        assert term.arity == 2

    def test_invalid_character_reports_position(self):
        with pytest.raises(ParseError) as excinfo:
            parse_pauli("XQZ", 1.0)
        assert excinfo.value.position == 2

    def test_empty_label_is_structural(self):
        with pytest.raises(StructuralError):
            parse_pauli("")

    def test_complex_coefficient_rejected(self):
        with pytest.raises(DomainError):
            PauliTerm("XX", 1j)

    def test_pauli_on_places_letters(self):
        assert pauli_on(3, {2: "X", 3: "X"}).letters == "IXX"
        with pytest.raises(QubitIndexError):
            pauli_on(3, {4: "Z"})


class TestRealize:

    def test_bell_coupling(self):
        h = PauliSum.from_labels([("XX", -1.0), ("ZZ", -1.0)])
        expected = -(np.kron(X, X) + np.kron(Z, Z))
        assert np.allclose(realize(h), expected, atol=1e-12)

    def test_qubit_one_is_most_significant(self):
        assert np.allclose(np.diag(realize(PauliSum.from_labels([("ZI", 1.0)]))).real, [1, 1, -1, -1])
        assert np.allclose(np.diag(realize(PauliSum.from_labels([("IZ", 1.0)]))).real, [1, -1, 1, -1])

    def test_result_is_hermitian(self):
        h = PauliSum.from_labels([("XY", 0.3), ("YZ", -1.2), ("ZI", 0.7)])
        m = realize(h)
        assert np.allclose(m, m.conj().T, atol=1e-12)

    def test_empty_sum_cannot_be_realized(self):
        with pytest.raises(StructuralError):
            realize(PauliSum.empty(2))

    def test_mixed_lengths_rejected(self):
        with pytest.raises(StructuralError):
            PauliSum((parse_pauli("XX"), parse_pauli("XXX")), 2)


class TestPauliSum:

    def test_simplify_merges_and_drops(self):
        h = PauliSum.from_labels([("XX", 1.0), ("ZZ", 0.5), ("XX", -1.0), ("ZZ", 0.5)])
        assert h.simplify().to_pairs() == [("ZZ", 1.0)]

    def test_add_requires_same_register(self):
        with pytest.raises(StructuralError):
            PauliSum.from_labels([("XX", 1.0)]) + PauliSum.from_labels([("XXX", 1.0)])

    def test_scaled(self):
        h = PauliSum.from_labels([("XZ", 2.0)]).scaled(-0.5)
        assert h.to_pairs() == [("XZ", -1.0)]

    def test_diagonal_sum_matches_values(self):
        values = [3.0, 1.0, 2.0, 1.0]
        assert np.allclose(np.diag(realize(diagonal_sum(values))).real, values, atol=1e-12)
        assert all(set(t.letters) <= {"I", "Z"} for t in diagonal_sum(values))


class TestCommutes:

    def test_single_site(self):
        assert commutes(parse_pauli("X"), parse_pauli("X")) is True
        assert commutes(parse_pauli("X"), parse_pauli("Z")) is False
        assert commutes(parse_pauli("I"), parse_pauli("Y")) is True

    def test_two_clashes_commute(self):
        assert commutes(parse_pauli("XX"), parse_pauli("ZZ")) is True
        assert commutes(parse_pauli("XXI"), parse_pauli("IZZ")) is False

    def test_agrees_with_matrices(self):
        labels = ["XYZ", "ZZI", "IXX", "YIY", "XXX", "ZZZ"]
        for a in labels:
            for b in labels:
                ma, mb = realize(PauliSum.from_labels([(a, 1.0)])), realize(PauliSum.from_labels([(b, 1.0)]))
                assert commutes(parse_pauli(a), parse_pauli(b)) == np.allclose(ma @ mb, mb @ ma)

    def test_exhaustive_three_qubit_strings(self):
        labels = ["".join(letters) for letters in product("IXYZ", repeat=3)]
        matrices = {label: term_matrix(parse_pauli(label)) for label in labels}
        for a in labels:
            for b in labels:
                ma, mb = matrices[a], matrices[b]
                assert commutes(parse_pauli(a), parse_pauli(b)) == (max_entry(ma @ mb - mb @ ma) < 1e-12)

    def test_length_mismatch(self):
        with pytest.raises(StructuralError):
            commutes(parse_pauli("XX"), parse_pauli("X"))


class TestLogicalFrame:

    def test_standard_frame_is_a_valid_algebra(self):
        residuals = LogicalFrame.standard().pattern_residuals()
        assert len(residuals) == 15
        assert max(value for _, value in residuals) <= 1e-12

    def test_corrupted_frame_is_detected(self):
        frame = LogicalFrame.standard()
        broken = LogicalFrame(x=(frame.x[0], parse_pauli("IXZ"), frame.x[2]), z=frame.z)
        assert max(value for _, value in broken.pattern_residuals()) > 1.0
