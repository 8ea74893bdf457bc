import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discowalk.layout import build_schedule
from discowalk.logical import (
    RX_NATIVE,
    RY_NATIVE,
    SQRT_Z,
    CircuitError,
    Diagonal,
    Layer,
    LeakageError,
    LogicalCircuit,
    compile_circuit,
    extract_logical_unitary,
    fidelity_up_to_global_phase,
    ideal_unitary,
    sqrt_cz,
    sqrt_z,
    sqrt_z_dag,
    synthesize_su2,
    word_matrix,
)
from discowalk.layout import RoundSpec, build_layout
from discowalk.widgets import make_phase_widget
from oracles import bfs_best_distances

HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
ROT = np.cos(math.sqrt(3) * math.pi) * np.eye(2) - 1j * np.sin(math.sqrt(3) * math.pi) * np.array([[0, 1], [1, 0]])


def extracted(circuit):
    return extract_logical_unitary(*compile_circuit(circuit))


def fid_err(u, v):
    return 1 - fidelity_up_to_global_phase(u, v)


class TestCompile:
    def test_sqrtz_layout(self):
        lay, sch = compile_circuit(LogicalCircuit(1, (Layer(sqrt_z(0)),)))
        assert lay.rounds[0] == RoundSpec(("I", "P"), (False,))
        assert len(sch) == 4

    def test_sqrtcz_only_on_11(self):
        lay, _ = compile_circuit(LogicalCircuit(2, (Layer(sqrt_cz(0, 1)),)))
        assert lay.rounds[0].horizontal == ("I", "I", "I", "P")

    def test_rotation_layout(self):
        lay, _ = compile_circuit(LogicalCircuit(1, (Layer(rotations={0}),)))
        assert lay.rounds[0] == RoundSpec(("I", "I"), (True,))

    def test_empty(self):
        lay, sch = compile_circuit(LogicalCircuit(2))
        assert len(sch) == 0
        np.testing.assert_allclose(extract_logical_unitary(lay, sch), np.eye(4), atol=1e-15)

    def test_bad_circuits(self):
        with pytest.raises(CircuitError):
            LogicalCircuit(0)
        with pytest.raises(CircuitError):
            LogicalCircuit(1, (Layer(sqrt_z(1)),))
        with pytest.raises(CircuitError):
            LogicalCircuit(2, (Layer(rotations={2}),))
        with pytest.raises(CircuitError):
            Diagonal("sqrtcz", (1, 1))
        with pytest.raises(CircuitError):
            Diagonal("toffoli", (0,))
        with pytest.raises(CircuitError):
            Diagonal("sqrtz", (0, 1))
        with pytest.raises(CircuitError):
            LogicalCircuit(1, (Layer(Diagonal("rails", (2,))),))

    def test_rail_assignment(self):
        assert sqrt_z(0).phase_rails(2) == {2, 3}
        assert sqrt_z(1).phase_rails(2) == {1, 3}
        assert sqrt_z_dag(0).phase_rails(1) == {0}
        assert Diagonal("rails", (0, 3)).phase_rails(2) == {0, 3}


class TestExtraction:
    @pytest.mark.parametrize("circuit,expected", [
        (LogicalCircuit(1, (Layer(sqrt_z(0)),)), np.diag([1, 1j])),
        (LogicalCircuit(1, (Layer(sqrt_z_dag(0)),)), np.diag([1, -1j])),
        (LogicalCircuit(1, (Layer(rotations={0}),)), ROT),
        (LogicalCircuit(2, (Layer(sqrt_cz(0, 1)),)), np.diag([1, 1, 1, 1j])),
        (LogicalCircuit(2, (Layer(sqrt_cz(0, 1)),) * 2), CZ),
    ], ids=["sqrtZ", "sqrtZdag", "RX", "sqrtCZ", "CZ"])
    def test_native_gates(self, circuit, expected):
        u = extracted(circuit)
        assert fid_err(u, expected) <= 1e-8
        assert np.max(np.abs(u.conj().T @ u - np.eye(len(u)))) < 1e-8

    def test_sqrtz_global_phase(self):
        u = extracted(LogicalCircuit(1, (Layer(sqrt_z(0)),)))
        np.testing.assert_allclose(u, np.diag([1, 1j]), atol=1e-9)

    def test_ry_identity(self):
        circuit = LogicalCircuit(1, (Layer(sqrt_z_dag(0), {0}), Layer(sqrt_z(0))))
        assert fid_err(ideal_unitary(circuit), RY_NATIVE) <= 1e-12
        assert fid_err(extracted(circuit), RY_NATIVE) <= 1e-8
        assert fid_err(SQRT_Z @ RX_NATIVE @ SQRT_Z.conj().T, RY_NATIVE) <= 1e-12

    def test_leakage_error(self):
        lay = build_layout(1, [RoundSpec(("I", make_phase_widget(mu2=15 / 8 + 0.1)), (False,))])
        with pytest.raises(LeakageError) as info:
            extract_logical_unitary(lay, build_schedule(1, 1))
        assert np.max(info.value.profile) > 1e-3

    def test_qubit_mismatch(self):
        lay, sch = compile_circuit(LogicalCircuit(1, (Layer(sqrt_z(0)),)))
        with pytest.raises(ValueError):
            extract_logical_unitary(lay, sch, n_qubits=2)


@st.composite
def circuits(draw):
    n = draw(st.integers(1, 3))
    layers = []
    for _ in range(draw(st.integers(0, 3))):
        kind = draw(st.sampled_from(["none", "sqrtz", "sqrtzdag", "sqrtcz", "rails"]))
        if kind == "sqrtcz" and n < 2:
            kind = "sqrtz"
        if kind == "none":
            diag = Diagonal()
        elif kind == "rails":
            diag = Diagonal("rails", tuple(sorted(draw(st.sets(st.integers(0, 2**n - 1))))))
        elif kind == "sqrtcz":
            p, q = draw(st.permutations(range(n)))[:2]
            diag = sqrt_cz(p, q)
        else:
            diag = Diagonal(kind, (draw(st.integers(0, n - 1)),))
        layers.append(Layer(diag, draw(st.sets(st.integers(0, n - 1)))))
    return LogicalCircuit(n, tuple(layers))


@settings(max_examples=25, deadline=None)
@given(circuits())
def test_extracted_matches_ideal(circuit):
    assert fid_err(extracted(circuit), ideal_unitary(circuit)) <= 1e-8


class TestIdeal:
    def test_sqrtz_squared(self):
        u = ideal_unitary(LogicalCircuit(1, (Layer(sqrt_z(0)),) * 2))
        assert fid_err(u, np.diag([1, -1])) < 1e-12

    def test_empty(self):
        np.testing.assert_array_equal(ideal_unitary(LogicalCircuit(3)), np.eye(8))

    def test_cz(self):
        assert fid_err(ideal_unitary(LogicalCircuit(2, (Layer(sqrt_cz(0, 1)),) * 2)), CZ) < 1e-12


class TestFidelity:
    def test_examples(self):
        v = np.diag([1, -1j])
        assert fidelity_up_to_global_phase(v, v) == pytest.approx(1)
        assert fidelity_up_to_global_phase(np.exp(0.7j) * v, v) == pytest.approx(1)
        assert fidelity_up_to_global_phase(np.diag([1, 1j]), v) == pytest.approx(0, abs=1e-15)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            fidelity_up_to_global_phase(np.eye(2), np.eye(4))

    @given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
    def test_range(self, a, b):
        u = np.diag([1, np.exp(1j * a)])
        v = np.diag([np.exp(1j * b), 1])
        f = fidelity_up_to_global_phase(u, v)
        assert -1e-15 <= f <= 1 + 1e-15


class TestSynthesis:
    def test_word_matrix_order(self):
        np.testing.assert_allclose(word_matrix("SX"), SQRT_Z @ RX_NATIVE)
        np.testing.assert_array_equal(word_matrix(""), np.eye(2))

    def test_generator(self):
        for depth in (1, 3):
            word, d = synthesize_su2(SQRT_Z, depth)
            assert word == "S" and d < 1e-12

    def test_identity_is_empty_word(self):
        assert synthesize_su2(np.eye(2), 4) == ("", 0.0)

    def test_ry(self):
        word, d = synthesize_su2(RY_NATIVE, 5)
        assert word == "SXSSS"
        assert d < 1e-9
        # S X S^3 equals S X S^dag up to global phase
        assert fid_err(word_matrix(word), SQRT_Z @ RX_NATIVE @ SQRT_Z.conj().T) < 1e-12

    def test_ry_not_reachable_at_depth_4(self):
        assert synthesize_su2(RY_NATIVE, 4)[1] > 0.1

    def test_hadamard_frozen(self):
        assert synthesize_su2(HADAMARD, 4)[1] == pytest.approx(0.466699093559073, abs=1e-9)
        assert synthesize_su2(HADAMARD, 6)[1] == pytest.approx(0.0563591722168685, abs=1e-9)
        assert synthesize_su2(HADAMARD, 12)[1] == pytest.approx(0.0398677978865351, abs=1e-9)

    def test_matches_bfs_oracle(self):
        gens = [SQRT_Z, RX_NATIVE]
        oracle = bfs_best_distances(gens, HADAMARD, 9)
        for depth, expect in enumerate(oracle):
            assert synthesize_su2(HADAMARD, depth)[1] == pytest.approx(expect, abs=1e-9)

    def test_depth_guard(self):
        with pytest.raises(ValueError):
            synthesize_su2(HADAMARD, 21)
        with pytest.raises(ValueError):
            synthesize_su2(np.eye(3), 2)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0, 2 * math.pi), st.floats(0, math.pi), st.floats(0, 2 * math.pi))
    def test_monotone(self, a, b, c):
        u = np.array([[math.cos(b / 2), -np.exp(1j * c) * math.sin(b / 2)],
                      [np.exp(1j * a) * math.sin(b / 2), np.exp(1j * (a + c)) * math.cos(b / 2)]])
        prev = np.inf
        for depth in range(0, 9):
            d = synthesize_su2(u, depth)[1]
            assert d <= prev + 1e-12
            prev = d

    @settings(max_examples=20, deadline=None)
    @given(st.text(alphabet="SX", max_size=7))
    def test_words_are_found_exactly(self, word):
        found, d = synthesize_su2(word_matrix(word), 7)
        assert d < 1e-7
        assert len(found) <= len(word)
