import numpy as np
import pytest

from discowalk.graph import GraphError, basis_state, evolve
from discowalk.widgets import (
    MU_R,
    T_HORIZONTAL,
    T_TRANSPORT,
    T_VERTICAL,
    catalog,
    make_identity_widget,
    make_phase_widget,
    make_rotation_widget,
    make_transport_edge,
    stepped_pst_line,
    widget_port_matrix,
)
from oracles import evolve_oracle

C3, S3 = np.cos(np.sqrt(3) * np.pi), np.sin(np.sqrt(3) * np.pi)
RX_PORTS = np.array([[C3, -1j * S3], [-1j * S3, C3]])


def run(w, port, t=None):
    n = w.graph.vertex_count
    return evolve(w.graph, basis_state(n, port), w.traversal_time if t is None else t)


class TestIdentity:
    def test_weights(self):
        w = make_identity_widget()
        assert [e[2] for e in w.graph.edges] == pytest.approx([1, np.sqrt(1.5), np.sqrt(1.5), 1], abs=1e-15)

    def test_transfer_plus_one(self):
        out = run(make_identity_widget(), 0)
        assert abs(out[4] - 1) < 1e-10
        assert np.sum(np.abs(out[1:4]) ** 2) < 1e-10

    def test_mirror(self):
        w = make_identity_widget()
        assert abs(run(w, 4)[0] - 1) < 1e-10
        # oracle from the right port
        assert abs(evolve_oracle(5, w.graph.edges, basis_state(5, 4), np.pi)[0] - 1) < 1e-10


class TestPhase:
    def test_weights_and_topology(self):
        g = make_phase_widget().graph
        assert g.weight(1, 2) == pytest.approx(5 * np.sqrt(3) / 8)
        assert g.weight(3, 4) == pytest.approx(5 * np.sqrt(3) / 8)
        assert g.weight(1, 4) == 15 / 8
        assert g.weight(2, 3) == 21 / 8
        assert g.weight(0, 1) == g.weight(4, 5) == 1

    def test_transfer_i(self):
        out = run(make_phase_widget(), 0)
        assert abs(out[5] - 1j) < 1e-10
        assert np.sum(np.abs(out[1:5]) ** 2) < 1e-10

    def test_mirror(self):
        # not stated as a claim; the weighting is symmetric under 1<->4, 2<->3
        out = evolve_oracle(6, make_phase_widget().graph.edges, basis_state(6, 5), np.pi)
        assert abs(out[0] - 1j) < 1e-10

    def test_perturbed_leaks(self):
        w = make_phase_widget(mu2=15 / 8 + 0.1)
        p, leak = widget_port_matrix(w)
        # part of the error reflects back onto the input port, the rest stays inside
        assert abs(p[0, 0]) > 1e-2
        assert leak > 1e-4


class TestRotation:
    def test_rotation(self):
        out = run(make_rotation_widget(MU_R), 0)
        np.testing.assert_allclose(out[[0, 3]], [C3, -1j * S3], atol=1e-10)
        assert np.sum(np.abs(out[1:3]) ** 2) < 1e-10

    def test_zero_is_minus_identity(self):
        w = make_rotation_widget(0.0)
        np.testing.assert_allclose(run(w, 0), [-1, 0, 0, 0], atol=1e-12)
        p, leak = widget_port_matrix(w)
        np.testing.assert_allclose(p, -np.eye(2), atol=1e-12)
        assert leak < 1e-12

    def test_unitary_ports(self):
        p, _ = widget_port_matrix(make_rotation_widget(MU_R))
        np.testing.assert_allclose(p.conj().T @ p, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(p, RX_PORTS, atol=1e-10)

    def test_negative(self):
        with pytest.raises(GraphError):
            make_rotation_widget(-0.1)

    def test_off_catalog_weight_leaks(self):
        _, leak = widget_port_matrix(make_rotation_widget(1.0))
        assert leak > 1e-3


class TestTransport:
    @pytest.mark.parametrize("t, expected", [
        (np.pi / 2, [0, -1j]),
        (np.pi, [-1, 0]),
        (np.pi / 4, [np.cos(np.pi / 4), -1j * np.sin(np.pi / 4)]),
    ])
    def test_closed_form(self, t, expected):
        np.testing.assert_allclose(run(make_transport_edge(), 0, t), expected, atol=1e-12)


class TestCatalog:
    @pytest.mark.parametrize("name", ["identity", "phase", "rotation", "rotation0", "transport"])
    def test_port_matrix_matches_ideal(self, name):
        w = catalog()[name]
        p, leak = widget_port_matrix(w)
        assert np.max(np.abs(p - w.ideal_port_matrix)) < 1e-10
        assert leak < 1e-10
        # undirected graph: reciprocity
        np.testing.assert_allclose(p, p.T, atol=1e-12)

    def test_identity_port_matrix(self):
        p, leak = widget_port_matrix(make_identity_widget())
        np.testing.assert_allclose(p, [[0, 1], [1, 0]], atol=1e-10)

    def test_times_are_shared(self):
        assert T_HORIZONTAL == T_VERTICAL == np.pi
        assert T_TRANSPORT == np.pi / 2
        times = {n: w.traversal_time for n, w in catalog().items()}
        assert times["identity"] == times["phase"] == T_HORIZONTAL
        assert times["rotation"] == times["rotation0"] == T_VERTICAL

    def test_attachments_are_unit_edges(self):
        for name in ("identity", "phase", "rotation", "rotation0"):
            w = catalog()[name]
            assert len(w.attachment_edges) == 2
            assert all(e[2] == 1.0 for e in w.attachment_edges)


class TestSteppedLine:
    def _walk(self, M):
        solid, dashed, dt = stepped_pst_line(M)
        psi = basis_state(M + 1, 0)
        for k in range(M):
            psi = evolve(solid if k % 2 == 0 else dashed, psi, dt)
        return psi

    def test_partition(self):
        solid, dashed, dt = stepped_pst_line(4)
        assert dt == np.pi / 2
        assert [e[:2] for e in solid.edges] == [(0, 1), (2, 3)]
        assert [e[:2] for e in dashed.edges] == [(1, 2), (3, 4)]

    def test_one(self):
        assert abs(self._walk(1)[1] + 1j) < 1e-12

    def test_four(self):
        assert abs(self._walk(4)[4] - 1) < 1e-10

    def test_three(self):
        # oracle composition of three -i steps gives +i
        assert abs(self._walk(3)[3] - 1j) < 1e-10

    @pytest.mark.parametrize("M", range(1, 7))
    def test_transfer(self, M):
        assert abs(self._walk(M)[M] - (-1j) ** M) < 1e-9
