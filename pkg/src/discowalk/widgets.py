"""Catalog of widgets: small weighted graphs traversed in one timed phase.

Every widget carries its two unit-weight attachment edges. Those edges belong
to the solid transport set and are switched; everything else is always on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import GraphError, WeightedGraph, basis_state, evolve, spectrum

__all__ = [
    "T_HORIZONTAL",
    "T_VERTICAL",
    "T_TRANSPORT",
    "MU_I",
    "MU_1",
    "MU_2",
    "MU_3",
    "MU_R",
    "Widget",
    "make_identity_widget",
    "make_phase_widget",
    "make_rotation_widget",
    "make_transport_edge",
    "widget_port_matrix",
    "stepped_pst_line",
    "catalog",
]

T_HORIZONTAL = np.pi
T_VERTICAL = np.pi
T_TRANSPORT = np.pi / 2

MU_I = np.sqrt(3 / 2)
MU_1 = 5 * np.sqrt(3) / 8
MU_2 = 15 / 8
MU_3 = 21 / 8
MU_R = 2 * np.sqrt(3)


@dataclass(frozen=True)
class Widget:
    name: str
    graph: WeightedGraph
    ports: tuple[int, ...]
    traversal_time: float
    ideal_port_matrix: np.ndarray
    attachments: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for p in self.ports:
            self.graph.check_vertex(p)
        for i, j in self.attachments:
            if self.graph.weight(i, j) == 0:
                raise GraphError(f"attachment ({i}, {j}) is not an edge of {self.name}")
        u = np.asarray(self.ideal_port_matrix, dtype=complex)
        if u.shape != (len(self.ports),) * 2:
            raise GraphError("ideal port matrix must be square over the ports")
        if not np.allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-12, rtol=0):
            raise GraphError(f"ideal port matrix of {self.name} is not unitary")
        object.__setattr__(self, "ideal_port_matrix", u)

    @property
    def interior(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.graph.vertex_count) if v not in self.ports)

    def is_attachment(self, i: int, j: int) -> bool:
        return (i, j) in self.attachments or (j, i) in self.attachments

    @property
    def static_edges(self) -> tuple[tuple[int, int, float], ...]:
        return tuple(e for e in self.graph.edges if not self.is_attachment(e[0], e[1]))

    @property
    def attachment_edges(self) -> tuple[tuple[int, int, float], ...]:
        return tuple(e for e in self.graph.edges if self.is_attachment(e[0], e[1]))


def make_identity_widget() -> Widget:
    """Four-segment wire ``v_l - 1 - 2 - 3 - v_r``; transfers with factor +1 in time pi."""
    g = WeightedGraph(5, ((0, 1, 1.0), (1, 2, MU_I), (2, 3, MU_I), (3, 4, 1.0)),
                      ("v_l", "1", "2", "3", "v_r"))
    return Widget("identity", g, (0, 4), T_HORIZONTAL,
                  np.array([[0, 1], [1, 0]], dtype=complex), ((0, 1), (3, 4)))


def make_phase_widget(mu1: float = MU_1, mu2: float = MU_2, mu3: float = MU_3) -> Widget:
    """Weighted square between two ports; transfers with factor i in time pi.

    Square vertices 1..4 run clockwise from bottom left: ``w12 = w34 = mu1``,
    ``w14 = mu2``, ``w23 = mu3``. Non-default weights give a perturbed widget
    whose ideal is still the i-swap, useful for leakage studies.
    """
    g = WeightedGraph(
        6,
        ((0, 1, 1.0), (1, 2, mu1), (3, 4, mu1), (1, 4, mu2), (2, 3, mu3), (4, 5, 1.0)),
        ("v_l", "1", "2", "3", "4", "v_r"),
    )
    return Widget("phase", g, (0, 5), T_HORIZONTAL,
                  np.array([[0, 1j], [1j, 0]]), ((0, 1), (4, 5)))


def _rotation_ideal(mu_r: float) -> np.ndarray:
    # Path (1, mu, 1) has eigenvalues +-(mu/2 +- r), r = sqrt(mu^2/4 + 1). When r is
    # an integer n the ports close at t = pi with (-1)^n exp(-i mu pi/2 X); for other
    # mu this is the nearest such map and the widget leaks.
    n = round(np.sqrt(mu_r**2 / 4 + 1))
    c, s = np.cos(mu_r * np.pi / 2), np.sin(mu_r * np.pi / 2)
    return (-1) ** n * np.array([[c, -1j * s], [-1j * s, c]])


def make_rotation_widget(mu_R: float = MU_R) -> Widget:
    """Vertical connector ``v_t - 1 - 2 - v_b`` with middle weight ``mu_R``.

    ``mu_R = 2 sqrt(3)`` gives ``cos(sqrt3 pi) I - i sin(sqrt3 pi) X`` on the two
    rails; ``mu_R = 0`` drops the middle edge and returns both ports with -1.
    """
    if mu_R < 0:
        raise GraphError("mu_R must be non-negative")
    edges = [(0, 1, 1.0), (2, 3, 1.0)]
    if mu_R > 0:
        edges.insert(1, (1, 2, float(mu_R)))
    g = WeightedGraph(4, tuple(edges), ("v_t", "1", "2", "v_b"))
    return Widget(f"rotation({mu_R:.15g})", g, (0, 3), T_VERTICAL,
                  _rotation_ideal(mu_R), ((0, 1), (2, 3)))


def make_transport_edge() -> Widget:
    g = WeightedGraph(2, ((0, 1, 1.0),), ("left", "right"))
    return Widget("transport", g, (0, 1), T_TRANSPORT, np.array([[0, -1j], [-1j, 0]]))


def widget_port_matrix(w: Widget, t: float | None = None) -> tuple[np.ndarray, float]:
    """Simulated port matrix and the worst off-port probability.

    Column ``k`` holds the port amplitudes after evolving port ``k`` for the
    traversal time (or ``t``).
    """
    t = w.traversal_time if t is None else t
    spec = spectrum(w.graph)
    ports = list(w.ports)
    cols = [evolve(w.graph, basis_state(w.graph.vertex_count, p), t, spec) for p in ports]
    full = np.column_stack(cols)
    port_block = full[ports, :]
    leak = 1.0 - np.sum(np.abs(port_block) ** 2, axis=0)
    return port_block, float(max(0.0, np.max(leak)))


def stepped_pst_line(M: int) -> tuple[WeightedGraph, WeightedGraph, float]:
    """Unit line on ``M + 1`` vertices split into alternating solid/dashed edges.

    Starting with the solid set, ``M`` alternating phases of ``pi/2`` carry the
    left end to the right end with factor ``(-i)^M``.
    """
    if M < 1:
        raise GraphError("line needs at least one segment")
    solid = tuple((j, j + 1, 1.0) for j in range(0, M, 2))
    dashed = tuple((j, j + 1, 1.0) for j in range(1, M, 2))
    return WeightedGraph(M + 1, solid), WeightedGraph(M + 1, dashed), T_TRANSPORT


def catalog() -> dict[str, Widget]:
    return {
        "identity": make_identity_widget(),
        "phase": make_phase_widget(),
        "rotation": make_rotation_widget(MU_R),
        "rotation0": make_rotation_widget(0.0),
        "transport": make_transport_edge(),
    }
