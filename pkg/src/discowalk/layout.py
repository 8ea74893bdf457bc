"""Rail layouts for N qubits and the global switching schedule.

Geometry of one round starting at column ``x0`` (``N + 2`` columns):

* ``x0 -> x0+1``: one horizontal widget per rail, attached through set ``g``.
* ``x0+1+j -> x0+2+j`` for ``j = 0..N``: plain unit edges, set ``r`` for even
  ``j`` and ``b`` for odd ``j``.
* column ``x0+2+q`` for ``q = 0..N-1``: rotation connectors pairing the rails
  that differ in qubit ``q``, attached through ``g``.

Rail ``r`` encodes the basis state ``bin(r)`` with qubit 0 as the most
significant bit. Vertex indices are column-major over the rail grid, followed
by widget interiors in placement order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .graph import GraphError, Spectrum, WeightedGraph, spectrum
from .widgets import (
    MU_R,
    T_HORIZONTAL,
    T_TRANSPORT,
    T_VERTICAL,
    Widget,
    make_identity_widget,
    make_phase_widget,
    make_rotation_widget,
)

__all__ = [
    "TRANSPORT_SETS",
    "STATIC",
    "RoundSpec",
    "RailLayout",
    "Schedule",
    "Placement",
    "build_layout",
    "build_schedule",
    "extend_schedule",
    "active_hamiltonian",
    "graph_depth",
    "round_duration",
    "pipeline_offset",
    "PipelineOffsetError",
    "rail_bit",
]

TRANSPORT_SETS = ("g", "r", "b")
STATIC = "static"

HorizontalChoice = Union[str, Widget]


def rail_bit(rail: int, qubit: int, n_qubits: int) -> int:
    return (rail >> (n_qubits - 1 - qubit)) & 1


@dataclass(frozen=True)
class RoundSpec:
    """Widget choices for one round.

    ``horizontal[r]`` is ``"I"``, ``"P"`` or a custom :class:`Widget` with two
    ports; ``vertical[q]`` is truthy to rotate qubit ``q``.
    """

    horizontal: tuple[HorizontalChoice, ...]
    vertical: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "horizontal", tuple(self.horizontal))
        object.__setattr__(self, "vertical", tuple(bool(v) for v in self.vertical))
        for h in self.horizontal:
            if isinstance(h, Widget):
                if len(h.ports) != 2:
                    raise GraphError("horizontal widgets need exactly two ports")
            elif h not in ("I", "P"):
                raise GraphError(f"unknown horizontal widget {h!r}")

    @classmethod
    def identity(cls, n_qubits: int) -> "RoundSpec":
        return cls(("I",) * 2**n_qubits, (False,) * n_qubits)


@dataclass(frozen=True)
class Placement:
    """Where a widget instance sits: its kind, round, and the global ids of its vertices."""

    kind: str
    round: int
    column: int
    rails: tuple[int, ...]
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class Schedule:
    phases: tuple[tuple[str, float], ...]
    n_qubits: int | None = None
    n_rounds: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple((s, float(d)) for s, d in self.phases))
        for s, d in self.phases:
            if s not in TRANSPORT_SETS:
                raise GraphError(f"unknown transport set {s!r}")
            if d < 0:
                raise GraphError("phase durations must be non-negative")

    def __len__(self):
        return len(self.phases)

    @property
    def total_duration(self) -> float:
        return float(sum(d for _, d in self.phases))

    @property
    def sets(self) -> str:
        return "".join(s for s, _ in self.phases)


@dataclass
class RailLayout:
    n_qubits: int
    rounds: tuple[RoundSpec, ...]
    vertex_count: int
    labels: tuple[str, ...]
    edge_sets: dict[str, tuple[tuple[int, int, float], ...]]
    placements: tuple[Placement, ...]
    _spectra: dict[str, Spectrum] = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_rails(self) -> int:
        return 2**self.n_qubits

    @property
    def n_rounds(self) -> int:
        return len(self.rounds)

    @property
    def columns_per_round(self) -> int:
        return self.n_qubits + 2

    @property
    def n_columns(self) -> int:
        return self.n_rounds * self.columns_per_round + 1

    @property
    def static_edges(self):
        return self.edge_sets[STATIC]

    @property
    def depth(self) -> int:
        return 2 * self.n_rounds * (self.n_qubits + 1)

    def vertex(self, rail: int, x: int) -> int:
        if not (0 <= rail < self.n_rails and 0 <= x < self.n_columns):
            raise GraphError(f"no rail vertex at rail {rail}, column {x}")
        return x * self.n_rails + rail

    def column(self, x: int) -> np.ndarray:
        return np.arange(x * self.n_rails, (x + 1) * self.n_rails)

    @property
    def input_vertices(self) -> np.ndarray:
        return self.column(0)

    @property
    def output_vertices(self) -> np.ndarray:
        return self.column(self.n_columns - 1)

    def expected_column(self, phase_index: int) -> int:
        """Column holding the walker after phase ``phase_index`` (0-based)."""
        per_round = 2 * (self.n_qubits + 1)
        k, j = divmod(phase_index, per_round)
        return k * self.columns_per_round + 1 + (j + 1) // 2

    def hamiltonian(self, which: str) -> WeightedGraph:
        return active_hamiltonian(self, which)

    def spectrum(self, which: str) -> Spectrum:
        """Cached spectrum of the Hamiltonian with transport set ``which`` enabled."""
        spec = self._spectra.get(which)
        if spec is None:
            spec = spectrum(active_hamiltonian(self, which))
            self._spectra[which] = spec
        return spec


def _horizontal_widget(choice: HorizontalChoice) -> Widget:
    if isinstance(choice, Widget):
        return choice
    return make_identity_widget() if choice == "I" else make_phase_widget()


def build_layout(n_qubits: int, rounds: Sequence[RoundSpec]) -> RailLayout:
    if n_qubits < 1:
        raise GraphError("need at least one qubit")
    rounds = tuple(rounds)
    n_rails = 2**n_qubits
    for k, rs in enumerate(rounds):
        if len(rs.horizontal) != n_rails:
            raise GraphError(f"round {k}: {len(rs.horizontal)} horizontal choices for {n_rails} rails")
        if len(rs.vertical) != n_qubits:
            raise GraphError(f"round {k}: {len(rs.vertical)} vertical choices for {n_qubits} qubits")

    cpr = n_qubits + 2
    n_columns = len(rounds) * cpr + 1
    labels = [f"r{r}x{x}" for x in range(n_columns) for r in range(n_rails)]
    sets: dict[str, list] = {"g": [], "r": [], "b": [], STATIC: []}
    placements = []

    def rv(rail, x):
        return x * n_rails + rail

    def place(widget: Widget, port_ids: Sequence[int], kind: str, k: int, x: int, rails):
        # map widget-local vertices to global ids: ports onto rail vertices, interiors fresh
        local = {}
        for p, gid in zip(widget.ports, port_ids):
            local[p] = gid
        for v in widget.interior:
            local[v] = len(labels)
            tag = widget.graph.labels[v] if widget.graph.labels else str(v)
            labels.append(f"{kind}[k{k}x{x}r{'-'.join(map(str, rails))}]:{tag}")
        for i, j, w in widget.graph.edges:
            target = "g" if widget.is_attachment(i, j) else STATIC
            sets[target].append((local[i], local[j], w))
        placements.append(Placement(kind, k, x, tuple(rails),
                                    tuple(local[v] for v in range(widget.graph.vertex_count))))

    for k, rs in enumerate(rounds):
        x0 = k * cpr
        for rail, choice in enumerate(rs.horizontal):
            w = _horizontal_widget(choice)
            kind = choice if isinstance(choice, str) else w.name
            place(w, (rv(rail, x0), rv(rail, x0 + 1)), kind, k, x0, (rail,))
        for j in range(n_qubits + 1):
            which = "r" if j % 2 == 0 else "b"
            x = x0 + 1 + j
            for rail in range(n_rails):
                sets[which].append((rv(rail, x), rv(rail, x + 1), 1.0))
        for q, rotate in enumerate(rs.vertical):
            x = x0 + 2 + q
            w = make_rotation_widget(MU_R if rotate else 0.0)
            for r0 in range(n_rails):
                if rail_bit(r0, q, n_qubits):
                    continue
                r1 = r0 | (1 << (n_qubits - 1 - q))
                place(w, (rv(r0, x), rv(r1, x)), "R" if rotate else "R0", k, x, (r0, r1))

    return RailLayout(
        n_qubits=n_qubits,
        rounds=rounds,
        vertex_count=len(labels),
        labels=tuple(labels),
        edge_sets={key: tuple(v) for key, v in sets.items()},
        placements=tuple(placements),
    )


def active_hamiltonian(layout: RailLayout, which: str) -> WeightedGraph:
    """Widget interiors plus the one enabled transport set."""
    if which not in TRANSPORT_SETS:
        raise GraphError(f"unknown transport set {which!r}")
    edges = layout.edge_sets[STATIC] + layout.edge_sets[which]
    return WeightedGraph(layout.vertex_count, edges, layout.labels)


def _round_phases(n_qubits: int) -> list[tuple[str, float]]:
    phases = [("g", T_HORIZONTAL), ("r", T_TRANSPORT)]
    for q in range(n_qubits):
        phases += [("g", T_VERTICAL), ("b" if q % 2 == 0 else "r", T_TRANSPORT)]
    return phases


def build_schedule(n_qubits: int, n_rounds: int) -> Schedule:
    """``n_rounds`` repetitions of ``S_h, S_v(b), S_v(r), ...`` with N vertical sequences."""
    if n_qubits < 1 or n_rounds < 1:
        raise GraphError("schedule needs N >= 1 and D >= 1")
    return Schedule(tuple(_round_phases(n_qubits) * n_rounds), n_qubits, n_rounds)


def extend_schedule(n_qubits: int, n_phases: int) -> Schedule:
    """The periodic round pattern continued for exactly ``n_phases`` phases."""
    per_round = _round_phases(n_qubits)
    reps = -(-n_phases // len(per_round)) if n_phases else 0
    return Schedule(tuple((per_round * reps)[:n_phases]), n_qubits, None)


def graph_depth(D: int, N: int) -> int:
    if D < 1 or N < 1:
        raise GraphError("graph depth needs D >= 1 and N >= 1")
    return 2 * D * (N + 1)


def round_duration(n_qubits: int) -> float:
    return T_HORIZONTAL + T_TRANSPORT + n_qubits * (T_VERTICAL + T_TRANSPORT)


class PipelineOffsetError(ValueError):
    def __init__(self, n_qubits: int):
        self.fallback = 2 * (n_qubits + 1)
        super().__init__(
            f"N = {n_qubits} is even: the round is not 4-phase periodic, so walkers cannot be "
            f"spaced by a constant 4 phases; use one full round ({self.fallback} phases) instead"
        )


def pipeline_offset(n_qubits: int) -> int:
    """Phase delay before another walker may be injected at column 0.

    Requires an odd qubit count (so that every round is a repetition of
    ``g, r, g, b``) and equal horizontal and vertical traversal times.
    """
    if n_qubits < 1:
        raise GraphError("need at least one qubit")
    if T_HORIZONTAL != T_VERTICAL:
        raise PipelineOffsetError(n_qubits)
    if n_qubits % 2 == 0:
        raise PipelineOffsetError(n_qubits)
    return 4
