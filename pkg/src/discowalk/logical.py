"""Native gates, circuit compilation onto rail layouts, and logical-unitary checks.

A layer is one round: a diagonal stage (a phase widget on some rails, the
identity widget on the rest) followed by an X rotation on a subset of qubits.
Qubit 0 is the most significant tensor factor, matching rail numbering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .engine import LEAK_ASSERT, leakage_profile, rail_input, run_walk
from .graph import GraphError
from .kernels import su2_distance, word_search
from .layout import RailLayout, RoundSpec, Schedule, build_layout, build_schedule, rail_bit

__all__ = [
    "SQRT_Z",
    "SQRT_Z_DAG",
    "RX_NATIVE",
    "RY_NATIVE",
    "Diagonal",
    "sqrt_z",
    "sqrt_z_dag",
    "sqrt_cz",
    "Layer",
    "LogicalCircuit",
    "CircuitError",
    "LeakageError",
    "compile_circuit",
    "extract_logical_unitary",
    "ideal_unitary",
    "fidelity_up_to_global_phase",
    "synthesize_su2",
    "word_matrix",
    "GENERATORS",
    "MAX_WORD_DEPTH",
]

_THETA = 2 * np.sqrt(3) * np.pi

SQRT_Z = np.diag([1, 1j])
SQRT_Z_DAG = np.diag([1, -1j])
RX_NATIVE = np.array([[np.cos(_THETA / 2), -1j * np.sin(_THETA / 2)],
                      [-1j * np.sin(_THETA / 2), np.cos(_THETA / 2)]])
RY_NATIVE = np.array([[np.cos(_THETA / 2), -np.sin(_THETA / 2)],
                      [np.sin(_THETA / 2), np.cos(_THETA / 2)]])

GENERATORS = {"S": SQRT_Z, "X": RX_NATIVE}
MAX_WORD_DEPTH = 20


class CircuitError(ValueError):
    pass


class LeakageError(RuntimeError):
    def __init__(self, message: str, profile: np.ndarray):
        super().__init__(message)
        self.profile = profile


@dataclass(frozen=True)
class Diagonal:
    """Which rails receive the phase widget.

    ``kind`` is one of ``none``, ``sqrtz``, ``sqrtzdag``, ``sqrtcz`` (acting on
    ``qubits``) or ``rails`` (explicit rail list in ``qubits``).
    """

    kind: str = "none"
    qubits: tuple[int, ...] = ()

    _ARITY = {"none": 0, "sqrtz": 1, "sqrtzdag": 1, "sqrtcz": 2}

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind == "rails":
            return
        if self.kind not in self._ARITY:
            raise CircuitError(f"unknown diagonal gate {self.kind!r}")
        if len(self.qubits) != self._ARITY[self.kind]:
            raise CircuitError(f"{self.kind} takes {self._ARITY[self.kind]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.kind} needs distinct qubits")

    def phase_rails(self, n_qubits: int) -> frozenset[int]:
        rails = range(2**n_qubits)
        for q in self.qubits if self.kind != "rails" else ():
            if not 0 <= q < n_qubits:
                raise CircuitError(f"qubit {q} out of range for {n_qubits} qubits")
        if self.kind == "none":
            return frozenset()
        if self.kind == "sqrtz":
            return frozenset(r for r in rails if rail_bit(r, self.qubits[0], n_qubits))
        if self.kind == "sqrtzdag":
            return frozenset(r for r in rails if not rail_bit(r, self.qubits[0], n_qubits))
        if self.kind == "sqrtcz":
            p, q = self.qubits
            return frozenset(r for r in rails
                             if rail_bit(r, p, n_qubits) and rail_bit(r, q, n_qubits))
        bad = [r for r in self.qubits if not 0 <= r < 2**n_qubits]
        if bad:
            raise CircuitError(f"rails {bad} out of range for {n_qubits} qubits")
        return frozenset(self.qubits)


def sqrt_z(q: int) -> Diagonal:
    return Diagonal("sqrtz", (q,))


def sqrt_z_dag(q: int) -> Diagonal:
    return Diagonal("sqrtzdag", (q,))


def sqrt_cz(p: int, q: int) -> Diagonal:
    return Diagonal("sqrtcz", (p, q))


@dataclass(frozen=True)
class Layer:
    diagonal: Diagonal = field(default_factory=Diagonal)
    rotations: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "rotations", frozenset(int(q) for q in self.rotations))


@dataclass(frozen=True)
class LogicalCircuit:
    n_qubits: int
    layers: tuple[Layer, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise CircuitError("circuit needs at least one qubit")
        object.__setattr__(self, "layers", tuple(self.layers))
        for k, layer in enumerate(self.layers):
            layer.diagonal.phase_rails(self.n_qubits)
            bad = [q for q in layer.rotations if not 0 <= q < self.n_qubits]
            if bad:
                raise CircuitError(f"layer {k}: rotation qubits {bad} out of range")

    @property
    def depth(self) -> int:
        return len(self.layers)


def _round_spec(circuit: LogicalCircuit, layer: Layer) -> RoundSpec:
    phased = layer.diagonal.phase_rails(circuit.n_qubits)
    horizontal = tuple("P" if r in phased else "I" for r in range(2**circuit.n_qubits))
    vertical = tuple(q in layer.rotations for q in range(circuit.n_qubits))
    return RoundSpec(horizontal, vertical)


def compile_circuit(circuit: LogicalCircuit) -> tuple[RailLayout, Schedule]:
    rounds = [_round_spec(circuit, layer) for layer in circuit.layers]
    layout = build_layout(circuit.n_qubits, rounds)
    if not rounds:
        return layout, Schedule((), circuit.n_qubits, 0)
    return layout, build_schedule(circuit.n_qubits, len(rounds))


def extract_logical_unitary(layout: RailLayout, schedule: Schedule, n_qubits: int | None = None,
                            leak_tol: float = LEAK_ASSERT) -> np.ndarray:
    """Column ``j`` is the output-rail amplitude vector for input rail ``j``."""
    if n_qubits is not None and n_qubits != layout.n_qubits:
        raise GraphError(f"layout has {layout.n_qubits} qubits, not {n_qubits}")
    dim = layout.n_rails
    u = np.empty((dim, dim), dtype=complex)
    for j in range(dim):
        result, trace = run_walk(layout, schedule, rail_input(layout, np.eye(dim)[j]))
        if result.leakage > leak_tol:
            raise LeakageError(
                f"input rail {j}: leakage {result.leakage:.3e} above {leak_tol:.1e}",
                leakage_profile(trace, layout))
        u[:, j] = result.output_amplitudes
    return u


def _on_qubit(gate: np.ndarray, q: int, n: int) -> np.ndarray:
    ops = [gate if k == q else np.eye(2) for k in range(n)]
    return reduce(np.kron, ops)


def ideal_unitary(circuit: LogicalCircuit) -> np.ndarray:
    n = circuit.n_qubits
    u = np.eye(2**n, dtype=complex)
    for layer in circuit.layers:
        phased = layer.diagonal.phase_rails(n)
        d = np.diag([1j if r in phased else 1.0 for r in range(2**n)])
        step = d
        for q in sorted(layer.rotations):
            step = _on_qubit(RX_NATIVE, q, n) @ step
        u = step @ u
    return u


def fidelity_up_to_global_phase(u, v) -> float:
    """``|tr(U^dag V)| / d``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    return float(abs(np.trace(u.conj().T @ v)) / u.shape[0])


def word_matrix(word: str) -> np.ndarray:
    """Operator product of a word, leftmost letter applied last."""
    m = np.eye(2, dtype=complex)
    for letter in word:
        m = m @ GENERATORS[letter]
    return m


def synthesize_su2(target, max_depth: int) -> tuple[str, float]:
    """Shortest, then lexicographically first, word over ``S < X`` closest to ``target``.

    Distance is ``sqrt(1 - |tr(U^dag V)|/2)``; later words replace the incumbent
    only when closer by more than 1e-12.
    """
    target = np.asarray(target, dtype=complex)
    if target.shape != (2, 2):
        raise ValueError("target must be 2x2")
    if not 0 <= max_depth <= MAX_WORD_DEPTH:
        raise ValueError(f"max_depth must lie in [0, {MAX_WORD_DEPTH}]")
    letters = list(GENERATORS)
    gens = np.stack([GENERATORS[a] for a in letters])
    digits, dist = word_search(gens, target, max_depth)
    word = "".join(letters[i] for i in digits)
    # report the distance of the returned word itself, whichever backend ran
    return word, float(su2_distance(word_matrix(word), target))
