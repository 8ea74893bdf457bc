"""Claim-by-claim checks behind ``discowalk verify``.

Each suite yields :class:`Check` rows; a row passes when ``measured <= tolerance``.
Measured values are errors (distances, leakages, 1 - fidelity), never raw results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import rail_input, run_pipelined, run_walk
from .graph import adjacency_matrix, christandl_chain, transfer_amplitude, xy_single_excitation_block
from .layout import build_schedule, extend_schedule, pipeline_offset
from .logical import (
    RY_NATIVE,
    Layer,
    LogicalCircuit,
    compile_circuit,
    extract_logical_unitary,
    fidelity_up_to_global_phase,
    ideal_unitary,
    sqrt_cz,
    sqrt_z,
    sqrt_z_dag,
)
from .widgets import catalog, widget_port_matrix

__all__ = ["Check", "SUITES", "run_suite"]


@dataclass(frozen=True)
class Check:
    claim: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.measured <= self.tolerance)


def widgets_suite():
    for name, w in catalog().items():
        p, leak = widget_port_matrix(w)
        yield Check(f"{name} port matrix", float(np.max(np.abs(p - w.ideal_port_matrix))), 1e-10)
        yield Check(f"{name} leakage", leak, 1e-10)
    for m in range(1, 9):
        amp = transfer_amplitude(christandl_chain(m), 0, m, np.pi / 2)
        yield Check(f"chain M={m} end-to-end (-i)^M", abs(amp - (-1j) ** m), 1e-9)


def gate_circuits() -> dict[str, tuple[LogicalCircuit, np.ndarray | None]]:
    cz = np.diag([1, 1, 1, -1]).astype(complex)
    return {
        "sqrtZ": (LogicalCircuit(1, (Layer(sqrt_z(0)),)), np.diag([1, 1j])),
        "sqrtZdag": (LogicalCircuit(1, (Layer(sqrt_z_dag(0)),)), np.diag([1, -1j])),
        "RX(2sqrt3 pi)": (LogicalCircuit(1, (Layer(rotations={0}),)), None),
        "RY = S RX Sdag": (LogicalCircuit(1, (Layer(sqrt_z_dag(0), {0}), Layer(sqrt_z(0)))), RY_NATIVE),
        "sqrtCZ": (LogicalCircuit(2, (Layer(sqrt_cz(0, 1)),)), np.diag([1, 1, 1, 1j])),
        "CZ = sqrtCZ^2": (LogicalCircuit(2, (Layer(sqrt_cz(0, 1)),) * 2), cz),
    }


def gates_suite():
    for name, (circuit, expected) in gate_circuits().items():
        ideal = ideal_unitary(circuit)
        if expected is not None:
            yield Check(f"{name} ideal", max(0.0, 1 - fidelity_up_to_global_phase(ideal, expected)), 1e-12)
        layout, schedule = compile_circuit(circuit)
        u = extract_logical_unitary(layout, schedule)
        yield Check(f"{name} extracted", max(0.0, 1 - fidelity_up_to_global_phase(u, ideal)), 1e-8)


def pipeline_suite():
    for n in (1, 3):
        circuit = LogicalCircuit(n, (Layer(sqrt_z(0), set(range(n))), Layer(sqrt_z_dag(n - 1))))
        layout, solo = compile_circuit(circuit)
        off = pipeline_offset(n)
        glob = extend_schedule(n, layout.depth + 2 * off)
        err = 0.0
        for r in range(layout.n_rails):
            psi = rail_input(layout, np.eye(layout.n_rails)[r])
            ref, _ = run_walk(layout, solo, psi)
            for res in run_pipelined(layout, glob, [(psi, 0), (psi, off), (psi, 2 * off)]):
                err = max(err, float(np.max(np.abs(res.output_amplitudes - ref.output_amplitudes))))
        yield Check(f"N={n} walkers offset {off} match solo", err, 1e-12)
    for n in range(1, 5):
        for d in range(1, 5):
            s = build_schedule(n, d)
            per_round = np.pi + np.pi / 2 + n * (np.pi + np.pi / 2)
            yield Check(f"N={n} D={d} phases = 2D(N+1)", abs(len(s) - 2 * d * (n + 1)), 0)
            yield Check(f"N={n} D={d} duration", abs(s.total_duration - d * per_round), 1e-12)


def xy_suite():
    for name, w in catalog().items():
        err = np.max(np.abs(xy_single_excitation_block(w.graph) - adjacency_matrix(w.graph)))
        yield Check(f"{name} XY block = adjacency", float(err), 1e-12)
    for m in (1, 2, 5, 9):
        g = christandl_chain(m)
        err = np.max(np.abs(xy_single_excitation_block(g) - adjacency_matrix(g)))
        yield Check(f"chain M={m} XY block = adjacency", float(err), 1e-12)


SUITES = {
    "widgets": widgets_suite,
    "gates": gates_suite,
    "pipeline": pipeline_suite,
    "xy": xy_suite,
}


def run_suite(name: str) -> list[Check]:
    return list(SUITES[name]())
