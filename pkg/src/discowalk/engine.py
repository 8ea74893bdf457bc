"""Piecewise-constant evolution of a walker through a switched rail layout."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import GraphError, apply_spectrum
from .layout import RailLayout, Schedule, pipeline_offset, PipelineOffsetError

__all__ = [
    "LEAK_WARN",
    "LEAK_ASSERT",
    "RunResult",
    "SimulationTrace",
    "Measurement",
    "run_walk",
    "run_pipelined",
    "measure_and_eject",
    "leakage_profile",
    "rail_input",
]

log = logging.getLogger(__name__)

LEAK_WARN = 1e-6
LEAK_ASSERT = 1e-9


@dataclass(frozen=True)
class RunResult:
    final_state: np.ndarray
    output_amplitudes: np.ndarray
    leakage: float


@dataclass(frozen=True)
class Snapshot:
    index: int
    set: str
    duration: float
    state: np.ndarray


@dataclass(frozen=True)
class SimulationTrace:
    snapshots: tuple[Snapshot, ...]
    n_rails: int
    n_columns: int

    def __len__(self):
        return len(self.snapshots)

    def column_marginals(self) -> np.ndarray:
        """Probability per rail column after each phase, shape ``(phases, columns)``.

        Widget interiors are not attributed to any column.
        """
        n = self.n_rails * self.n_columns
        out = np.empty((len(self.snapshots), self.n_columns))
        for k, snap in enumerate(self.snapshots):
            p = np.abs(snap.state[:n]) ** 2
            out[k] = p.reshape(self.n_columns, self.n_rails).sum(axis=1)
        return out


@dataclass(frozen=True)
class Measurement:
    probabilities: np.ndarray
    leakage: float
    warning: str | None = None

    @property
    def ok(self) -> bool:
        return self.warning is None


def rail_input(layout: RailLayout, amplitudes) -> np.ndarray:
    """Full state with the given rail amplitudes on the input column."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != (layout.n_rails,):
        raise GraphError(f"need {layout.n_rails} rail amplitudes, got shape {amplitudes.shape}")
    psi = np.zeros(layout.vertex_count, dtype=complex)
    psi[layout.input_vertices] = amplitudes
    return psi


def _check_schedule(layout: RailLayout, schedule: Schedule):
    if schedule.n_qubits is not None and schedule.n_qubits != layout.n_qubits:
        raise GraphError(
            f"schedule is for {schedule.n_qubits} qubits, layout has {layout.n_qubits}")
    if len(schedule) > layout.depth:
        raise GraphError(
            f"schedule has {len(schedule)} phases, layout supports {layout.depth}")


def _run(layout, phases: Sequence[tuple[str, float]], psi):
    snaps = []
    for k, (which, duration) in enumerate(phases):
        psi = apply_spectrum(layout.spectrum(which), psi, duration)
        snaps.append(Snapshot(k, which, duration, psi))
    return psi, snaps


def _result(layout: RailLayout, psi: np.ndarray) -> RunResult:
    out = psi[layout.output_vertices].copy()
    leakage = max(0.0, 1.0 - float(np.sum(np.abs(out) ** 2)))
    return RunResult(psi, out, leakage)


def run_walk(layout: RailLayout, schedule: Schedule, initial) -> tuple[RunResult, SimulationTrace]:
    """Apply ``exp(-i H_set d)`` for each ``(set, d)`` in the schedule."""
    psi = np.asarray(initial, dtype=complex)
    if psi.shape != (layout.vertex_count,):
        raise GraphError(f"initial state has shape {psi.shape}, layout has {layout.vertex_count} vertices")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-10:
        raise GraphError(f"initial state is not normalized (norm {norm:.15g})")
    _check_schedule(layout, schedule)
    psi, snaps = _run(layout, schedule.phases, psi)
    trace = SimulationTrace(tuple(snaps), layout.n_rails, layout.n_columns)
    return _result(layout, psi), trace


def run_pipelined(layout: RailLayout, schedule: Schedule, starts) -> list[RunResult]:
    """Run several walkers injected at phase offsets into one global schedule.

    The walk is single-particle and linear, so each walker is simulated alone
    on the schedule slice ``[offset, offset + depth)``; the walker is ejected at
    the output once its slice ends. Offsets must be multiples of
    :func:`pipeline_offset`, or of a full round when N is even.
    """
    try:
        step = pipeline_offset(layout.n_qubits)
    except PipelineOffsetError as exc:
        step = exc.fallback
    depth = layout.depth
    reference = schedule.phases[:depth]
    results = []
    for initial, offset in starts:
        if offset < 0 or offset % step:
            raise GraphError(f"offset {offset} is not a multiple of the pipeline step {step}")
        phases = schedule.phases[offset:offset + depth]
        if len(phases) < depth:
            raise GraphError(f"schedule too short for a walker starting at phase {offset}")
        if phases != reference:
            raise GraphError(f"walker at offset {offset} would see a shifted transport sequence")
        psi = np.asarray(initial, dtype=complex)
        if psi.shape != (layout.vertex_count,):
            raise GraphError("initial state does not match the layout")
        psi, _ = _run(layout, phases, psi)
        results.append(_result(layout, psi))
    return results


def measure_and_eject(result: RunResult, tol: float = LEAK_WARN) -> Measurement:
    """Output-rail probabilities, renormalized by the captured weight."""
    p = np.abs(result.output_amplitudes) ** 2
    captured = 1.0 - result.leakage
    warning = None
    if result.leakage > tol:
        warning = f"leakage {result.leakage:.3e} exceeds {tol:.1e}"
        log.warning(warning)
    if captured > 0:
        p = p / captured
    return Measurement(p, result.leakage, warning)


def leakage_profile(trace: SimulationTrace, layout: RailLayout) -> np.ndarray:
    """Probability outside the expected rail column at each phase boundary."""
    out = np.empty(len(trace))
    for k, snap in enumerate(trace.snapshots):
        col = layout.column(layout.expected_column(snap.index))
        out[k] = max(0.0, 1.0 - float(np.sum(np.abs(snap.state[col]) ** 2)))
    return out
