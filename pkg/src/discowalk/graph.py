"""Weighted graphs as Hamiltonians and their exact continuous-time evolution.

A graph's adjacency matrix is real symmetric, so ``exp(-iGt)`` is computed from
a dense eigendecomposition ``G = Q diag(lam) Q^T``. The decomposition is the
only expensive step; callers that evolve under the same graph for several
durations should compute a :class:`Spectrum` once and pass it in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "GraphError",
    "NumericalError",
    "WeightedGraph",
    "Spectrum",
    "adjacency_matrix",
    "spectrum",
    "evolve",
    "propagator",
    "transfer_amplitude",
    "basis_state",
    "christandl_chain",
    "xy_single_excitation_block",
    "MAX_XY_SPINS",
]

MAX_XY_SPINS = 12


class GraphError(ValueError):
    """Malformed graph, vertex or state."""


class NumericalError(ArithmeticError):
    """Eigendecomposition failed its reconstruction checks."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with strictly positive edge weights.

    Vertices are ``0 .. vertex_count - 1``; ``labels`` optionally names them.
    Absent edges carry weight zero.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, float], ...] = ()
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be non-negative")
        edges = tuple((int(i), int(j), float(w)) for i, j, w in self.edges)
        seen = set()
        for i, j, w in edges:
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise GraphError(f"edge ({i}, {j}) references a missing vertex")
            if i == j:
                raise GraphError(f"self-loop on vertex {i}")
            if not w > 0 or not np.isfinite(w):
                raise GraphError(f"edge ({i}, {j}) has nonpositive weight {w!r}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", edges)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.vertex_count:
                raise GraphError("one label per vertex required")
            if len(set(labels)) != len(labels):
                raise GraphError("vertex labels must be unique")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence], labels=None):
        return cls(vertex_count, tuple(tuple(e) for e in edges), labels)

    def weight(self, i: int, j: int) -> float:
        for a, b, w in self.edges:
            if (a, b) == (i, j) or (a, b) == (j, i):
                return w
        return 0.0

    def check_vertex(self, v: int) -> int:
        if not 0 <= v < self.vertex_count:
            raise GraphError(f"vertex {v} not in graph of {self.vertex_count} vertices")
        return v


def adjacency_matrix(g: WeightedGraph) -> np.ndarray:
    """Dense adjacency matrix, symmetric by construction."""
    m = np.zeros((g.vertex_count, g.vertex_count))
    for i, j, w in g.edges:
        m[i, j] = w
        m[j, i] = w
    return m


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float = field(default=0.0, compare=False)


def spectrum(g: WeightedGraph | np.ndarray, tol: float = 1e-10) -> Spectrum:
    """Eigendecomposition of the adjacency matrix with reconstruction checks."""
    m = adjacency_matrix(g) if isinstance(g, WeightedGraph) else np.asarray(g, dtype=float)
    if m.size == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0)))
    try:
        lam, q = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}", float("inf")) from exc
    recon = float(np.max(np.abs(m - (q * lam) @ q.T)))
    ortho = float(np.max(np.abs(q.T @ q - np.eye(len(lam)))))
    scale = max(1.0, float(np.max(np.abs(m))))
    if recon > tol * scale:
        raise NumericalError("eigendecomposition does not reconstruct the matrix", recon)
    if ortho > tol:
        raise NumericalError("eigenvectors are not orthonormal", ortho)
    return Spectrum(lam, q, max(recon, ortho))


def basis_state(n: int, v: int) -> np.ndarray:
    psi = np.zeros(n, dtype=complex)
    psi[v] = 1.0
    return psi


def evolve(g: WeightedGraph, psi, t: float, spec: Spectrum | None = None) -> np.ndarray:
    """Return ``exp(-i G t) psi``."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (g.vertex_count,):
        raise GraphError(f"state has shape {psi.shape}, graph has {g.vertex_count} vertices")
    if t < 0:
        raise GraphError("evolution time must be non-negative")
    if t == 0 or g.vertex_count == 0:
        return psi.copy()
    if spec is None:
        spec = spectrum(g)
    return apply_spectrum(spec, psi, t)


def apply_spectrum(spec: Spectrum, psi: np.ndarray, t: float) -> np.ndarray:
    q = spec.eigenvectors
    return q @ (np.exp(-1j * spec.eigenvalues * t) * (q.T @ psi))


def propagator(g: WeightedGraph, t: float, spec: Spectrum | None = None) -> np.ndarray:
    """Full unitary ``exp(-i G t)``."""
    if spec is None:
        spec = spectrum(g)
    q = spec.eigenvectors
    return (q * np.exp(-1j * spec.eigenvalues * t)) @ q.T


def transfer_amplitude(g: WeightedGraph, v_in: int, v_out: int, t: float) -> complex:
    """``<v_out| exp(-iGt) |v_in>``."""
    g.check_vertex(v_in)
    g.check_vertex(v_out)
    if t < 0:
        # exp(iG|t|) is the adjoint of exp(-iG|t|)
        return complex(np.conj(transfer_amplitude(g, v_out, v_in, -t)))
    return complex(evolve(g, basis_state(g.vertex_count, v_in), t)[v_out])


def christandl_chain(M: int, scale: float = 1.0) -> WeightedGraph:
    """Path on ``M + 1`` vertices with couplings ``scale * sqrt(j (M + 1 - j))``.

    With ``scale = 1`` the ends exchange perfectly at ``t = pi/2``; dividing by
    ``sqrt(M)`` stretches that to ``sqrt(M) pi / 2`` with unit end couplings.
    """
    if M < 1:
        raise GraphError("chain needs at least one segment")
    if not scale > 0:
        raise GraphError("scale must be positive")
    edges = tuple((j - 1, j, scale * np.sqrt(j * (M + 1 - j))) for j in range(1, M + 1))
    return WeightedGraph(M + 1, edges)


_SX = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
_SY = sp.csr_matrix(np.array([[0.0, -1j], [1j, 0.0]]))


def _site_op(op, site: int, k: int):
    left = sp.identity(2**site, format="csr")
    right = sp.identity(2 ** (k - site - 1), format="csr")
    return sp.kron(sp.kron(left, op, format="csr"), right, format="csr")


def xy_single_excitation_block(couplings: WeightedGraph) -> np.ndarray:
    """Single-excitation block of ``1/2 sum w_ij (X_i X_j + Y_i Y_j)``.

    The full ``2^k``-dimensional spin Hamiltonian is assembled from Pauli
    Kronecker products; the block is then read off the states with exactly one
    spin up, ordered by the position of that spin. The result is real.
    """
    k = couplings.vertex_count
    if k > MAX_XY_SPINS:
        raise GraphError(f"{k} spins exceeds the {MAX_XY_SPINS}-spin limit")
    if k == 0:
        return np.zeros((0, 0))
    h = sp.csr_matrix((2**k, 2**k), dtype=complex)
    for i, j, w in couplings.edges:
        xx = _site_op(_SX, i, k) @ _site_op(_SX, j, k)
        yy = _site_op(_SY, i, k) @ _site_op(_SY, j, k)
        h = h + 0.5 * w * (xx + yy)
    # spin j up <-> bit (k - 1 - j) set, site 0 being the most significant factor
    idx = [1 << (k - 1 - j) for j in range(k)]
    block = h[idx, :][:, idx].toarray()
    if np.max(np.abs(block.imag), initial=0.0) > 1e-12:
        raise NumericalError("XY block is not real", float(np.max(np.abs(block.imag))))
    return block.real.copy()
