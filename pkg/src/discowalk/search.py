"""Multi-start simplex search for widget edge weights.

A problem fixes a topology, marks some edges free (edges sharing a group name
share one weight), and asks for a port matrix at a given time with nothing
left on interior vertices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .graph import GraphError, WeightedGraph, basis_state, evolve, spectrum

__all__ = [
    "DEFAULT_BOUNDS",
    "SearchProblem",
    "SearchConfig",
    "SearchResult",
    "build_graph",
    "port_matrix",
    "objective",
    "search",
    "rotation_problem",
    "phase_problem",
    "three_vertex_problem",
]

log = logging.getLogger(__name__)

DEFAULT_BOUNDS = (0.01, 8.0)


@dataclass(frozen=True)
class SearchProblem:
    vertex_count: int
    fixed_edges: tuple[tuple[int, int, float], ...]
    free_edges: tuple[tuple[int, int, str], ...]
    ports: tuple[int, ...]
    target_time: float
    target: np.ndarray
    bounds: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "fixed_edges", tuple((int(i), int(j), float(w)) for i, j, w in self.fixed_edges))
        free = []
        for k, e in enumerate(self.free_edges):
            i, j = int(e[0]), int(e[1])
            group = str(e[2]) if len(e) > 2 and e[2] is not None else f"w{i}_{j}"
            free.append((i, j, group))
        object.__setattr__(self, "free_edges", tuple(free))
        object.__setattr__(self, "ports", tuple(int(p) for p in self.ports))
        target = np.asarray(self.target, dtype=complex)
        object.__setattr__(self, "target", target)
        if not self.free_edges:
            raise GraphError("search problem needs at least one free weight")
        if target.shape != (len(self.ports),) * 2:
            raise GraphError("target must be square over the ports")
        if not np.allclose(target.conj().T @ target, np.eye(len(target)), atol=1e-10, rtol=0):
            raise GraphError("target port matrix is not unitary")
        if not self.target_time > 0:
            raise GraphError("target time must be positive")
        bounds = self.bounds
        if bounds is None:
            bounds = (DEFAULT_BOUNDS,) * len(self.groups)
        elif len(bounds) == 2 and np.isscalar(bounds[0]):
            bounds = (tuple(bounds),) * len(self.groups)
        bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
        if len(bounds) != len(self.groups):
            raise GraphError("one (lo, hi) bound per free weight")
        for lo, hi in bounds:
            if not (0 < lo < hi < np.inf):
                raise GraphError(f"bounds ({lo}, {hi}) must be finite with 0 < lo < hi")
        object.__setattr__(self, "bounds", bounds)
        # validate topology and ports once
        self.graph(np.mean(np.array(bounds), axis=1))

    @property
    def groups(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for _, _, g in self.free_edges:
            seen.setdefault(g, None)
        return tuple(seen)

    def graph(self, weights) -> WeightedGraph:
        return build_graph(self, weights)


def build_graph(problem: SearchProblem, weights) -> WeightedGraph:
    value = dict(zip(problem.groups, np.asarray(weights, dtype=float)))
    edges = list(problem.fixed_edges) + [(i, j, value[g]) for i, j, g in problem.free_edges]
    g = WeightedGraph(problem.vertex_count, tuple(edges))
    for p in problem.ports:
        g.check_vertex(p)
    return g


def port_matrix(problem: SearchProblem, weights) -> tuple[np.ndarray, float]:
    g = build_graph(problem, weights)
    spec = spectrum(g)
    ports = list(problem.ports)
    cols = [evolve(g, basis_state(g.vertex_count, p), problem.target_time, spec)[ports]
            for p in ports]
    p = np.column_stack(cols)
    leak = 1.0 - np.sum(np.abs(p) ** 2, axis=0)
    return p, float(max(0.0, np.max(leak)))


def objective(weights, problem: SearchProblem) -> float:
    """``||P - target||_F^2 + leakage``; zero exactly for generalized PST onto the target."""
    p, leak = port_matrix(problem, weights)
    return float(np.sum(np.abs(p - problem.target) ** 2) + leak)


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 32
    max_iters: int = 10_000
    tol: float = 1e-8
    seed: int = 0
    xatol: float = 1e-12


@dataclass(frozen=True)
class SearchResult:
    weights: np.ndarray
    objective: float
    achieved_port_matrix: np.ndarray
    restarts_used: int
    seed: int
    success: bool
    groups: tuple[str, ...] = ()
    best_restart: int = 0


def search(problem: SearchProblem, config: SearchConfig | None = None, **overrides) -> SearchResult:
    """Nelder-Mead from ``restarts`` seeded uniform starts; keep the best.

    Ties on objective go to the lowest restart index. Runs never stop early,
    so the result depends only on the problem and the config.
    """
    config = config or SearchConfig()
    if overrides:
        config = SearchConfig(**{**config.__dict__, **overrides})
    if config.restarts < 1:
        raise ValueError("need at least one restart")
    lo, hi = np.array(problem.bounds).T
    rng = np.random.default_rng(config.seed)
    starts = rng.uniform(lo, hi, size=(config.restarts, len(lo)))

    def f(w):
        # the simplex may probe outside the box before scipy clips it
        return objective(np.clip(w, lo, hi), problem)

    best_x, best_f, best_k = None, np.inf, -1
    for k, x0 in enumerate(starts):
        res = minimize(
            f, x0, method="Nelder-Mead", bounds=list(zip(lo, hi)),
            options={"maxiter": config.max_iters, "maxfev": 20 * config.max_iters,
                     "xatol": config.xatol, "fatol": np.inf, "adaptive": False},
        )
        x = np.clip(res.x, lo, hi)
        fx = objective(x, problem)
        log.debug("restart %d: objective %.3e at %s", k, fx, x)
        if fx < best_f:
            best_x, best_f, best_k = x, fx, k
    p, _ = port_matrix(problem, best_x)
    return SearchResult(
        weights=best_x,
        objective=best_f,
        achieved_port_matrix=p,
        restarts_used=config.restarts,
        seed=config.seed,
        success=best_f < config.tol,
        groups=problem.groups,
        best_restart=best_k,
    )


def rotation_problem(bounds=(0.1, 8.0)) -> SearchProblem:
    """Four-vertex path with free middle weight, targeting the rotation widget's port map."""
    c, s = np.cos(np.sqrt(3) * np.pi), np.sin(np.sqrt(3) * np.pi)
    return SearchProblem(
        4, ((0, 1, 1.0), (2, 3, 1.0)), ((1, 2, "mu_R"),), (0, 3), np.pi,
        np.array([[c, -1j * s], [-1j * s, c]]), (bounds,),
    )


def phase_problem(bounds=DEFAULT_BOUNDS) -> SearchProblem:
    """Weighted square between two unit attachments, targeting transfer with factor i."""
    return SearchProblem(
        6, ((0, 1, 1.0), (4, 5, 1.0)),
        ((1, 2, "mu_1"), (3, 4, "mu_1"), (1, 4, "mu_2"), (2, 3, "mu_3")),
        (0, 5), np.pi, np.array([[0, 1j], [1j, 0]]), (bounds,) * 3,
    )


def three_vertex_problem(bounds=DEFAULT_BOUNDS) -> SearchProblem:
    """Three-vertex path asked to transfer with factor i at ``t = sqrt(2) pi / 2``.

    A two-edge path transfers end to end only with factor -1, so this is
    unsatisfiable.
    """
    return SearchProblem(
        3, (), ((0, 1, "a"), (1, 2, "b")), (0, 2), np.sqrt(2) * np.pi / 2,
        np.array([[0, 1j], [1j, 0]]), (bounds,) * 2,
    )
