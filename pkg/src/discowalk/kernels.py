"""Hot kernels with a compiled backend and a numpy fallback.

The compiled module is used when it imported cleanly, unless the environment
variable ``DISCOWALK_PURE_PYTHON`` is set to a non-empty value other than 0.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "word_search", "word_search_py", "word_search_compiled", "su2_distance"]

TIE_EPS = 1e-12


def su2_distance(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Phase-invariant distance ``sqrt(1 - |tr(u^dag v)|/2)`` for stacks of 2x2 unitaries.

    Evaluated as ``||c u - v||_F / 2`` with the optimal phase ``c``, which equals
    the trace form for unitaries but keeps full precision near zero.
    """
    z = np.einsum("...ij,...ij->...", u.conj(), v)
    az = np.abs(z)
    c = np.where(az > 0, z / np.where(az > 0, az, 1), 1)
    diff = c[..., None, None] * u - v
    return np.sqrt(np.sum(np.abs(diff) ** 2, axis=(-2, -1))) / 2


def word_search_py(gens: np.ndarray, target: np.ndarray, max_depth: int, eps: float = TIE_EPS):
    """Level-by-level enumeration; same visiting order and update rule as the compiled kernel."""
    gens = np.asarray(gens, dtype=complex)
    target = np.asarray(target, dtype=complex)
    k = len(gens)
    level = np.eye(2, dtype=complex)[None]
    best = np.inf
    best_word: list[int] = []
    for L in range(max_depth + 1):
        if L:
            # lexicographic order: each prefix followed by every letter in turn
            level = np.einsum("wij,kjl->wkil", level, gens).reshape(-1, 2, 2)
        d = su2_distance(level, target)
        start = 0
        while True:
            hits = np.flatnonzero(d[start:] < best - eps)
            if hits.size == 0:
                break
            idx = start + int(hits[0])
            best = float(d[idx])
            best_word = [(idx // k ** (L - 1 - p)) % k for p in range(L)]
            start = idx + 1
    return best_word, best


try:
    from ._wordsearch import word_search as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None


def word_search_compiled(gens, target, max_depth: int, eps: float = TIE_EPS):
    if _compiled is None:
        raise RuntimeError("compiled kernels are not built")
    g = np.ascontiguousarray(np.asarray(gens, dtype=complex).reshape(-1, 4)).view(float)
    t = np.ascontiguousarray(np.asarray(target, dtype=complex).reshape(4)).view(float)
    word, d = _compiled(np.ascontiguousarray(g), np.ascontiguousarray(t), int(max_depth), float(eps))
    return [int(x) for x in word], float(d)


_force_py = os.environ.get("DISCOWALK_PURE_PYTHON", "") not in ("", "0")

if _compiled is not None and not _force_py:
    BACKEND = "cython"
    word_search = word_search_compiled
else:
    BACKEND = "python"
    word_search = word_search_py
