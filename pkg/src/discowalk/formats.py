"""Line-oriented text formats: graphs, widgets, layouts, schedules, circuits,
search problems, traces and unitaries.

Blank lines and ``#`` comments are ignored on input. Reals are written with 17
significant digits so they round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, TextIO

import numpy as np

from .graph import GraphError, WeightedGraph
from .layout import STATIC, TRANSPORT_SETS, RailLayout, Schedule
from .logical import CircuitError, Diagonal, Layer, LogicalCircuit
from .search import SearchProblem
from .widgets import Widget

__all__ = [
    "ParseError",
    "fmt_real",
    "fmt_complex",
    "parse_complex",
    "dump_graph",
    "load_graph",
    "dump_widget",
    "dump_layout",
    "dump_schedule",
    "load_schedule",
    "dump_circuit",
    "load_circuit",
    "load_problem",
    "dump_problem",
    "write_trace",
    "dump_unitary",
    "load_unitary",
]


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def fmt_real(x: float, digits: int = 17) -> str:
    return f"{float(x):.{digits}g}"


def fmt_complex(z: complex, digits: int = 17) -> str:
    z = complex(z)
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"


def parse_complex(tok: str) -> complex:
    return complex(tok.replace("i", "j"))


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line.split()


def _int(tok: str, n: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(n, f"expected an integer, got {tok!r}") from None


def _real(tok: str, n: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(n, f"expected a number, got {tok!r}") from None


# graphs -------------------------------------------------------------------


def dump_graph(g: WeightedGraph, extra: Iterable[str] = ()) -> str:
    out = [f"vertices {g.vertex_count}"]
    out += [f"edge {i} {j} {fmt_real(w)}" for i, j, w in g.edges]
    out += list(extra)
    return "\n".join(out) + "\n"


def load_graph(text: str) -> WeightedGraph:
    n_vertices = None
    edges = []
    for n, tok in _lines(text):
        if tok[0] == "vertices" and len(tok) == 2:
            n_vertices = _int(tok[1], n)
        elif tok[0] == "edge" and len(tok) in (4, 6):
            edges.append((_int(tok[1], n), _int(tok[2], n), _real(tok[3], n)))
        elif tok[0] in ("port", "time", "set"):
            continue
        else:
            raise ParseError(n, f"unrecognized line {' '.join(tok)!r}")
    if n_vertices is None:
        raise ParseError(0, "missing 'vertices' header")
    try:
        return WeightedGraph(n_vertices, tuple(edges))
    except GraphError as exc:
        raise ParseError(0, str(exc)) from None


def dump_widget(w: Widget) -> str:
    out = [f"# widget {w.name}", f"vertices {w.graph.vertex_count}"]
    for i, j, wt in w.graph.edges:
        tag = "g" if w.is_attachment(i, j) else STATIC
        out.append(f"edge {i} {j} {fmt_real(wt)} set {tag}")
    out += [f"port {p}" for p in w.ports]
    out.append(f"time {fmt_real(w.traversal_time)}")
    return "\n".join(out) + "\n"


def dump_layout(layout: RailLayout) -> str:
    out = [f"# layout qubits {layout.n_qubits} rounds {layout.n_rounds} columns {layout.n_columns}",
           f"vertices {layout.vertex_count}"]
    for key in (STATIC,) + TRANSPORT_SETS:
        for i, j, w in layout.edge_sets[key]:
            out.append(f"edge {i} {j} {fmt_real(w)} set {key}")
    return "\n".join(out) + "\n"


# schedules ----------------------------------------------------------------


def dump_schedule(s: Schedule) -> str:
    return "".join(f"phase {which} {fmt_real(d)}\n" for which, d in s.phases)


def load_schedule(text: str) -> Schedule:
    phases = []
    for n, tok in _lines(text):
        if tok[0] != "phase" or len(tok) != 3 or tok[1] not in TRANSPORT_SETS:
            raise ParseError(n, "expected 'phase <g|r|b> <duration>'")
        phases.append((tok[1], _real(tok[2], n)))
    return Schedule(tuple(phases))


# circuits -----------------------------------------------------------------


def load_circuit(text: str) -> LogicalCircuit:
    """Parse ``qubits N`` then ``layer`` blocks of ``diag ...`` / ``rx q...`` lines."""
    n_qubits = None
    layers: list[dict] = []
    for n, tok in _lines(text):
        head = tok[0]
        if head == "qubits":
            if n_qubits is not None or len(tok) != 2:
                raise ParseError(n, "expected a single 'qubits <N>' header")
            n_qubits = _int(tok[1], n)
            if n_qubits < 1:
                raise ParseError(n, "qubit count must be positive")
            continue
        if n_qubits is None:
            raise ParseError(n, "'qubits <N>' must come first")
        if head == "layer":
            if len(tok) != 1:
                raise ParseError(n, "'layer' takes no arguments")
            layers.append({"diag": None, "rx": set(), "line": n})
            continue
        if not layers:
            raise ParseError(n, f"{head!r} outside a layer")
        layer = layers[-1]
        if head == "diag":
            if len(tok) < 2:
                raise ParseError(n, "diag needs a gate name")
            if layer["diag"] is not None:
                raise ParseError(n, "conflicting diagonal assignments in one layer")
            kind, args = tok[1], [_int(t, n) for t in tok[2:]]
            try:
                diag = Diagonal(kind, tuple(args))
                diag.phase_rails(n_qubits)
            except CircuitError as exc:
                raise ParseError(n, str(exc)) from None
            layer["diag"] = diag
        elif head == "rx":
            if len(tok) < 2:
                raise ParseError(n, "rx needs at least one qubit")
            for t in tok[1:]:
                q = _int(t, n)
                if not 0 <= q < n_qubits:
                    raise ParseError(n, f"qubit {q} out of range")
                layer["rx"].add(q)
        else:
            raise ParseError(n, f"unrecognized line {' '.join(tok)!r}")
    if n_qubits is None:
        raise ParseError(0, "missing 'qubits <N>' header")
    return LogicalCircuit(
        n_qubits,
        tuple(Layer(d["diag"] or Diagonal(), frozenset(d["rx"])) for d in layers),
    )


def dump_circuit(c: LogicalCircuit) -> str:
    out = [f"qubits {c.n_qubits}"]
    for layer in c.layers:
        out.append("layer")
        d = layer.diagonal
        out.append(" ".join(["diag", d.kind, *map(str, d.qubits)]))
        if layer.rotations:
            out.append(" ".join(["rx", *map(str, sorted(layer.rotations))]))
    return "\n".join(out) + "\n"


# search problems ----------------------------------------------------------


def load_problem(text: str) -> SearchProblem:
    """Graph lines for fixed edges plus ``free``, ``port``, ``target-time``,
    ``target`` (row-major complex entries) and optional ``bounds lo hi``."""
    n_vertices = None
    fixed, free, ports = [], [], []
    t = None
    target = None
    bounds = None
    for n, tok in _lines(text):
        head = tok[0]
        if head == "vertices" and len(tok) == 2:
            n_vertices = _int(tok[1], n)
        elif head == "edge" and len(tok) == 4:
            fixed.append((_int(tok[1], n), _int(tok[2], n), _real(tok[3], n)))
        elif head == "free" and len(tok) in (3, 4):
            free.append((_int(tok[1], n), _int(tok[2], n), tok[3] if len(tok) == 4 else None))
        elif head == "port" and len(tok) == 2:
            ports.append(_int(tok[1], n))
        elif head == "target-time" and len(tok) == 2:
            t = _real(tok[1], n)
        elif head == "target" and len(tok) > 1:
            try:
                vals = [parse_complex(x) for x in tok[1:]]
            except ValueError:
                raise ParseError(n, "target entries must be complex literals like 0+1j") from None
            dim = int(round(np.sqrt(len(vals))))
            if dim * dim != len(vals):
                raise ParseError(n, "target must list a square matrix row-major")
            target = np.array(vals).reshape(dim, dim)
        elif head == "bounds" and len(tok) == 3:
            bounds = (_real(tok[1], n), _real(tok[2], n))
        else:
            raise ParseError(n, f"unrecognized line {' '.join(tok)!r}")
    missing = [name for name, v in (("vertices", n_vertices), ("target-time", t), ("target", target))
               if v is None]
    if missing:
        raise ParseError(0, f"missing {', '.join(missing)}")
    try:
        return SearchProblem(n_vertices, tuple(fixed), tuple(free), tuple(ports), t, target, bounds)
    except GraphError as exc:
        raise ParseError(0, str(exc)) from None


def dump_problem(p: SearchProblem) -> str:
    out = [f"vertices {p.vertex_count}"]
    out += [f"edge {i} {j} {fmt_real(w)}" for i, j, w in p.fixed_edges]
    out += [f"free {i} {j} {g}" for i, j, g in p.free_edges]
    out += [f"port {v}" for v in p.ports]
    out.append(f"target-time {fmt_real(p.target_time)}")
    out.append("target " + " ".join(fmt_complex(z) for z in p.target.ravel()))
    if len(set(p.bounds)) == 1:
        out.append(f"bounds {fmt_real(p.bounds[0][0])} {fmt_real(p.bounds[0][1])}")
    return "\n".join(out) + "\n"


# traces and unitaries -----------------------------------------------------


def write_trace(trace, layout: RailLayout, fh: TextIO, cutoff: float = 0.0):
    """One CSV row per (phase, vertex); ``cutoff`` drops rows with smaller |amplitude|."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["phase", "set", "duration", "vertex", "label", "re", "im"])
    for snap in trace.snapshots:
        for v, a in enumerate(snap.state):
            if abs(a) > cutoff or cutoff == 0.0:
                w.writerow([snap.index, snap.set, fmt_real(snap.duration, 15), v, layout.labels[v],
                            fmt_real(a.real, 15), fmt_real(a.imag, 15)])


def dump_unitary(u: np.ndarray, digits: int = 15) -> str:
    return "".join(" ".join(fmt_complex(z, digits) for z in row) + "\n" for row in np.asarray(u))


def load_unitary(text: str) -> np.ndarray:
    rows = [[parse_complex(t) for t in tok] for _, tok in _lines(text)]
    return np.array(rows, dtype=complex)


def summary_json(data: dict) -> str:
    buf = io.StringIO()
    json.dump(data, buf, indent=2, sort_keys=True)
    return buf.getvalue() + "\n"
