"""Command-line front end.

Exit codes: 0 success, 1 verification or search failure (including leakage
above tolerance), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import formats
from .engine import LEAK_WARN, measure_and_eject, rail_input, run_pipelined, run_walk
from .graph import GraphError
from .layout import PipelineOffsetError, extend_schedule, pipeline_offset
from .logical import CircuitError, compile_circuit, extract_logical_unitary, ideal_unitary
from .search import SearchConfig, search
from .verify import SUITES, run_suite
from .widgets import catalog, widget_port_matrix

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def num(x: float) -> str:
    return f"{float(x):.15g}"


def _tolerance(flag: float | None) -> float:
    if flag is not None:
        return flag
    env = os.environ.get("DISCOWALK_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise SystemExit(f"DISCOWALK_TOL is not a number: {env!r}") from None
    return LEAK_WARN


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _load_circuit(path: str):
    return formats.load_circuit(_read(path))


def _parse_input(bits: str, n_qubits: int) -> int:
    if len(bits) != n_qubits or set(bits) - {"0", "1"}:
        raise formats.ParseError(0, f"--input must be {n_qubits} binary digits")
    return int(bits, 2)


def cmd_simulate(args) -> int:
    circuit = _load_circuit(args.circuit)
    tol = _tolerance(args.tol)
    layout, schedule = compile_circuit(circuit)
    n = circuit.n_qubits
    inputs = [_parse_input(args.input, n)] if args.input else range(2**n)
    print(f"qubits {n} layers {circuit.depth} phases {len(schedule)} "
          f"model_time {num(schedule.total_duration)}")
    worst = 0.0
    trace_fh = open(args.trace, "w") if args.trace else None
    try:
        for r in inputs:
            result, trace = run_walk(layout, schedule, rail_input(layout, np.eye(2**n)[r]))
            m = measure_and_eject(result, tol)
            worst = max(worst, result.leakage)
            label = format(r, f"0{n}b")
            print(f"input {label} leakage {num(result.leakage)}")
            for k, (a, p) in enumerate(zip(result.output_amplitudes, m.probabilities)):
                print(f"  out {format(k, f'0{n}b')} prob {num(p)} amp {formats.fmt_complex(a, 15)}")
            if trace_fh:
                formats.write_trace(trace, layout, trace_fh)
    finally:
        if trace_fh:
            trace_fh.close()
    if worst > tol:
        print(f"FAIL leakage {num(worst)} above tolerance {num(tol)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_compile(args) -> int:
    circuit = _load_circuit(args.circuit)
    layout, schedule = compile_circuit(circuit)
    if args.layout:
        with open(args.layout, "w") as fh:
            fh.write(formats.dump_layout(layout))
    if args.schedule:
        with open(args.schedule, "w") as fh:
            fh.write(formats.dump_schedule(schedule))
    print(f"vertices {layout.vertex_count} columns {layout.n_columns} phases {len(schedule)}")
    if args.unitary:
        u = extract_logical_unitary(layout, schedule)
        print("extracted")
        sys.stdout.write(formats.dump_unitary(u))
        print("ideal")
        sys.stdout.write(formats.dump_unitary(ideal_unitary(circuit)))
    return EXIT_OK


def cmd_verify(args) -> int:
    rows = run_suite(args.suite)
    width = max(len(r.claim) for r in rows)
    print(f"{'claim':<{width}}  {'measured':>22}  {'tolerance':>10}  result")
    for r in rows:
        print(f"{r.claim:<{width}}  {num(r.measured):>22}  {r.tolerance:>10.0e}  "
              f"{'pass' if r.passed else 'FAIL'}")
    failed = sum(not r.passed for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_search(args) -> int:
    problem = formats.load_problem(_read(args.problem))
    config = SearchConfig(restarts=args.restarts, max_iters=args.max_iters, tol=args.tol, seed=args.seed)
    res = search(problem, config)
    print(f"seed {res.seed} restarts {res.restarts_used} best_restart {res.best_restart}")
    for g, w in zip(res.groups, res.weights):
        print(f"weight {g} {num(w)}")
    print(f"objective {num(res.objective)}")
    print("port_matrix " + " ".join(formats.fmt_complex(z, 15) for z in res.achieved_port_matrix.ravel()))
    if not res.success:
        print(f"FAIL no restart reached objective < {num(config.tol)}; best {num(res.objective)}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_pipeline(args) -> int:
    circuit = _load_circuit(args.circuit)
    layout, schedule = compile_circuit(circuit)
    n = circuit.n_qubits
    try:
        step = pipeline_offset(n)
    except PipelineOffsetError as exc:
        print(f"note: {exc}")
        step = exc.fallback
    r = _parse_input(args.input, n) if args.input else 0
    psi = rail_input(layout, np.eye(2**n)[r])
    starts = [(psi, k * step) for k in range(args.walkers)]
    glob = extend_schedule(n, layout.depth + (args.walkers - 1) * step)
    solo, _ = run_walk(layout, schedule, psi)
    print(f"walkers {args.walkers} offset {step} phases {len(glob)} model_time {num(glob.total_duration)}")
    worst = 0.0
    for k, res in enumerate(run_pipelined(layout, glob, starts)):
        diff = float(np.max(np.abs(res.output_amplitudes - solo.output_amplitudes), initial=0.0))
        worst = max(worst, diff)
        probs = " ".join(num(p) for p in measure_and_eject(res).probabilities)
        print(f"walker {k} start_phase {k * step} leakage {num(res.leakage)} "
              f"max_diff_vs_solo {num(diff)} probs {probs}")
    return EXIT_OK if worst <= 1e-12 else EXIT_FAIL


def cmd_widgets(args) -> int:
    items = catalog()
    if args.dump:
        if args.dump not in items:
            print(f"unknown widget {args.dump!r}; choose from {', '.join(items)}", file=sys.stderr)
            return EXIT_USAGE
        sys.stdout.write(formats.dump_widget(items[args.dump]))
        return EXIT_OK
    for name, w in items.items():
        p, leak = widget_port_matrix(w)
        err = float(np.max(np.abs(p - w.ideal_port_matrix)))
        print(f"{name} vertices {w.graph.vertex_count} time {num(w.traversal_time)} "
              f"leakage {num(leak)} port_error {num(err)}")
        print("  port_matrix " + " ".join(formats.fmt_complex(z, 15) for z in p.ravel()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="discowalk", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="compile a circuit file and run its basis inputs")
    p.add_argument("circuit")
    p.add_argument("--input", help="bitstring of the single input rail to run")
    p.add_argument("--trace", help="write a per-phase amplitude CSV here")
    p.add_argument("--tol", type=float, default=None, help="leakage tolerance (env DISCOWALK_TOL)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compile", help="dump the layout and schedule of a circuit")
    p.add_argument("circuit")
    p.add_argument("--layout", help="layout output path")
    p.add_argument("--schedule", help="schedule output path")
    p.add_argument("--unitary", action="store_true", help="also print extracted and ideal unitaries")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="run a claim suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="search widget weights for a problem file")
    p.add_argument("problem")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-iters", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("pipeline", help="run several walkers through one schedule")
    p.add_argument("circuit")
    p.add_argument("--walkers", type=int, default=2)
    p.add_argument("--input", help="bitstring input rail (default all zeros)")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("widgets", help="list the widget catalog")
    p.add_argument("--dump", help="print one widget in the graph exchange format")
    p.set_defaults(func=cmd_widgets)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except formats.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CircuitError, GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
