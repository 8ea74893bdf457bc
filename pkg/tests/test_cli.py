import subprocess
import sys
from pathlib import Path

import pytest

from discowalk.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_sqrtz_input_1(capsys):
    code, out, _ = run(capsys, "simulate", DATA / "sqrtz.circ", "--input", "1")
    assert code == 0
    assert "input 1 leakage" in out
    leak = float(out.split("leakage ")[1].split()[0])
    assert leak < 1e-9
    assert "out 1 prob 1 " in out


def test_simulate_all_inputs_and_trace(capsys, tmp_path):
    trace = tmp_path / "t.csv"
    code, out, _ = run(capsys, "simulate", DATA / "ghz3.circ", "--trace", trace)
    assert code == 0
    assert out.count("input ") == 8
    assert trace.read_text().startswith("phase,set,duration")


def test_simulate_empty(capsys, tmp_path):
    f = tmp_path / "e.circ"
    f.write_text("qubits 1\n")
    code, out, _ = run(capsys, "simulate", f)
    assert code == 0
    assert "phases 0" in out
    assert "out 0 prob 1 amp 1+0j" in out


def test_malformed_diag(capsys, tmp_path):
    f = tmp_path / "bad.circ"
    f.write_text("qubits 1\nlayer\ndiag sqrtz 5\n")
    code, _, err = run(capsys, "simulate", f)
    assert code == 2
    assert "line 3" in err


def test_missing_file(capsys):
    code, _, _ = run(capsys, "simulate", "/nonexistent.circ")
    assert code == 2


def test_leakage_breach(capsys, monkeypatch):
    monkeypatch.setenv("DISCOWALK_TOL", "-1")
    code, _, err = run(capsys, "simulate", DATA / "sqrtz.circ")
    assert code == 1 and "FAIL" in err
    # flag beats the environment
    code, _, _ = run(capsys, "simulate", DATA / "sqrtz.circ", "--tol", "1e-6")
    assert code == 0


def test_compile(capsys, tmp_path):
    code, out, _ = run(capsys, "compile", DATA / "cz.circ", "--layout", tmp_path / "l.txt",
                       "--schedule", tmp_path / "s.txt", "--unitary")
    assert code == 0
    assert "extracted" in out and "ideal" in out
    assert (tmp_path / "s.txt").read_text().count("phase") == 12


@pytest.mark.parametrize("suite", ["widgets", "gates", "pipeline", "xy"])
def test_verify(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite)
    assert code == 0
    assert "FAIL" not in out


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "nope"])
    assert info.value.code == 2


def test_search_rotation(capsys):
    code, out, _ = run(capsys, "search", DATA / "rotation.prob", "--restarts", "8")
    assert code == 0
    assert "weight mu_R 3.46410161" in out


def test_search_unsatisfiable(capsys):
    code, out, err = run(capsys, "search", DATA / "three_vertex.prob", "--restarts", "4")
    assert code == 1
    assert "best" in err and "objective" in out


def test_search_bytes_deterministic():
    cmd = [sys.executable, "-m", "discowalk", "search", str(DATA / "rotation.prob"),
           "--restarts", "4", "--seed", "11"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_pipeline(capsys):
    code, out, _ = run(capsys, "pipeline", DATA / "ghz3.circ", "--walkers", "3", "--input", "101")
    assert code == 0
    assert "offset 4" in out and out.count("walker ") == 3


def test_pipeline_even_n_falls_back(capsys):
    code, out, _ = run(capsys, "pipeline", DATA / "cz.circ")
    assert code == 0
    assert "offset 6" in out and "note:" in out


def test_widgets(capsys):
    code, out, _ = run(capsys, "widgets")
    assert code == 0 and "rotation0" in out
    code, out, _ = run(capsys, "widgets", "--dump", "phase")
    assert code == 0 and out.startswith("# widget phase")
    code, _, _ = run(capsys, "widgets", "--dump", "nope")
    assert code == 2


def test_no_command():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
