import json
import os
import subprocess
import sys

import pytest

from paulisynth.cli import TIMING_FIELDS, main
from paulisynth.io import (
    FormatError,
    format_coupling,
    generate_heisenberg,
    generate_random_word,
    parse_coupling_text,
    parse_hamiltonian,
    parse_hamiltonian_text,
    path_edges,
    write_hamiltonian,
)
from paulisynth.ordering import build_dag
from paulisynth.pauli import commutes, render


def _run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestHamiltonianFiles:
    def test_two_lines(self):
        w = parse_hamiltonian_text("XZZX 0.25\nYXXY 0.5\n")
        assert (len(w), w.n) == (2, 4)
        assert [render(r) for r in w.rows()] == ["XZZX", "YXXY"]
        assert w.thetas.tolist() == [0.25, 0.5]

    def test_comments(self):
        w = parse_hamiltonian_text("# header\n\nXZ 0.1  # trailing\n-ZZ -0.2\n")
        assert [render(r) for r in w.rows()] == ["XZ", "-ZZ"]

    @pytest.mark.parametrize(
        "text, msg",
        [("XZ 0.1\nXZZ 0.2\n", "qubits"), ("XZ abc\n", "bad angle"), ("# only\n", "no Pauli"), ("XQ 0.1", "letter"),
         ("XZ inf", "finite"), ("XZ", "expected")],
    )
    def test_errors(self, text, msg):
        with pytest.raises(FormatError, match=msg):
            parse_hamiltonian_text(text)

    def test_round_trip(self, tmp_path):
        w = generate_random_word(7, 100, 0.4, seed=9)
        path = tmp_path / "h.txt"
        write_hamiltonian(path, w)
        assert parse_hamiltonian(path) == w


class TestCoupling:
    def test_parse(self):
        n, edges = parse_coupling_text("# path\n3\n0 1\n1 2\n")
        assert n == 3 and edges == [(0, 1), (1, 2)]
        assert parse_coupling_text(format_coupling(4, path_edges(4))) == (4, path_edges(4))

    @pytest.mark.parametrize("text", ["", "x\n", "3\n0 3\n", "3\n1 1\n", "3\n0\n"])
    def test_errors(self, text):
        with pytest.raises(FormatError):
            parse_coupling_text(text)


class TestGenerators:
    def test_heisenberg_sizes(self):
        assert len(generate_heisenberg(1, 2)) == 3
        w = generate_heisenberg(2, 2, J=2.0, theta=0.25)
        assert (len(w), w.n) == (12, 4)
        assert set(w.thetas.tolist()) == {0.5}
        with pytest.raises(ValueError):
            generate_heisenberg(1, 1)

    def test_heisenberg_front_layer(self):
        w = generate_heisenberg(2, 3)
        rows = w.rows()
        front = [v for v in range(len(w)) if all(commutes(rows[u], rows[v]) for u in range(v))]
        assert build_dag(w).front_layer() == front

    def test_random_word(self):
        w = generate_random_word(6, 20, 0.3, seed=1)
        assert (w.weights() >= 1).all()
        assert generate_random_word(6, 20, 0.3, seed=1) == w
        with pytest.raises(ValueError):
            generate_random_word(3, 3, 0.0)


@pytest.fixture
def ham(tmp_path):
    path = tmp_path / "h.txt"
    write_hamiltonian(path, generate_random_word(4, 6, 0.6, seed=2))
    return path


class TestCli:
    def test_single_string_verify(self, tmp_path, capsys):
        path = tmp_path / "one.txt"
        path.write_text("ZYXZ 0.3\n")
        report = tmp_path / "r.json"
        code, out, _ = _run(["synth", path, "--verify", "--report", report], capsys)
        assert code == 0
        data = json.loads(report.read_text())
        assert data["cnots"] == 6 and data["cnots_leading"] == 3 and data["verify"] is True
        assert out.startswith("OPENQASM 2.0;")

    def test_report_schema(self, ham, tmp_path, capsys):
        report = tmp_path / "r.json"
        code, _, _ = _run(["synth", ham, "--iterations", "7", "--report", report, "--emit", "none"], capsys)
        data = json.loads(report.read_text())
        assert code == 0
        assert data["schema"] == 1
        for key in ("cnots", "depth", "gates", "iterations", "seed", "mode", "heuristic", "elapsed_ms", "best_per_iteration"):
            assert key in data
        assert data["mode"] == "preserve" and data["heuristic"] == "logical" and data["iterations"] == 7
        curve = data["best_per_iteration"]
        assert len(curve) == 7 and all(b <= a for a, b in zip(curve, curve[1:]))
        assert data["mu"] == pytest.approx(2**0.5)

    def test_out_file_and_progress(self, ham, tmp_path, capsys):
        out = tmp_path / "c.qasm"
        code, stdout, err = _run(["synth", ham, "--iterations", "3", "--out", out, "--progress"], capsys)
        assert code == 0 and stdout == ""
        assert out.read_text().startswith("OPENQASM 2.0;")
        lines = [line for line in err.splitlines() if line.count(",") == 2]
        assert [int(line.split(",")[0]) for line in lines] == [1, 2, 3]

    def test_hardware_needs_coupling(self, ham, capsys):
        code, _, err = _run(["synth", ham, "--heuristic", "hardware"], capsys)
        assert code == 2 and "--coupling" in err

    def test_hardware_mode(self, ham, tmp_path, capsys):
        cpl = tmp_path / "c.txt"
        cpl.write_text(format_coupling(4, path_edges(4)))
        code, out, _ = _run(["synth", ham, "--heuristic", "hardware", "--coupling", cpl, "--verify", "--iterations", "5"], capsys)
        assert code == 0

    def test_coupling_size_mismatch(self, ham, tmp_path, capsys):
        cpl = tmp_path / "c.txt"
        cpl.write_text(format_coupling(3, path_edges(3)))
        code, _, _ = _run(["synth", ham, "--heuristic", "hardware", "--coupling", cpl], capsys)
        assert code == 2

    def test_disconnected_coupling(self, ham, tmp_path, capsys):
        cpl = tmp_path / "c.txt"
        cpl.write_text("4\n0 1\n2 3\n")
        code, _, err = _run(["synth", ham, "--heuristic", "hardware", "--coupling", cpl], capsys)
        assert code == 2 and "disconnected" in err

    def test_verify_cap(self, tmp_path, capsys):
        path = tmp_path / "big.txt"
        path.write_text("Z" * 11 + " 0.1\n")
        code, _, err = _run(["synth", path, "--verify"], capsys)
        assert code == 2 and "at most" in err

    def test_bad_input(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("XQ 0.1\n")
        assert _run(["synth", path], capsys)[0] == 2
        assert _run(["synth", tmp_path / "missing.txt"], capsys)[0] == 2

    def test_usage_errors(self, ham):
        for argv in (["synth", str(ham), "--iterations", "0"], ["synth", str(ham), "--mode", "x"], []):
            with pytest.raises(SystemExit) as exc:
                main(argv)
            assert exc.value.code == 2

    def test_modify_and_no_tail_opt(self, ham, capsys):
        code, _, _ = _run(["synth", ham, "--mode", "modify", "--no-tail-opt", "--verify", "--iterations", "4"], capsys)
        assert code == 0

    def test_deterministic(self, ham, tmp_path, capsys):
        outs = []
        for k in range(2):
            q, r = tmp_path / f"{k}.qasm", tmp_path / f"{k}.json"
            _run(["synth", ham, "--iterations", "25", "--mode", "modify", "--seed", "5", "--out", q, "--report", r], capsys)
            data = json.loads(r.read_text())
            for key in TIMING_FIELDS:
                data.pop(key)
            outs.append((q.read_bytes(), data))
        assert outs[0] == outs[1]

    def test_generators(self, tmp_path, capsys):
        code, out, _ = _run(["gen-heisenberg", "1", "3", "--theta", "0.5"], capsys)
        assert code == 0 and out.splitlines()[0] == "IXX 0.5"
        dest = tmp_path / "r.txt"
        assert _run(["gen-random", "5", "9", "--seed", "2", "--out", dest], capsys)[0] == 0
        assert len(parse_hamiltonian(dest)) == 9

    def test_module_entry_point(self, ham):
        res = subprocess.run([sys.executable, "-m", "paulisynth", "synth", str(ham), "--emit", "none"], capture_output=True, text=True)
        assert res.returncode == 0 and "cnots=" in res.stderr

    def test_verify_failure_exit_code(self, ham, capsys, monkeypatch):
        import paulisynth.cli as cli

        monkeypatch.setattr(cli, "equal_up_to_phase", lambda a, b: False)
        code, _, _ = _run(["synth", ham, "--verify", "--emit", "none"], capsys)
        assert code == 3

    def test_log_env(self, ham):
        env = dict(os.environ, SYNTH_LOG="INFO")
        res = subprocess.run([sys.executable, "-m", "paulisynth", "synth", str(ham), "--emit", "none"], capture_output=True, text=True, env=env)
        assert "INFO paulisynth" in res.stderr


def test_modify_beats_preserve_in_aggregate():
    from paulisynth.mcts import SearchConfig, search

    pres = mod = 0
    for seed in range(20):
        w = generate_random_word(5, 10, 0.7, seed=seed)
        pres += search(w, SearchConfig(iterations=30, mode="preserve")).best.cnots
        mod += search(w, SearchConfig(iterations=30, mode="modify")).best.cnots
    assert mod <= pres
