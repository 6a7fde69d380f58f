import json
import subprocess
import sys

import numpy as np
import pytest

from stabtest.cli import main
from stabtest.quantum import load_state, p_hat_table, p_table, q_table


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def state_file(tmp_path, capsys):
    path = tmp_path / "s.json"
    code, _, _ = run(capsys, "gen", "--kind", "depolarized-stabilizer", "--n", "2",
                     "--p", "0.2", "--seed", "7", "--out", str(path))
    assert code == 0
    return path


def test_gen_writes_valid_state(state_file):
    rho = load_state(state_file)
    assert rho.n == 2
    assert rho.purity() == pytest.approx(1 - 0.2 * (2 - 0.2) * 3 / 4)


def test_gen_to_stdout(capsys):
    code, out, _ = run(capsys, "gen", "--kind", "mixed-ginibre", "--n", "1", "--rank", "1", "--seed", "3")
    assert code == 0
    assert json.loads(out)["format"] == "stabtest-state-v1"


def test_analyze(state_file, capsys):
    code, out, _ = run(capsys, "analyze", str(state_file))
    assert code == 0
    doc = json.loads(out)
    for key in ("purity", "eta", "eta_gnw", "eta_prime", "stabilizer_fidelity", "best_stabilizer"):
        assert key in doc
    assert set(doc["tables"]) == {"p", "p_hat", "q"}
    assert doc["stabilizer_fidelity"] == pytest.approx(1 - 0.75 * 0.2)


def test_round_trip_is_bit_exact(state_file, capsys):
    _, out, _ = run(capsys, "analyze", str(state_file))
    tables = json.loads(out)["tables"]
    rho = load_state(state_file)
    assert tables["p"] == p_table(rho).values.tolist()
    assert tables["p_hat"] == p_hat_table(rho).values.tolist()
    assert tables["q"] == q_table(rho).values.tolist()


def test_analyze_csv(state_file, capsys):
    code, out, _ = run(capsys, "analyze", str(state_file), "--format", "csv", "--table", "q")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "index,a_bits,b_bits,value" and len(lines) == 17


def test_sample_is_reproducible(state_file, capsys):
    argv = ("sample", str(state_file), "--shots", "5000", "--mode", "measurement", "--seed", "4", "--threads", "2")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert json.loads(first)["shots"] == 5000


def test_sample_csv(state_file, capsys):
    code, out, _ = run(capsys, "sample", str(state_file), "--shots", "10", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 11


def test_test_exit_codes(tmp_path, state_file, capsys):
    close = tmp_path / "close.json"
    run(capsys, "gen", "--kind", "stabilizer", "--n", "2", "--index", "3", "--out", str(close))
    code, out, _ = run(capsys, "test", str(close), "--eps1", "0.99", "--eps2", "0.9", "--delta", "0.1")
    assert code == 0 and json.loads(out)["decision"] == "close"
    code, out, _ = run(capsys, "test", str(state_file), "--eps1", "0.99", "--eps2", "0.9", "--delta", "0.1")
    assert code == 1 and json.loads(out)["decision"] == "far"
    code, _, err = run(capsys, "test", str(state_file), "--eps1", "0.99", "--eps2", "0.93")
    assert code == 2 and "infeasible" in err


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--n", "2", "--trials", "50", "--seed", "1", "--threads", "4")
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 25 and all(r["failures"] == 0 for r in reports)


def test_verify_single_and_errors(capsys):
    code, out, _ = run(capsys, "verify", "--check", "duality", "--check", "mub_cover", "--n", "1", "--trials", "3")
    assert code == 0 and [r["check_name"] for r in json.loads(out)] == ["duality", "mub_cover"]
    code, _, err = run(capsys, "verify", "--check", "nope")
    assert code == 2 and "unknown" in err
    code, _, err = run(capsys, "verify", "--check", "fidelity_lower", "--n", "3")
    assert code == 2


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--what", "stabilizers", "--n", "2")
    assert code == 0 and json.loads(out)["count"] == 60
    _, out, _ = run(capsys, "enumerate", "--what", "lagrangians", "--n", "3")
    assert json.loads(out)["count"] == 135


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["gen", "--kind", "pure-haar", "--n", "1", "--bogus"],
    ["sample", "x.json"],
    ["verify"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_bad_input_file(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err


def test_console_entry_point(state_file):
    result = subprocess.run(
        [sys.executable, "-m", "stabtest.cli", "analyze", str(state_file)],
        capture_output=True, text=True, check=True,
    )
    assert np.isclose(json.loads(result.stdout)["eta"], (1 + 3 * 0.8**6) / 4)
