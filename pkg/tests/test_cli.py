import json
import subprocess
import sys
from importlib import resources

import pytest

from sparseinv.cli import main
from sparseinv.sysmodel import LinSystem, dumps, system_to_dict

DATA = resources.files("sparseinv").joinpath("data")
SIGMA0 = str(DATA.joinpath("sigma0.json"))
SIGMA1 = str(DATA.joinpath("sigma1.json"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_system(tmp_path, sysm, name="sys.json"):
    path = tmp_path / name
    path.write_text(dumps(system_to_dict(sysm)))
    return str(path)


@pytest.fixture
def endless(tmp_path):
    sysm = LinSystem.from_lists(
        [[-2, -2], [2, -1]],
        [[0, -1, -1], [-1, 1, 1]],
        [[2, 1], [-2, 1]],
        [[2, 1, -2], [-1, 1, -2]],
    )
    return write_system(tmp_path, sysm, "endless.json")


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", SIGMA1)
    assert code == 0 and out.splitlines()[-1] == "verdict: invertible"
    code, out, _ = run(capsys, "check", SIGMA0)
    assert code == 2 and "e2 - e4" in out


def test_check_json_is_deterministic(capsys):
    _, first, _ = run(capsys, "check", "--json", SIGMA0)
    _, second, _ = run(capsys, "check", "--json", SIGMA0)
    assert first == second
    rep = json.loads(first)
    assert rep["verdict"] == "not_invertible"
    assert set(rep["results"]) == {"geometric", "rank", "spectral"}
    assert "wall_time_s" not in rep


def test_timing_flag(capsys):
    code, out, _ = run(capsys, "check", "--method", "rank", "--timing", SIGMA1)
    assert code == 0 and out.splitlines()[-1].startswith("wall time: ")


def test_single_method(capsys):
    code, out, _ = run(capsys, "check", "--json", "--method", "geometric", SIGMA1)
    assert code == 0 and list(json.loads(out)["results"]) == ["geometric"]


def test_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "missing.json"))
    assert code == 1 and "sparseinv: error" in err
    with pytest.raises(SystemExit) as info:
        main(["check", "--method", "eigen", SIGMA0])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["check", "--s", "0", SIGMA0])
    assert info.value.code == 1


def test_malformed_entry_is_located(capsys, tmp_path):
    doc = json.loads(open(SIGMA1).read())
    doc["B"][2][1] = "0.25"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "check", str(path))
    assert code == 1 and "B[2][1]" in err and "0.25" in err


def test_invariants(capsys, tmp_path):
    code, out, _ = run(capsys, "invariants", "--json", "--s", "2", SIGMA0)
    rep = json.loads(out)
    assert code == 0 and rep["V"]["nu"] == 1 and rep["T"]["tau"] == 2
    code, out, _ = run(capsys, "invariants", "--json", SIGMA0)
    assert json.loads(out)["V"]["nu"] == 2
    full = write_system(tmp_path, LinSystem.from_lists([[1, 1], [0, 1]], [[1], [0]], [[1, 0], [0, 1]], [[0], [0]]))
    code, out, _ = run(capsys, "invariants", full)
    assert code == 0 and "nu" in out


def test_endless_T(capsys, endless):
    code, out, _ = run(capsys, "check", "--method", "spectral", endless)
    assert code == 3 and "undecided" in out
    code, out, _ = run(capsys, "check", endless)
    assert code == 2
    code, _, _ = run(capsys, "invariants", "--s", "2", "--max-members", "40", endless)
    assert code == 3


def test_recover_bundled_trace(capsys, tmp_path):
    out_path = tmp_path / "u.json"
    code, out, _ = run(capsys, "recover", SIGMA1, str(DATA.joinpath("sigma1_outputs.json")), "--out", str(out_path))
    assert code == 0 and out.startswith("status: ok; delay 1; recovered 20")
    assert out_path.read_text() == DATA.joinpath("sigma1_inputs.json").read_text()


def test_recover_zero_trace(capsys, tmp_path):
    path = tmp_path / "y.json"
    path.write_text(json.dumps({"dim": 3, "values": [["0", "0", "0"]] * 4}))
    code, out, _ = run(capsys, "recover", "--json", SIGMA1, str(path))
    rep = json.loads(out)
    assert code == 0 and rep["recovered"] == 3 and rep["supports"] == [[], [], []]


def test_recover_needs_certificate(capsys):
    amb = str(DATA.joinpath("sigma0_ambiguous_outputs.json"))
    code, _, err = run(capsys, "recover", SIGMA0, amb)
    assert code == 1 and "--force" in err
    code, out, _ = run(capsys, "recover", "--force", SIGMA0, amb)
    assert code == 4 and "step 0" in out
    code, _, err = run(capsys, "recover", "--delay", "0", SIGMA1, str(DATA.joinpath("sigma1_outputs.json")))
    assert code == 1 and "no rank certificate" in err


def test_simulate_matches_bundled_outputs(capsys, tmp_path):
    inputs = json.loads(DATA.joinpath("sigma1_inputs.json").read_text())
    inputs["values"].append(["0"] * 4)
    path = tmp_path / "u.json"
    path.write_text(json.dumps(inputs))
    code, out, _ = run(capsys, "simulate", SIGMA1, str(path))
    assert code == 0 and out == DATA.joinpath("sigma1_outputs.json").read_text()
    code, _, err = run(capsys, "simulate", "--steps", "99", SIGMA1, str(path))
    assert code == 1


def test_demo(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0
    assert "Σ₀: NOT left 1-sparse invertible" in out
    assert "Σ₁: left 1-sparse invertible, delay 1" in out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sparseinv.cli", "check", "--method", "rank", SIGMA0],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2 and "NOT invertible" in proc.stdout
