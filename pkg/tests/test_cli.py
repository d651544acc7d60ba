import json
import subprocess
import sys

import pytest

from freefield.cli import SCHEMA, build_parser, render, run


def run_json(*argv: str) -> tuple[int, dict]:
    code, text = run([*argv, "--format", "json"])
    return code, json.loads(text)


def test_me_vacuum_example():
    code, rep = run_json("me", "--m", "1", "--n", "1", "--nt", "1")
    assert code == 0 and rep["status"] == "pass"
    assert rep["results"]["generic"]["num"] == "(u+u^-1)"
    assert rep["results"]["specialized"]["num"] == "0"


def test_kappa_example():
    code, rep = run_json("kappa", "--s", "2", "--m", "3")
    assert code == 0
    assert rep["results"]["kappa"] == "(v^2+1)/(v^2-1)"


def test_verify_eqmotion():
    code, rep = run_json("verify", "eqmotion", "--nt", "3")
    assert code == 0 and all(c["status"] == "pass" for c in rep["checks"])


def test_verify_quick_battery():
    code, rep = run_json("verify", "kappa", "--quick")
    assert code == 0 and len(rep["checks"]) > 1


def test_macdonald_eigenvalue():
    code, rep = run_json("macdonald", "--lambda", "2,1")
    assert code == 0 and rep["results"]["eigenvalue"] == "v^8-v^4+1"


@pytest.mark.parametrize("argv", [
    ["singvec", "--m", "2", "--n", "1", "--s", "1"],
    ["intrep", "--s", "2", "--sp", "1"],
    ["ccoeff", "--nu", "2", "--k=-2,2"],
    ["probe", "--m", "1", "--n", "1", "--max-level", "2", "--samples", "2"],
])
def test_other_commands_pass(argv):
    code, rep = run_json(*argv)
    assert code == 0 and rep["status"] == "pass"


def test_ccoeff_permutation_sign():
    _, rep = run_json("ccoeff", "--nu", "2", "--k=-2,2")
    assert rep["results"]["c"] == -1


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["kappa", "--s", "x", "--m", "1"],
    ["me", "--m", "1"],
    ["singvec", "--m", "1", "--n", "3", "--s", "1"],
    ["verify", "nope"],
    ["macdonald", "--lambda", "2,a"],
])
def test_bad_input_exits_2(argv):
    code, _ = run(argv)
    assert code == 2


def test_input_error_is_reported():
    code, rep = run_json("singvec", "--m", "1", "--n", "3", "--s", "1")
    assert code == 2 and rep["status"] == "error" and rep["error"]


def test_report_shape_and_determinism():
    argv = ["singvec", "--m", "1", "--n", "1", "--s", "1", "--format", "json"]
    a, b = run(argv)[1], run(argv)[1]
    assert a == b
    rep = json.loads(a)
    assert set(rep) == {"schema", "version", "command", "inputs", "results", "checks", "status", "error"}
    assert rep["schema"] == SCHEMA and rep["error"] is None and "elapsed" not in rep
    # byte-identical round trip
    assert render(rep, "json") == a


def test_timing_flag_adds_elapsed():
    _, text = run(["kappa", "--s", "1", "--m", "0", "--format", "json", "--timing"])
    assert "elapsed" in json.loads(text)


def test_text_format():
    code, text = run(["kappa", "--s", "2", "--m", "1"])
    assert code == 0 and "PASS kappa" in text and text.rstrip().endswith("status: pass")


def test_parser_lists_subcommands():
    help_text = build_parser().format_help()
    for cmd in ("me", "singvec", "macdonald", "intrep", "kappa", "ccoeff", "verify", "probe"):
        assert cmd in help_text


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "freefield.cli", "kappa", "--s", "2", "--m", "0"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "status: pass" in out.stdout
