"""End-to-end command-line tests: every subcommand plus the exit-code contract."""

import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from multilattice.cli import load_arrangement, main
from multilattice.errors import ParseError


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def scan_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("scan") / "b2.json"
    result = CliRunner().invoke(
        main, ["scan", "--coxeter", "B2", "--box", "3,3,3,3", "-o", str(path)])
    assert result.exit_code == 0, result.output
    return str(path)


def test_exponents_command(runner):
    result = runner.invoke(main, ["exponents", "--coxeter", "B2", "1,1,1,1"])
    assert result.exit_code == 0
    assert "exponents: (1, 3)" in result.output
    assert "delta: 2" in result.output


def test_exponents_gap_zero_notes_non_uniqueness(runner):
    result = runner.invoke(main, ["exponents", "--coxeter", "B2", "1,1,1,3"])
    assert result.exit_code == 0
    assert "delta: 0" in result.output
    assert "one of several" in result.output


def test_exponents_quadratic_field(runner):
    result = runner.invoke(main, ["exponents", "--coxeter", "G2", "1,1,1,1,1,1"])
    assert result.exit_code == 0
    assert "exponents: (1, 5)" in result.output


def test_basis_command(runner):
    result = runner.invoke(main, ["basis", "--coxeter", "B2", "2,1,2,1"])
    assert result.exit_code == 0
    assert "saito: accepted" in result.output


def test_scan_to_stdout_and_determinism(runner):
    args = ["scan", "--coxeter", "B2", "--box", "2,2,2,2"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args + ["--jobs", "2"])
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output
    assert json.loads(first.output)["schema"] == 1


def test_components_command(runner, scan_file, tmp_path):
    dot, csv = tmp_path / "g.dot", tmp_path / "t.csv"
    result = runner.invoke(main, ["components", "--scan", scan_file,
                                  "--dot", str(dot), "--csv", str(csv)])
    assert result.exit_code == 0
    assert "center 1,1,1,1 delta 2" in result.output
    assert dot.read_text().startswith("graph support {")
    assert csv.read_text().startswith("mu,d1,d2,delta")


@pytest.mark.parametrize("what", ["covering", "ball", "singletons", "saito"])
def test_verify_passes(runner, scan_file, what):
    result = runner.invoke(main, ["verify", "--scan", scan_file, what])
    assert result.exit_code == 0, result.output
    assert "PASS" in result.output


def test_verify_criteria(runner, scan_file):
    result = runner.invoke(main, ["verify", "--scan", scan_file, "criteria"])
    assert result.exit_code == 0, result.output
    assert result.output.count("PASS") >= 3


def test_verify_detects_corrupted_scan(runner, scan_file, tmp_path):
    obj = json.loads(open(scan_file).read())
    for row in obj["points"]:
        if row["mu"] == [1, 1, 1, 1]:
            row["d1"], row["d2"], row["delta"] = 0, 4, 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj) + "\n")
    result = runner.invoke(main, ["verify", "--scan", str(bad), "covering"])
    assert result.exit_code == 1
    assert "FAIL" in result.output and "witness" in result.output


def test_basis_between_command(runner):
    result = runner.invoke(main, ["basis-between", "--coxeter", "B2",
                                  "--mu", "1,1,1,1", "--nu", "2,2,1,2",
                                  "--kappa", "1,2,1,1"])
    assert result.exit_code == 0
    assert "saito: accepted" in result.output


def test_basis_for_command(runner, scan_file):
    result = runner.invoke(main, ["basis-for", "--scan", scan_file,
                                  "--kappa", "1,2,1,2"])
    assert result.exit_code == 0, result.output
    assert "saito: accepted" in result.output


def test_coxeter_report(runner):
    result = runner.invoke(main, ["coxeter", "B2", "--check-invariance", "2,2,2,2",
                                  "--near-constant", "1"])
    assert result.exit_code == 0, result.output
    assert "group order: 4" in result.output
    assert "-> match" in result.output


def test_coxeter_near_constant_offsets(runner):
    result = runner.invoke(main, ["coxeter", "G2", "--near-constant", "0",
                                  "--offsets", "1,0,0,0,0,0"])
    assert result.exit_code == 0, result.output
    assert "-> match" in result.output


def test_arrangement_file_loading(runner, tmp_path):
    path = tmp_path / "arr.json"
    path.write_text(json.dumps({
        "field": {"type": "rational"},
        "forms": [["1", "0"], ["0", "1"], ["1", "1"]],
        "names": ["x", "y", "x+y"],
    }))
    A = load_arrangement(str(path))
    assert len(A) == 3 and A.name_of(2) == "x+y"
    result = runner.invoke(main, ["exponents", "-a", str(path), "1,1,1"])
    assert result.exit_code == 0
    assert "exponents: (1, 2)" in result.output


def test_load_arrangement_errors(tmp_path):
    with pytest.raises(ParseError):
        load_arrangement(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(ParseError):
        load_arrangement(str(bad))


def test_cache_subcommands(runner, tmp_path):
    result = runner.invoke(main, ["exponents", "--coxeter", "B2",
                                  "--cache-dir", str(tmp_path), "1,1,1,1"])
    assert result.exit_code == 0
    result = runner.invoke(main, ["cache", "inspect", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 0
    assert "entries: 1" in result.output
    result = runner.invoke(main, ["cache", "clear", "--cache-dir", str(tmp_path)])
    assert result.exit_code == 0
    assert "cleared 1 entries" in result.output


def test_cache_inspect_without_directory(runner, monkeypatch):
    monkeypatch.delenv("ML_CACHE_DIR", raising=False)
    result = runner.invoke(main, ["cache", "inspect"])
    assert result.exit_code == 0
    assert "no cache directory configured" in result.output


# -- exit-code contract through the installed entry point ---------------------


def _run_ml(*args):
    return subprocess.run([sys.executable, "-m", "multilattice.cli", *args],
                          capture_output=True, text=True)


def test_exit_code_zero_on_success():
    proc = _run_ml("exponents", "--coxeter", "B2", "1,1,1,1")
    assert proc.returncode == 0


def test_exit_code_two_on_usage_error():
    # both sources given
    proc = _run_ml("exponents", "--coxeter", "B2", "-a", "x.json", "1,1,1,1")
    assert proc.returncode == 2
    # malformed multiplicity
    proc = _run_ml("exponents", "--coxeter", "B2", "1,1")
    assert proc.returncode == 2
    assert "error:" in proc.stderr


def test_exit_code_one_on_verification_failure(tmp_path):
    proc = _run_ml("scan", "--coxeter", "B2", "--box", "2,2,2,2")
    obj = json.loads(proc.stdout)
    for row in obj["points"]:
        if row["mu"] == [1, 1, 1, 1]:
            row["d1"], row["d2"], row["delta"] = 0, 4, 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj) + "\n")
    proc = _run_ml("verify", "--scan", str(bad), "covering")
    assert proc.returncode == 1
