import json
import subprocess
import sys

import pytest

from dynmatch import cli
from dynmatch.reproduce import fixture_text

ONE_PAIR = """\
periods: 1
agent a1 side A arrives 1 delta 1/2
agent b1 side B arrives 1 delta 1/2
prefs a1: b1=2
prefs b1: a1=3
"""


@pytest.fixture
def econ_file(tmp_path):
    path = tmp_path / "market.econ"
    path.write_text(ONE_PAIR)
    return str(path)


@pytest.fixture
def example1_file(tmp_path):
    path = tmp_path / "example1.econ"
    path.write_text(fixture_text("example1"))
    return str(path)


def run_cli(*argv):
    return cli.main(list(argv))


def test_solve_succeeds_on_a_tiny_market(econ_file, capsys):
    assert run_cli("solve", econ_file, "--concept", "stable") == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "t=1: a1-b1" in out


def test_solve_json_report_is_byte_identical(econ_file, capsys):
    assert run_cli("solve", econ_file, "--concept", "re", "--json") == 0
    first = capsys.readouterr().out
    assert run_cli("solve", econ_file, "--concept", "re", "--json") == 0
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["schema"] == cli.SCHEMA
    assert report["concept"] == "re"
    assert report["solutions"] == ["t=1: a1-b1"]
    assert len(report["economy_digest"]) == 64
    assert report["flags"]["threads"] == 1


def test_timing_goes_to_stderr_not_stdout(econ_file, capsys):
    run_cli("solve", econ_file, "--concept", "stable", "--json")
    captured = capsys.readouterr()
    assert "solved in" in captured.err
    assert "solved in" not in captured.out


def test_missing_file_is_an_input_error(capsys):
    assert run_cli("solve", "/no/such/file.econ", "--concept", "stable") == 1


def test_malformed_economy_is_an_input_error(tmp_path, capsys):
    path = tmp_path / "bad.econ"
    path.write_text("periods: 1\nwibble\n")
    assert run_cli("solve", str(path), "--concept", "stable") == 1


def test_enumeration_cap_exit_code(example1_file, capsys):
    code = run_cli(
        "solve", example1_file, "--concept", "stable", "--max-matchings", "5"
    )
    assert code == cli.EXIT_SIZE


def test_empty_solution_set_exit_code(econ_file, capsys, monkeypatch):
    class EmptySolver:
        def __init__(self, *a, **kw):
            pass

        def solve(self, concept, economy):
            from dynmatch.concepts import SolveReport

            return SolveReport(concept, "vacuous", 10**7, (), (), (), ())

    monkeypatch.setattr(cli, "Solver", EmptySolver)
    assert run_cli("solve", econ_file, "--concept", "re") == cli.EXIT_EMPTY


def test_check_solution_pass_and_fail(econ_file, capsys):
    code = run_cli(
        "check", econ_file, "--concept", "stable",
        "--matching", "t=1: a1-b1",
    )
    assert code == cli.EXIT_OK
    code = run_cli(
        "check", econ_file, "--concept", "stable", "--matching", "t=1: -"
    )
    assert code == cli.EXIT_CHECK_FAILED
    assert "block" in capsys.readouterr().out


def test_check_requires_matching_argument(econ_file, capsys):
    assert run_cli("check", econ_file, "--concept", "stable") == cli.EXIT_INPUT


def test_check_matching_from_file(econ_file, tmp_path, capsys):
    spec = tmp_path / "m.txt"
    spec.write_text("t=1: a1-b1\n")
    code = run_cli(
        "check", econ_file, "--concept", "stable", "--matching", f"@{spec}"
    )
    assert code == cli.EXIT_OK


def test_check_consistency_on_the_reference_market(example1_file, capsys):
    code = run_cli(
        "check", example1_file, "--concept", "re", "--check", "cc",
        "--matching", "t=1: a1-b1 a2-b2 | t=2: a1-b1 a2-b2 a3-b3 a4-b4",
    )
    assert code == cli.EXIT_CHECK_FAILED
    out = capsys.readouterr().out
    assert "not conjectured by a3 at t=1" in out


def test_check_non_candidate_is_an_input_error(example1_file, capsys):
    code = run_cli(
        "check", example1_file, "--concept", "re", "--check", "cc",
        "--matching", "t=1: - | t=2: -",
    )
    assert code == cli.EXIT_INPUT


def test_check_generalized_consistency(example1_file, econ_file, capsys):
    code = run_cli("check", example1_file, "--concept", "re", "--check", "gc")
    assert code == cli.EXIT_CHECK_FAILED
    assert run_cli("check", econ_file, "--concept", "stable", "--check", "gc") == 0


def test_reproduce_subcommand(capsys):
    assert run_cli("reproduce", "example2") == cli.EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 3 and "FAIL" not in out


def test_installed_entry_point_runs(econ_file):
    proc = subprocess.run(
        [sys.executable, "-m", "dynmatch.cli", "solve", econ_file,
         "--concept", "stable", "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["solutions"] == ["t=1: a1-b1"]
