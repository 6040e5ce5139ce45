import io
import json
import textwrap
from pathlib import Path

import pytest

from qddc_shield_synth.constants import EXIT_CAPACITY, EXIT_OK, EXIT_SPEC_ERROR, EXIT_UNREALIZABLE
from qddc_shield_synth.main import main, parse_args

SPECS = Path(__file__).resolve().parent.parent / "specs"

ECHO_SPEC = textwrap.dedent("""\
    inputs: r
    sse_outputs: p
    shield_outputs: p'
    req: [[r => p]]
    shield_type: V0
    dm: off
    order: !p'
""")


@pytest.fixture()
def echo_path(tmp_path):
    p = tmp_path / "echo.qs"
    p.write_text(ECHO_SPEC)
    return p


def cli(*args) -> int:
    return main([str(a) for a in args])


def test_parse_args_builds_run_config(echo_path):
    config = parse_args(["analyze", str(echo_path), "--no-dm", "--horizon", "3", "--float"])
    assert config.command == "analyze"
    assert config.dm is False and config.horizon == 3
    assert not config.exact
    assert parse_args(["synth", str(echo_path), "--dm"]).dm is True
    assert parse_args(["synth", str(echo_path)]).dm is None


def test_compile_writes_dfa_and_dot(tmp_path, capsys):
    out = tmp_path / "out"
    assert cli("compile", SPECS / "until_monitor.qs", "--formula", "until3", "--out", out) == EXIT_OK
    assert (out / "until3.dfa").read_text().startswith("vars: r p q\n")
    assert (out / "until3.dot").read_text().startswith('digraph "until3" {')
    assert "=== COMPILING until3 ===" in capsys.readouterr().out


def test_compile_shield_parts(echo_path, tmp_path):
    for name in ("req", "hdc", "hshield"):
        assert cli("compile", echo_path, "--formula", name, "--out", tmp_path) == EXIT_OK
        assert (tmp_path / f"{name}.dfa").exists()


def test_synth_then_analyze_saved_controller(echo_path, tmp_path, capsys):
    assert cli("synth", echo_path, "--out", tmp_path) == EXIT_OK
    stats = json.loads((tmp_path / "V0_NoDM.stats.json").read_text())
    assert stats["label"] == "V0_NoDM"
    assert (tmp_path / "V0_NoDM.dot").exists()
    capsys.readouterr()

    ctrl = tmp_path / "V0_NoDM.ctrl"
    assert cli("analyze", echo_path, "--controller", ctrl, "--out", tmp_path, "--mrmc") == EXIT_OK
    out = capsys.readouterr().out
    assert "=== ANALYZING V0_NoDM ===" in out
    assert "=== MRMC EXPORT ===" in out
    report = json.loads((tmp_path / "V0_NoDM.report.json").read_text())
    assert report["expected_value"] == 0.5
    assert report["latency"] == "∞"
    assert report["states"] == stats["controller_states"]
    assert (tmp_path / "V0_NoDM.tra").exists() and (tmp_path / "V0_NoDM.lab").exists()


def test_compile_imports_and_minimizes_a_dfa(tmp_path, capsys):
    imported = SPECS / "ends_with_a.dfa"
    assert cli("compile", SPECS / "until_monitor.qs", "--import", imported, "--out", tmp_path) == EXIT_OK
    out = capsys.readouterr().out
    assert "=== IMPORTING" in out
    assert "States: 4 (2 after minimization)" in out
    assert (tmp_path / "ends_with_a.dfa").read_text().startswith("vars: a\nstates: 2\n")


def test_compile_checks_an_imported_dfa_against_a_formula(tmp_path, capsys):
    spec = tmp_path / "last_a.qs"
    spec.write_text("vars: a\nformula last_a = true^<a>\nformula only_a = [[a]]\n")
    imported = SPECS / "ends_with_a.dfa"
    assert cli("compile", spec, "--import", imported, "--formula", "last_a", "--out", tmp_path) == EXIT_OK
    assert "Equivalent to last_a: yes" in capsys.readouterr().out
    assert cli("compile", spec, "--import", imported, "--formula", "only_a", "--out", tmp_path) == EXIT_OK
    assert "Equivalent to only_a: no" in capsys.readouterr().out
    assert parse_args(["compile", str(spec), "--import", "x.dfa"]).dfa_import == Path("x.dfa")


def test_analyze_keeps_one_table_row_per_shield(echo_path, tmp_path, capsys):
    assert cli("analyze", echo_path, "--out", tmp_path) == EXIT_OK
    assert "=== REPORT TABLE ===" in capsys.readouterr().out
    assert cli("analyze", echo_path, "--out", tmp_path) == EXIT_OK
    lines = (tmp_path / "reports.csv").read_text().splitlines()
    assert lines[0].startswith("label,")
    assert [line.split(",")[0] for line in lines[1:]] == ["V0_NoDM"]


def test_synth_until_protocol(tmp_path):
    assert cli("synth", SPECS / "until5_v2_1.qs", "--out", tmp_path) == EXIT_OK
    stats = json.loads((tmp_path / "V2(1)_NoDM.stats.json").read_text())
    assert stats["mphos_states"] is None


def test_unrealizable_exit_code(tmp_path, capsys):
    assert cli("synth", SPECS / "until5_v1_1.qs", "--out", tmp_path) == EXIT_UNREALIZABLE
    assert "=== UNREALIZABLE ===" in capsys.readouterr().out


def test_export_mrmc(echo_path, tmp_path):
    assert cli("export-mrmc", echo_path, "--out", tmp_path) == EXIT_OK
    assert (tmp_path / "V0_NoDM.tra").read_text().startswith("STATES ")


def test_simulate(echo_path, tmp_path, capsys):
    assert cli("simulate", echo_path, "--steps", "2000", "--seed", "7", "--out", tmp_path) == EXIT_OK
    out = capsys.readouterr().out
    assert "non_deviation_frequency" in out
    assert "letters" not in out


def test_run_replays_trace(echo_path, tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    trace.write_text("r,p\n0,0\n0,1\n1,1\n1,0\n")
    assert cli("run", echo_path, "--trace", trace) == EXIT_OK
    assert "Steps: 4, deviations: 2, SSEOK steps: 3" in capsys.readouterr().out


def test_run_serves_stdin(echo_path, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("0 1\n1 0\n"))
    assert cli("run", echo_path) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["0 1 1", "1 1 0"]


def test_run_monitors_a_formula_over_a_trace(capsys):
    code = cli("run", SPECS / "until_monitor.qs", "--formula", "until3", "--trace", SPECS / "request_grant.csv")
    assert code == EXIT_OK
    assert "1,1,0,0,0,1,1,1,1,1,1,1,1,1,1,1,0,0,0,0,0" in capsys.readouterr().out


@pytest.mark.parametrize(
    "args",
    [
        ["frobnicate", "{spec}"],
        ["synth"],
        ["synth", "{spec}", "--horizon", "-1"],
        ["synth", "{tmp}/absent.qs"],
        ["compile", "{spec}", "--formula", "nothing"],
        ["run", "{spec}", "--formula", "req"],
    ],
)
def test_spec_errors_exit_3(args, echo_path, tmp_path):
    argv = [a.format(spec=echo_path, tmp=tmp_path) for a in args]
    assert main(argv) == EXIT_SPEC_ERROR


def test_bad_formula_exits_3(tmp_path):
    p = tmp_path / "bad.qs"
    p.write_text(ECHO_SPEC.replace("[[r => p]]", "[[r => ]]"))
    assert cli("synth", p, "--out", tmp_path) == EXIT_SPEC_ERROR


def test_state_cap_exits_4(tmp_path):
    code = cli("compile", SPECS / "until_monitor.qs", "--formula", "until3", "--max-states", "5", "--out", tmp_path)
    assert code == EXIT_CAPACITY


def test_help_exits_0(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "qddc-shield" in capsys.readouterr().out
