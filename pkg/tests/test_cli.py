import json
import os
import subprocess
import sys

import pytest

from contact_surgery.cli import main, parse_script
from contact_surgery.diagram import DiagramParseError, parse_diagram
from contact_surgery.standard import XI_1

FIG1 = 'components:\n  - {id: "u", tb: -2, rot: 1, sign: +1}\nlinking: []\n'
EMPTY_DOC = "components: []\nlinking: []\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "fig1-right.diagram").write_text(FIG1)
    (tmp_path / "empty.diagram").write_text(EMPTY_DOC)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err



def test_invariants_fig1(files, capsys):
    code, out, _ = run(capsys, "invariants", files / "fig1-right.diagram")
    assert code == 0
    rows = {k.strip(): v.strip() for k, v in (l.split("  ", 1) for l in out.splitlines())}
    assert rows["H1"] == "0" and rows["d3"] == "1" and rows["euler"] == "0"


def test_invariants_empty_json(files, capsys):
    code, out, _ = run(capsys, "invariants", files / "empty.diagram", "--json")
    data = json.loads(out)
    assert code == 0 and data["H1"] == "0" and data["d3"] == "0" and data["family"] == "TIGHT_S3"


def test_d3_printed_as_fraction(tmp_path, capsys):
    (tmp_path / "l.diagram").write_text('components:\n  - {id: "U", tb: -3, rot: 0, sign: -1}\nlinking: []\n')
    code, out, _ = run(capsys, "invariants", tmp_path / "l.diagram", "--json")
    assert json.loads(out)["d3"] == "1/4"


def test_ladder_writes_bundle(tmp_path, capsys):
    code, out, _ = run(capsys, "ladder", "--from", 0, "--to", 3, "--out", tmp_path / "lad")
    assert code == 0 and out.splitlines()[0].split() == ["length", "3"]
    index = json.loads((tmp_path / "lad" / "index.json").read_text())
    assert index["path"]["length"] == 3
    code, out, _ = run(capsys, "ot-distance", tmp_path / "lad")
    assert code == 0 and "length  5" in out
    code, out, _ = run(capsys, "detour", tmp_path / "lad", "--p", 3)
    assert code == 0 and "length  5" in out


def test_detour_forbidden_endpoint(tmp_path, files, capsys):
    run(capsys, "ladder", "--from", 0, "--to", 1, "--out", tmp_path / "lad")
    code, _, err = run(capsys, "detour", tmp_path / "lad", "--forbid", files / "fig1-right.diagram")
    assert code == 3 and "precondition error" in err


def test_link_theorem_verb(files, capsys):
    code, out, _ = run(
        capsys, "link-theorem", files / "empty.diagram", "--component", "N,-1,0,-1"
    )
    assert code == 0 and "length  2" in out and "OT_S3:1:0" in out


def test_move_script_and_log(files, tmp_path, capsys):
    script = tmp_path / "s.yaml"
    script.write_text(
        "- {kind: add_meridian, params: {i: u, tb_m: -1, rot_m: 0, sign_m: 1}}\n"
        "- {kind: avdek_merge, params: {i: u, m: um}}\n"
    )
    out_file, log = tmp_path / "out.diagram", tmp_path / "log.yaml"
    code, _, _ = run(
        capsys, "move", files / "fig1-right.diagram", "--script", script, "--out", out_file, "--log", log
    )
    assert code == 0
    assert parse_diagram(out_file.read_text()) == XI_1
    assert "avdek_merge" in log.read_text()


def test_move_single_kind(files, capsys):
    code, out, _ = run(capsys, "move", files / "fig1-right.diagram", "--kind", "stabilize_component", "--param", "id=u")
    assert code == 0 and "tb: -3" in out


def test_move_precondition_error(files, capsys):
    code, _, err = run(capsys, "move", files / "fig1-right.diagram", "--kind", "cancel_pair", "--param", "i=u", "--param", "j=u")
    assert code == 3 and "push-off" in err


def test_parse_error_has_position(tmp_path, capsys):
    bad = tmp_path / "bad.diagram"
    bad.write_text("components:\n  - {id: a, tb: -1\n")
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and f"{bad}:3:1:" in err


def test_validate_reports_violation(tmp_path, capsys):
    d = tmp_path / "p.diagram"
    d.write_text('components:\n  - {id: "u", tb: -1, rot: 1, sign: +1}\nlinking: []\n')
    code, out, _ = run(capsys, "validate", d)
    assert code == 2 and "parity" in out
    code, out, _ = run(capsys, "validate", tmp_path / "missing.diagram")
    assert code == 2


def test_script_parser_errors():
    with pytest.raises(DiagramParseError, match="list"):
        parse_script("kind: x")
    with pytest.raises(DiagramParseError, match="step 0"):
        parse_script("- {params: {}}")


def test_subgraph_dot_and_truncation(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "subgraph", "--depth", 1, "--t-max", 2, "--dot", dot, "--out", tmp_path / "g")
    assert code == 0 and dot.read_text().startswith("digraph")
    assert (tmp_path / "g" / "index.json").exists()
    code, _, err = run(capsys, "subgraph", "--depth", 2, "--t-max", 3, "--max-vertices", 3)
    assert code == 5 and "truncated" in err


def test_reports_are_byte_identical(files, capsys):
    a = run(capsys, "subgraph", "--depth", 2, "--t-max", 2, "--json")[1]
    b = run(capsys, "subgraph", "--depth", 2, "--t-max", 2, "--json")[1]
    assert a == b
    a = run(capsys, "invariants", files / "fig1-right.diagram")[1]
    assert a == run(capsys, "invariants", files / "fig1-right.diagram")[1]


def test_written_diagrams_reparse(files, tmp_path, capsys):
    out_file = tmp_path / "o.diagram"
    run(capsys, "move", files / "empty.diagram", "--kind", "detour_insert", "--param", "p=4", "--out", out_file, "--log", tmp_path / "l")
    text = out_file.read_text()
    assert parse_diagram(text).to_text() == text


def test_module_entry_point(files):
    res = subprocess.run(
        [sys.executable, "-m", "contact_surgery", "invariants", str(files / "empty.diagram")],
        capture_output=True, text=True, env={**os.environ},
    )
    assert res.returncode == 0 and "d3" in res.stdout


def test_verify_all_exit_status(monkeypatch, capsys):
    from contact_surgery import cli
    from contact_surgery.suites import SuiteResult

    good = [SuiteResult(k, f"s{k}") for k in range(1, 4)]
    monkeypatch.setattr(cli, "run_all", lambda cfg: good)
    code, out, _ = run(capsys, "verify-all")
    assert code == 0 and out.count("[PASS]") == 3
    bad = good + [SuiteResult(4, "s4", passed=False, failures=["boom"])]
    monkeypatch.setattr(cli, "run_all", lambda cfg: bad)
    code, out, _ = run(capsys, "verify-all")
    assert code == 1 and "[FAIL] criterion  4" in out and "boom" in out


def test_budget_env(monkeypatch):
    from contact_surgery.suites import SuiteConfig

    monkeypatch.setenv("CS_DEPTH", "2")
    monkeypatch.setenv("CS_INSTANCES", "10")
    cfg = SuiteConfig.from_env()
    assert cfg.depth == 2 and cfg.move_instances == 1000 and cfg.t_max == 6
