import json
import subprocess
import sys

import pytest

from tensorgraphs.cli import main
from tensorgraphs.fixtures import fixture_text
from tensorgraphs.suite import bilinear_vertices


@pytest.fixture
def signature_file(tmp_path):
    vertices = [
        {"id": v.id, "kind": v.kind, "in": v.in_arity, "out": v.out_arity}
        for v in bilinear_vertices()
    ]
    path = tmp_path / "signature.json"
    path.write_text(json.dumps({"vertices": vertices}))
    return str(path)


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "graph.json"
    path.write_text(fixture_text("bilinear_123"))
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_itt_reports_rank_six(capsys):
    code, out, _ = run_cli(capsys, ["verify-itt", "--k", "3", "--dim", "3"])
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["params"]["rank"] == 6


def test_graphs_enumerate_bilinear_signature(capsys, signature_file):
    code, out, _ = run_cli(capsys, ["graphs-enumerate", "--signature", signature_file])
    assert code == 0
    graphs = json.loads(out)
    assert len(graphs) == 6
    assert all(len(g["edges"]) == 3 for g in graphs)


def test_graphs_eval_unit_inputs_dimension_one(capsys, graph_file, tmp_path):
    inputs = [
        {"shape": [1], "entries": ["1"]},
        {"shape": [1], "entries": ["1"]},
        {"shape": [1, 1, 1], "entries": ["1"]},
    ]
    inputs_file = tmp_path / "inputs.json"
    inputs_file.write_text(json.dumps(inputs))
    code, out, _ = run_cli(
        capsys, ["graphs-eval", "--graph", graph_file, "--inputs", str(inputs_file), "--dim", "1"]
    )
    assert code == 0
    assert json.loads(out) == {"shape": [1], "entries": ["1"]}


def test_graphs_canon_reports_sign_and_zero(capsys, graph_file):
    code, out, _ = run_cli(capsys, ["graphs-canon", "--graph", graph_file])
    assert code == 0
    payload = json.loads(out)
    assert payload["sign"] == "1"
    assert payload["zero"] is False
    assert payload["graph"]["vertices"][0]["id"] == "X"


def test_export_dot_outputs_graphviz(capsys, graph_file):
    code, out, _ = run_cli(capsys, ["export-dot", "--graph", graph_file])
    assert code == 0
    assert out.startswith("digraph")
    assert out.count("->") == 3


def test_identical_invocations_are_byte_identical(capsys, signature_file):
    _, first, _ = run_cli(capsys, ["graphs-enumerate", "--signature", signature_file])
    _, second, _ = run_cli(capsys, ["graphs-enumerate", "--signature", signature_file])
    assert first == second


def test_verify_diagram_cli(capsys, signature_file):
    code, out, _ = run_cli(capsys, ["verify-diagram", "--signature", signature_file, "--dim", "2"])
    assert code == 0
    assert json.loads(out)["observed"] == 6


def test_verify_quotient_cli(capsys, tmp_path):
    path = tmp_path / "quotient.json"
    path.write_text(json.dumps({"white": [], "black": [0, 0, 2], "nabla": []}))
    code, out, _ = run_cli(capsys, ["verify-quotient", "--signature", str(path), "--dim", "3"])
    assert code == 0
    report = json.loads(out)
    assert report["expected"] == 3 and report["observed"] == 3


def test_verify_quotient_cli_allows_small_white(capsys, tmp_path):
    path = tmp_path / "quotient.json"
    path.write_text(json.dumps({"white": [0, 0], "black": [2], "nabla": []}))
    code, _, err = run_cli(capsys, ["verify-quotient", "--signature", str(path), "--dim", "3"])
    assert code == 2 and "white arities" in err
    code, out, _ = run_cli(
        capsys,
        ["verify-quotient", "--signature", str(path), "--dim", "3", "--allow-small-white"],
    )
    assert code == 0
    assert json.loads(out)["params"]["basis_size"] == 1


def test_verify_stable_range_cli(capsys, tmp_path):
    path = tmp_path / "quotient.json"
    path.write_text(json.dumps({"white": [2], "black": [0, 0], "nabla": []}))
    code, out, _ = run_cli(capsys, ["verify-stable-range", "--signature", str(path)])
    assert code == 0
    report = json.loads(out)
    assert report["params"]["rank_low"] == report["params"]["rank_high"]


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["verify-itt", "--k", "3"])  # missing --dim
    assert excinfo.value.code == 2


def test_data_error_exits_two(capsys, tmp_path):
    missing = str(tmp_path / "missing.json")
    code, _, err = run_cli(capsys, ["graphs-canon", "--graph", missing])
    assert code == 2
    assert "error:" in err

    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [], "edges": [{"from": ["Q", 0], "to": ["Q", 0]}]}')
    code, _, err = run_cli(capsys, ["graphs-canon", "--graph", str(bad)])
    assert code == 2
    assert "Q" in err


def test_out_flag_writes_file(capsys, graph_file, tmp_path):
    target = tmp_path / "graph.dot"
    code, out, _ = run_cli(capsys, ["export-dot", "--graph", graph_file, "--out", str(target)])
    assert code == 0 and out == ""
    assert target.read_text().startswith("digraph")


def test_suite_exit_status_tracks_failures(capsys, monkeypatch):
    from tensorgraphs.suite import CriterionResult

    fake = [CriterionResult(1, "a", True, {}), CriterionResult(2, "b", True, {})]
    monkeypatch.setattr("tensorgraphs.cli.run_suite", lambda seed: fake)
    code, out, _ = run_cli(capsys, ["suite"])
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert lines[-1] == {"suite": "acceptance", "passed": True}

    fake[1] = CriterionResult(2, "b", False, {"failures": 1})
    code, out, _ = run_cli(capsys, ["suite"])
    assert code == 1
    assert json.loads(out.strip().splitlines()[-1])["passed"] is False


def test_console_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "tensorgraphs.cli", "verify-itt", "--k", "2", "--dim", "2"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["passed"] is True
