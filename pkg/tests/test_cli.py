"""Command-line behavior: output schema, exit codes, artifacts, determinism."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from parkgraph.cli import main

DATA = Path(__file__).parent / "data"


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


def test_check_accepts_fig1(runner):
    res = invoke(runner, "check", "--graph", DATA / "fig1.edges", "--seq", "1,1,3,2,1")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["parking_function"] is True
    walks = payload["schedule"]["walks"]
    assert any([1, 4] == w[k : k + 2] for w in walks for k in range(len(w) - 1))


def test_check_rejects_with_violator(runner):
    res = invoke(runner, "check", "--graph", DATA / "fig3-source.edges", "--seq", "1,1")
    assert res.exit_code == 1
    payload = json.loads(res.output)
    assert payload["parking_function"] is False
    assert payload["violator"]["B"] == [1]
    assert payload["violator"]["demand"] == 2


def test_check_empty_sequence(runner):
    res = invoke(runner, "check", "--graph", DATA / "path3.edges", "--seq", "")
    assert res.exit_code == 0
    assert json.loads(res.output)["parking_function"] is True


def test_check_prime_flag(runner):
    res = invoke(
        runner, "check", "--graph", DATA / "path3.edges", "--seq", "1,1,1", "--prime"
    )
    assert res.exit_code == 0
    assert json.loads(res.output)["prime"] is True


def test_check_distribution(runner):
    res = invoke(runner, "check", "--graph", DATA / "path3.edges", "--dist", "1:1,2:1,3:1")
    assert res.exit_code == 0
    assert json.loads(res.output)["parking_distribution"] is True
    res = invoke(runner, "check", "--graph", DATA / "path3.edges", "--dist", "3:2")
    assert res.exit_code == 1


def test_check_usage_errors(runner, tmp_path):
    res = invoke(runner, "check", "--graph", DATA / "fig1.edges", "--seq", "1,9")
    assert res.exit_code == 2
    res = invoke(runner, "check", "--graph", tmp_path / "missing.edges", "--seq", "1")
    assert res.exit_code == 2
    bad = tmp_path / "bad.edges"
    bad.write_text("2\n1 2 3\n")
    res = invoke(runner, "check", "--graph", bad, "--seq", "1")
    assert res.exit_code == 2
    res = invoke(runner, "check", "--graph", DATA / "fig1.edges")
    assert res.exit_code == 2


def test_simulate_fig4_tree_as_edges(runner, tmp_path):
    edges = tmp_path / "fig4.edges"
    edges.write_text("6\n1 2\n2 3\n3 5\n4 5\n5 6\n")
    res = invoke(runner, "simulate", "--graph", edges, "--seq", "1,4,4,2,1,3")
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["parked"] is True
    assert [1, 2] in payload["highlighted"]
    res = invoke(runner, "simulate", "--graph", edges, "--seq", "6,6")
    assert res.exit_code == 1
    res = invoke(runner, "simulate", "--graph", DATA / "fig1.edges", "--seq", "1")
    assert res.exit_code == 2


def test_count_command(runner):
    res = invoke(runner, "count", "--graph", DATA / "path3.edges", "-m", 3)
    assert res.exit_code == 0
    assert json.loads(res.output)["count"] == 16


def test_sum_command_with_artifacts(runner, tmp_path):
    out = tmp_path / "report"
    res = invoke(
        runner,
        "sum", "--family", "source-trees", "-n", 3, "-m", "0..3",
        "--workers", 2, "--out-dir", out,
    )
    assert res.exit_code == 0
    rows = json.loads(res.output)["rows"]
    assert [r["count"] for r in rows] == [9, 27, 69, 135]
    assert (out / "sum.csv").exists()
    assert (out / "sum.png").exists()
    header = (out / "sum.csv").read_text().splitlines()[0]
    assert header == "family,n,m,count,instances,millis"


def test_verify_command(runner, tmp_path):
    res = invoke(runner, "verify", "--identity", "tilde-nm", "--n", "1..3")
    assert res.exit_code == 0
    assert json.loads(res.output)["passed"] is True
    out = tmp_path / "verify-out"
    res = invoke(
        runner, "verify", "--identity", "catalan-distributions", "--n", "1..4",
        "--out-dir", out,
    )
    assert res.exit_code == 0
    assert (out / "verify.csv").exists() and (out / "verify.png").exists()
    res = invoke(runner, "verify", "--identity", "unknown", "--n", "2")
    assert res.exit_code == 2


def test_scan_command(runner, tmp_path):
    out = tmp_path / "scan-out"
    res = invoke(runner, "scan", "--n", "3", "--m", "2", "--out-dir", out)
    assert res.exit_code == 0
    rows = json.loads(res.output)["rows"]
    assert len(rows) == 9
    assert (out / "scan.csv").exists() and (out / "scan.png").exists()


def test_bijection_tau_round_trip(runner, tmp_path):
    res = invoke(
        runner, "bijection", "tau", "--tree", DATA / "fig4-sink.tree",
        "--seq", "1,4,4,2,1,3",
    )
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["cycles"] == "(1 5)(2 3)(4 6)"
    assert payload["sequence"] == [5, 6, 6, 3, 5, 2]
    source_tree = tmp_path / "fig4-source.tree"
    source_tree.write_text(payload["tree"] + "\n")
    back = invoke(
        runner, "bijection", "tau-inv", "--tree", source_tree,
        "--seq", ",".join(str(x) for x in payload["sequence"]),
    )
    assert back.exit_code == 0
    assert json.loads(back.output)["sequence"] == [1, 4, 4, 2, 1, 3]


def test_bijection_tau_inv_not_in_image(runner, tmp_path):
    tree = tmp_path / "fig3-source.tree"
    tree.write_text("4; 3 3 4 0\n")
    res = invoke(runner, "bijection", "tau-inv", "--tree", tree, "--seq", "4,4,4,4")
    assert res.exit_code == 2


def test_bijection_psi_and_inverse(runner, tmp_path):
    res = invoke(
        runner, "bijection", "psi", "--tree", DATA / "fig2-source.tree",
        "--seq", "2,3,4,1,3,5,1", "--mark", 5,
    )
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["mapping"] == "4 1 3 1 5 3 1"
    assert payload["balanced"] == [1, 3, 4, 5]
    assert payload["rewired"] == [3, 1, 5]
    back = invoke(
        runner, "bijection", "psi-inv", "--mapping", DATA / "fig2.map",
        "--seq", "2,3,4,1,3,5,1",
    )
    assert back.exit_code == 0
    inv = json.loads(back.output)
    assert inv["mark"] == 5
    assert inv["tree"] == "3; 3 1 0 1 4 3 1"


def test_bijection_psi_short_sequence(runner, tmp_path):
    tree = tmp_path / "path3.tree"
    tree.write_text("1; 0 1 2\n")
    res = invoke(runner, "bijection", "psi", "--tree", tree, "--seq", "2", "--mark", 1)
    assert res.exit_code == 0
    payload = json.loads(res.output)
    assert payload["extended"] == [2, 1, 3]
    back = invoke(
        runner, "bijection", "psi-inv", "--graph", write_edges(tmp_path, payload["edges"]),
        "--seq", "2",
    )
    assert back.exit_code == 0
    inv = json.loads(back.output)
    assert inv["tree"] == "1; 0 1 2" and inv["mark"] == 1


def write_edges(tmp_path: Path, edges: list[list[int]]) -> Path:
    n = max(max(e) for e in edges)
    path = tmp_path / "psi-out.edges"
    path.write_text(str(n) + "\n" + "\n".join(f"{u} {v}" for u, v in edges) + "\n")
    return path


def test_worker_env_default(runner, monkeypatch):
    monkeypatch.setenv("PARKGRAPH_WORKERS", "2")
    res = invoke(runner, "sum", "--family", "inverse-mappings", "-n", 3, "-m", "3")
    assert res.exit_code == 0
    assert json.loads(res.output)["rows"][0]["count"] == 405


def test_byte_identical_output(runner):
    args = ["check", "--graph", str(DATA / "fig1.edges"), "--seq", "1,1,3,2,1"]
    first = invoke(runner, *args).output
    second = invoke(runner, *args).output
    assert first == second
    res = invoke(runner, "--deterministic", *args)
    assert res.output == first
