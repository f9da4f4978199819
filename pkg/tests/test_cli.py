import json
import math
import re
from fractions import Fraction
from pathlib import Path

import pytest

from xxlartin.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv: str) -> tuple[int, dict]:
    code, out, _ = run(capsys, *argv, "--format", "report")
    return code, json.loads(out)


@pytest.mark.parametrize("name, code, verdict", [
    ("triangle555", 0, "certified"),
    ("triangle666", 0, "certified"),
    ("k4_5", 0, "certified"),
    ("edgeless3", 0, "certified"),
    ("triangle545", 2, "not-applicable"),
])
def test_check_exit_codes(capsys, name, code, verdict):
    got, doc = report(capsys, "check", str(DATA / f"{name}.graph"))
    assert got == code
    assert doc["verdict"] == verdict and doc["exit_status"] == code


def test_check_report_contents(capsys):
    _, doc = report(capsys, "check", str(DATA / "triangle555.graph"))
    assert doc["schema"] == "xxlartin-report/1"
    assert doc["input"]["digest"].startswith("sha256:")
    total = doc["sections"]["link_certificate"]["total"]
    assert (total["pi_fraction"], total["strict"]) == ("2π", True)
    assert "figures" not in doc["sections"]


def test_check_explains_non_xxl(capsys):
    code, out, err = run(capsys, "check", str(DATA / "triangle545.graph"))
    assert code == 2
    assert "label 4 < 5" in err and "not-applicable" in out


def test_edgeless_is_wedge(capsys):
    _, doc = report(capsys, "check", str(DATA / "edgeless3.graph"))
    assert doc["sections"]["link_certificate"]["case_tags"] == ["wedge of circles"]


def test_computed_check_has_angle_tables(capsys):
    code, doc = report(capsys, "check", str(DATA / "triangle567.graph"), "--mode", "computed")
    assert code == 0
    assert sorted(doc["sections"]["angle_tables"]) == ["5", "6", "7"]


@pytest.mark.parametrize("argv", [
    ["check", str(DATA / "bad_loop.graph")],
    ["check", str(DATA / "missing.graph")],
    ["check", str(DATA / "triangle555.graph"), "--alpha", "2/5"],
    ["check", str(DATA / "triangle555.graph"), "--radius", "5"],
    ["check", str(DATA / "triangle555.graph"), "--format", "svg"],
    ["dihedral", "-m", "4"],
    ["word", "-m", "5", "(ab"],
    ["rank1", str(DATA / "triangle555.graph"), "--edge", "a,z"],
    ["export", "tree-ball"],
    ["nonsense"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3
    assert err


@pytest.mark.parametrize("name, code", [
    ("triangle555", 0), ("triangle666", 0), ("k4_mixed", 0), ("path5", 0), ("edge5", 2),
])
def test_rank1_exit_codes(capsys, name, code):
    got, doc = report(capsys, "rank1", str(DATA / f"{name}.graph"))
    assert got == code


def test_rank1_dihedral_caveat(capsys):
    code, out, err = run(capsys, "rank1", str(DATA / "edge5.graph"))
    assert code == 2 and "dihedral" in err


def test_rank1_computed_odd_is_refuted(capsys):
    code, doc = report(capsys, "rank1", str(DATA / "triangle555.graph"), "--mode", "computed")
    assert code == 1 and doc["verdict"] == "refuted"


def test_rank1_witness_override(capsys):
    _, doc = report(capsys, "rank1", str(DATA / "triangle555.graph"), "--edge", "a,c", "--third", "b")
    assert doc["sections"]["rank1_certificate"]["witness"]["edge"] == ["a", "c"]


@pytest.mark.parametrize("m, orbits", [(5, 5), (6, 6)])
def test_dihedral(capsys, m, orbits):
    code, doc = report(capsys, "dihedral", "-m", str(m))
    assert code == 0
    assert doc["sections"]["quotient"]["vertex_orbits"] == orbits
    assert doc["sections"]["angle_table"]["certified"]


@pytest.mark.parametrize("m, word, trivial", [
    (5, "ababaBABAB", True), (5, "a", False), (5, "(ab)^5 a (ab)^-5 a^-1", True), (6, "abAB", False),
])
def test_word(capsys, m, word, trivial):
    code, doc = report(capsys, "word", "-m", str(m), word)
    assert code == 0
    assert doc["sections"]["trivial"] is trivial


def test_export_tree_ball_counts(capsys):
    code, out, _ = run(capsys, "export", "tree-ball", "-m", "5", "--radius", "1", "--format", "dot")
    assert code == 0 and out.count("subgraph cluster_") == 6
    _, out, _ = run(capsys, "export", "tree-ball", "-m", "6", "--radius", "0", "--format", "dot")
    assert out.count("subgraph cluster_") == 1 and out.count(" -- ") == 6


def test_export_piece_graph_dot(capsys):
    code, out, _ = run(capsys, "export", "piece-graph", str(DATA / "triangle555.graph"), "--format", "dot")
    assert code == 0
    edges = [l for l in out.splitlines() if " -- " in l]
    nodes = [l for l in out.splitlines() if re.fullmatch(r'\s+"[^"]+";', l)]
    assert len(nodes) == 6 and len(edges) == 18
    assert 'label="3π/5 (strict)"' in out
    assert sum("penwidth=3" in l for l in edges) == 3


def test_export_piece_graph_not_applicable(capsys):
    code, _, err = run(capsys, "export", "piece-graph", str(DATA / "triangle545.graph"))
    assert code == 2 and "label 4" in err


def test_export_svg_is_deterministic(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"t{i}.svg"
        assert main(["export", "tree-ball", "-m", "5", "--format", "svg", "-o", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].startswith(b"<?xml")


def test_figure_dir(tmp_path, capsys):
    code, doc = report(capsys, "rank1", str(DATA / "triangle555.graph"), "--figure-dir", str(tmp_path))
    assert code == 0
    assert doc["sections"]["figures"] == ["triangle555-rank1-plus.svg", "triangle555-rank1-minus.svg"]
    assert all((tmp_path / f).stat().st_size > 0 for f in doc["sections"]["figures"])
    report(capsys, "check", str(DATA / "k4_5.graph"), "--figure-dir", str(tmp_path))
    report(capsys, "dihedral", "-m", "6", "--figure-dir", str(tmp_path))
    assert {p.name for p in tmp_path.iterdir()} >= {"k4_5-check.svg", "dihedral-m6-tree.svg"}


def _angles(node):
    if isinstance(node, dict):
        if "pi_fraction" in node and "decimal" in node:
            yield node
        for v in node.values():
            yield from _angles(v)
    elif isinstance(node, list):
        for v in node:
            yield from _angles(v)


def pi_coef(text: str) -> Fraction:
    """Inverse of the fraction-of-pi rendering: "0", "π", "-2π/5", ..."""
    if text == "0":
        return Fraction(0)
    num, _, den = text.partition("/")
    k = num.replace("π", "")
    k = {"": 1, "-": -1}.get(k, None) or int(k)
    return Fraction(k, int(den or 1))


def test_decimals_round_trip(capsys):
    _, doc = report(capsys, "rank1", str(DATA / "triangle666.graph"))
    _, doc2 = report(capsys, "dihedral", "-m", "5")
    found = list(_angles(doc)) + list(_angles(doc2))
    assert len(found) > 20
    for a in found:
        assert abs(a["decimal"] - float(pi_coef(a["pi_fraction"])) * math.pi) < 1e-12
    intervals = [a for a in doc2["sections"]["angle_table"]["angles"].values()]
    for a in intervals:
        assert float(a["lo"]) - 1e-12 <= a["decimal"] <= float(a["hi"]) + 1e-12


def test_human_output(capsys):
    code, out, _ = run(capsys, "check", str(DATA / "triangle555.graph"))
    assert code == 0
    assert out.startswith("check: certified")
    assert "total: 2π (strict)" in out


def test_output_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert main(["check", str(DATA / "k4_5.graph"), "--format", "report", "-o", str(path)]) == 0
    assert json.loads(path.read_text())["verdict"] == "certified"
