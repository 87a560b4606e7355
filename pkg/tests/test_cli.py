import csv
import json
import subprocess
import sys

import pytest

from mwisdisperse import Graph, WeightFn, dump_graph, trivial_esd
from mwisdisperse.cli import main
from mwisdisperse.esd import Esd, dump_esd
from mwisdisperse.generators import path_graph

from instances import TWO_P3


@pytest.fixture
def run(capsys):
    def go(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err
    return go


def write_graph(tmp_path, name, G, w=None):
    p = tmp_path / name
    p.write_text(dump_graph(G, w))
    return str(p)


# -- gen --------------------------------------------------------------------------------------------

def test_gen_is_deterministic(run, tmp_path):
    a, b = tmp_path / "a.gr", tmp_path / "b.gr"
    assert run("gen", "path:10", "--seed", "1", "--out", str(a))[0] == 0
    assert run("gen", "path:10", "--seed", "1", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run("gen", "repaired:12:0.4:pt:5", "--seed", "3")
    assert code == 0 and out.splitlines()[1].startswith("p 12 ")


def test_gen_errors(run):
    assert run("gen", "nosuch:3")[0] == 1
    assert run("gen", "path:5", "--weights", "5,1")[0] == 1


# -- solve ----------------------------------------------------------------------------------------

def test_solve_exact_with_oracle(run, tmp_path):
    run("gen", "repaired:12:0.4:pt:5", "--seed", "4", "--out", str(tmp_path / "p5.gr"))
    code, out, _ = run("solve", "--graph", str(tmp_path / "p5.gr"), "--class", "pt:5", "--mode", "exact",
                       "--oracle")
    rep = json.loads(out)
    assert code == 0
    assert rep["verification"]["oracle"]["oracle_match"] is True
    assert rep["result"]["weight"] == rep["verification"]["oracle"]["opt"]
    assert rep["command"][:2] == ["solve", "--graph"]


def test_solve_approx(run, tmp_path):
    g = write_graph(tmp_path, "c.gr", path_graph(6), WeightFn((1, 5, 1, 5, 1, 5)))
    code, out, _ = run("solve", "--graph", g, "--class", "hole:5", "--mode", "approx", "--eps", "1/4", "--oracle")
    assert code == 0 and json.loads(out)["result"]["weight"] >= 12


def test_solve_approx_needs_eps(run, tmp_path):
    g = write_graph(tmp_path, "g.gr", path_graph(3))
    assert run("solve", "--graph", g, "--class", "pt:5", "--mode", "approx")[0] == 1
    assert run("solve", "--graph", g, "--class", "pt:5", "--mode", "approx", "--eps", "2/3")[0] == 1


def test_solve_empty_graph(run, tmp_path):
    g = write_graph(tmp_path, "e.gr", Graph.empty(0))
    code, out, _ = run("solve", "--graph", g, "--class", "pt:5", "--mode", "exact")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["weight"] == 0 and rep["result"]["set"] == []


def test_solve_class_violation_exits_2(run, tmp_path):
    g = write_graph(tmp_path, "p.gr", path_graph(8))
    assert run("solve", "--graph", g, "--class", "pt:4", "--mode", "exact", "--check-class")[0] == 2
    assert run("solve", "--graph", g, "--class", "pt:4", "--mode", "approx", "--eps", "1/2")[0] == 2


def test_solve_hfree_pattern_file(run, tmp_path):
    h = write_graph(tmp_path, "h.gr", TWO_P3)
    g = write_graph(tmp_path, "g.gr", Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (3, 5)]),
                    WeightFn((2, 1, 2, 3, 1, 1)))
    code, out, _ = run("solve", "--graph", g, "--class", f"hfree:{h}", "--mode", "exact", "--oracle")
    assert code == 0 and json.loads(out)["result"]["weight"] == 7


def test_solve_usage_errors(run, tmp_path):
    assert run("solve", "--graph", str(tmp_path / "missing.gr"), "--class", "pt:5", "--mode", "exact")[0] == 1
    bad = tmp_path / "bad.gr"
    bad.write_text("p 2 1\ne 0 5\n")
    assert run("solve", "--graph", str(bad), "--class", "pt:5", "--mode", "exact")[0] == 1
    assert run("solve", "--graph", str(bad), "--class", "bogus:5", "--mode", "exact")[0] == 1
    assert run()[0] == 1
    assert run("solve")[0] == 1


def test_report_file_matches_stdout(run, tmp_path):
    g = write_graph(tmp_path, "g.gr", path_graph(5))
    rep = tmp_path / "r.json"
    code, out, _ = run("solve", "--graph", g, "--class", "pt:6", "--mode", "exact", "--report", str(rep))
    assert code == 0 and rep.read_text() == out


def test_reports_are_byte_identical(run, tmp_path):
    run("gen", "repaired:14:0.3:pt:6", "--seed", "8", "--out", str(tmp_path / "g.gr"))
    args = ("solve", "--graph", str(tmp_path / "g.gr"), "--class", "pt:6", "--mode", "approx", "--eps", "1/4",
            "--seed", "8", "--oracle")
    first, second = run(*args)[1], run(*args)[1]
    assert first == second
    assert "wall_time" not in first


# -- validate --------------------------------------------------------------------------------------

def esd_file(tmp_path, d, name="d.json"):
    p = tmp_path / name
    p.write_text(dump_esd(d))
    return str(p)


def test_validate_trivial(run, tmp_path):
    G = path_graph(4)
    g = write_graph(tmp_path, "g.gr", G)
    code, out, _ = run("validate", "--graph", g, "--esd", esd_file(tmp_path, trivial_esd(G)), "--atoms")
    rep = json.loads(out)
    assert code == 0 and rep["verification"]["esd"]["valid"]
    assert [a["vertices"] for a in rep["result"]["atoms"]] == [[0, 1, 2, 3]]


def test_validate_tampered_partition(run, tmp_path):
    G = path_graph(4)
    g = write_graph(tmp_path, "g.gr", G)
    d = Esd(Graph.empty(2), [0b0111, 0b1100])
    code, out, _ = run("validate", "--graph", g, "--esd", esd_file(tmp_path, d))
    assert code == 2
    assert any("2" in v for v in json.loads(out)["verification"]["esd"]["violations"])


def test_validate_goodness_of_guess_heavy_cut(run, tmp_path):
    # P5, I = {0, 2, 4}, J = {2}: cut X = N(J) = {1, 3} with the components of the rest
    G = path_graph(5)
    g = write_graph(tmp_path, "g.gr", G)
    d = Esd(Graph.empty(5), [1 << 0, 0, 1 << 2, 0, 1 << 4])
    wfile = tmp_path / "w.txt"
    wfile.write_text("0 1\n1 0\n2 1\n3 0\n4 1\n")
    code, out, _ = run("validate", "--graph", g, "--esd", esd_file(tmp_path, d), "--cut", "1,3",
                       "--goodness", "0,1/2", "--weights", str(wfile))
    assert code == 0 and json.loads(out)["verification"]["goodness"]["good"]


def test_validate_shatter(run, tmp_path):
    G = Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    g = write_graph(tmp_path, "g.gr", G)
    e = esd_file(tmp_path, trivial_esd(G))
    assert run("validate", "--graph", g, "--esd", e, "--shatter", "0,2,4")[0] == 0
    # 0 and 1 are adjacent, so no path triple exists and Z is vacuously shattered
    assert run("validate", "--graph", g, "--esd", e, "--shatter", "0,1,4")[0] == 0
    assert run("validate", "--graph", g, "--esd", e, "--shatter", "0,2")[0] == 1
    P = path_graph(5)
    g = write_graph(tmp_path, "p.gr", P)
    e = esd_file(tmp_path, trivial_esd(P), "p.json")
    assert run("validate", "--graph", g, "--esd", e, "--shatter", "0,2,4")[0] == 2


# -- bench -----------------------------------------------------------------------------------------

def test_bench_outputs(run, tmp_path):
    out = tmp_path / "bench"
    code, text, _ = run("bench", "--gen", "repaired:10:0.4:pt:5", "--count", "6", "--class", "pt:5",
                        "--eps", "1/4", "--oracle", "--out", str(out))
    assert code == 0
    for name in ("results.csv", "results.tsv", "ratio.png", "runtime.png", "report.json"):
        assert (out / name).exists() and (out / name).stat().st_size > 0
    rows = list(csv.DictReader((out / "results.csv").open()))
    assert len(rows) == 6 and all(r["oracle_match"] == "True" for r in rows)
    tsv = list(csv.DictReader((out / "results.tsv").open(), delimiter="\t"))
    assert [r["instance"] for r in tsv] == [r["instance"] for r in rows]
    rep = json.loads(text)
    assert rep["verification"] == {"oracle_mismatches": 0, "ratio_violations": 0}
    assert (out / "report.json").read_text() == text


def test_bench_instance_directory(run, tmp_path):
    inst = tmp_path / "inst"
    inst.mkdir()
    for s in range(3):
        run("gen", "chordal:9", "--seed", str(s), "--out", str(inst / f"c{s}.gr"))
    code, _, _ = run("bench", "--instances", str(inst), "--class", "hole:4", "--modes", "exact",
                     "--oracle", "--out", str(tmp_path / "o"))
    assert code == 0
    assert not (tmp_path / "o" / "ratio.png").exists()


def test_bench_usage(run, tmp_path):
    assert run("bench", "--class", "pt:5", "--out", str(tmp_path / "o"))[0] == 1
    assert run("bench", "--gen", "path:4", "--class", "pt:5", "--modes", "fast")[0] == 1


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "mwisdisperse.cli", "gen", "cycle:5"], capture_output=True,
                         text=True, check=True)
    assert "p 5 5" in out.stdout
