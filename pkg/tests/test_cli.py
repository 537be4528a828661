import csv
import io
import json

import pytest

from mesc.cli import CSV_HEADER, main, parse_grid
from mesc.core import SetSystem, write_instance


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def two_file(tmp_path, two_sets):
    path = tmp_path / "ex.mesc"
    write_instance(two_sets, path)
    return str(path)


@pytest.fixture
def single_file(tmp_path):
    path = tmp_path / "one.mesc"
    write_instance(SetSystem(3, [(1, 2, 3)]), path)
    return str(path)


def test_grid():
    assert parse_grid("0:1:0.25") == [0, 0.25, 0.5, 0.75, 1]
    assert len(parse_grid("1.5:4.0:0.25")) == 11
    assert parse_grid("0.1:0.3:0.1") == [0.1, 0.2, 0.3]


class TestSolve:
    def test_exact_golden(self, capsys, two_file):
        code, out, _ = run(capsys, "solve", "--input", two_file, "--algorithm", "exact")
        assert code == 0
        assert out == (
            "instance: ex\nalgorithm: exact\nn: 4  m: 2  f: 1.25\n"
            "cover: 1 1 1 2\nclass_sizes: 3 1\nentropy: 0.8112781\n"
        )

    def test_single_set(self, capsys, single_file):
        code, out, _ = run(capsys, "solve", "--input", single_file, "--algorithm", "biased-greedy", "--delta", "1")
        assert code == 0 and "entropy: 0\n" in out

    def test_bad_delta(self, capsys, single_file):
        code, _, err = run(capsys, "solve", "--input", single_file, "--algorithm", "biased-greedy", "--delta", "1.5")
        assert code == 2
        assert json.loads(err)["error"] == "input"

    def test_invalid_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.mesc"
        bad.write_text("MESC 1\n3 1\n1 2\n")
        code, _, err = run(capsys, "solve", "--input", str(bad))
        assert code == 2 and "uncovered" in err

    def test_budget(self, capsys):
        code, out, err = run(capsys, "solve", "--input", "paper-fig1", "--algorithm", "exact", "--budget", "2")
        assert code == 3 and json.loads(err)["error"] == "resource"
        assert "entropy:" in out

    def test_csv_row(self, capsys, two_file, tmp_path):
        path = tmp_path / "row.csv"
        run(capsys, "solve", "--input", two_file, "--algorithm", "greedy", "--output", str(path))
        (r,) = rows(path.read_text())
        assert r["algorithm"] == "greedy" and r["delta"] == "0" and r["ent_alg"] == "0.8112781"


class TestCertify:
    def test_paper(self, capsys):
        code, out, _ = run(capsys, "certify", "--input", "paper-fig1")
        assert code == 0
        assert out.splitlines()[0] == ",".join(CSV_HEADER)
        table = rows(out)
        assert len(table) == 5
        assert all(r["holds"] == "true" for r in table)
        last = table[-1]
        assert float(last["delta"]) == 1 and float(last["rhs"]) == pytest.approx(2.0207097, abs=1e-6)
        first = table[0]
        assert float(first["rhs"]) == pytest.approx(1.5612781 + 0.4594316 + 1.4426950, abs=1e-6)

    def test_budget_flagged(self, capsys):
        code, out, _ = run(capsys, "certify", "--input", "paper-fig1", "--budget", "2")
        assert code == 3
        assert all(r["holds"] == "budget_exceeded" for r in rows(out))


def test_sweep(capsys, monkeypatch):
    argv = ["sweep", "--n", "8", "--m", "4", "--target-f", "2", "--seeds", "3", "--exact"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    table = rows(out)
    assert len(table) == 15 and all(r["holds"] == "true" for r in table)
    monkeypatch.setenv("MESC_THREADS", "3")
    assert run(capsys, *argv)[1] == out


class TestPhaseTransition:
    def test_small_grid(self, capsys, tmp_path):
        svg = tmp_path / "pt.svg"
        code, out, _ = run(capsys, "phase-transition", "--n", "20", "--m", "6", "--f-grid", "2.0:3.5:0.5", "--seeds", "2", "--svg", str(svg))
        assert code == 0
        table = rows(out)
        assert [int(r["best_delta"]) for r in table] == [1, 1, 0, 0]
        assert float(table[0]["log2_f"]) == 1.0
        diffs = [float(r["guarantee_diff"]) for r in table]
        assert diffs[1] < 0 < diffs[2]
        assert svg.read_text().lstrip().startswith("<?xml")

    def test_grid_beyond_m(self, capsys):
        code, _, _ = run(capsys, "phase-transition", "--m", "3", "--f-grid", "1:4:1")
        assert code == 2


class TestColor:
    def test_paper(self, capsys, tmp_path):
        path = tmp_path / "c.csv"
        code, out, _ = run(capsys, "color", "--graph", "paper-fig1", "--delta", "1", "--output", str(path))
        assert code == 0
        ent = float(out.split("entropy: ")[1].split()[0])
        assert ent <= 1.9056391 + 1e-6
        (r,) = rows(path.read_text())
        assert r["holds"] == "true"

    def test_edgeless(self, capsys, tmp_path):
        g = tmp_path / "e.graph"
        g.write_text("GRAPH 1\n4 0\n")
        code, out, _ = run(capsys, "color", "--graph", str(g))
        assert code == 0 and "class 2:" not in out and "entropy: 0\n" in out

    def test_alpha3_rejected(self, capsys, tmp_path):
        g = tmp_path / "e.graph"
        g.write_text("GRAPH 1\n4 0\n")
        code, _, err = run(capsys, "color", "--graph", str(g), "--f-alpha3")
        assert code == 2 and "independence number" in err


class TestGen:
    def test_round_trip(self, capsys, tmp_path):
        path = tmp_path / "g.mesc"
        assert run(capsys, "gen", "--n", "9", "--m", "4", "--target-f", "2", "--seed", "5", "--output", str(path))[0] == 0
        first = path.read_bytes()
        assert run(capsys, "solve", "--input", str(path))[0] == 0
        run(capsys, "gen", "--n", "9", "--m", "4", "--target-f", "2", "--seed", "5", "--output", str(path))
        assert path.read_bytes() == first

    def test_emit_fixture(self, capsys, tmp_path):
        path = tmp_path / "fig1.graph"
        run(capsys, "gen", "--emit", "paper-fig1", "--output", str(path))
        code, out, _ = run(capsys, "color", "--graph", str(path))
        assert code == 0 and "f: 1.375" in out

    def test_graph_kind(self, capsys):
        code, out, _ = run(capsys, "gen", "--kind", "graph", "--n", "5", "--p", "1", "--seed", "1")
        assert code == 0 and out.startswith("GRAPH 1\n5 10\n")
