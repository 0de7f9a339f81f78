import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from grovekit.cli import main
from grovekit.dimers import BipartiteNetwork, dd_bruteforce, dimer_partition_function, gbw
from grovekit.network import Network, response_matrix, standard_graph
from grovekit.oracle import enumerate_groves, forest_count_product_formula
from grovekit.partitions import Partition, full

DATA = Path(__file__).parent / "data"
GRAPH = str(DATA / "grid6.json")
BIPARTITE = str(DATA / "bipartite6.json")
P = Partition.parse


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out) if code == 0 else out.err


@pytest.fixture(scope="module")
def table():
    return enumerate_groves(Network.from_json(Path(GRAPH).read_text()))


class TestGroveProb:
    def test_colours_on_fixture(self, capsys, table):
        code, out = run(capsys, "grove-prob", "--colors", "R=1-2,G=3-4,B=5-6", GRAPH)
        assert code == 0
        assert out == {"partition": "16|23|45", "pu": str(table.ratio(P("16|23|45")))}

    def test_tripod_and_tree_normalization(self, capsys, table):
        _, out = run(capsys, "grove-prob", "--partition", "126|3|45", GRAPH)
        assert Fraction(out["pu"]) == table.ratio(P("126|3|45"))
        _, out = run(capsys, "grove-prob", "--partition", "16|23|45", "--normalize", "tree", GRAPH)
        assert Fraction(out["p_tree"]) == Fraction(table[P("16|23|45")], table[full(6)])

    def test_symbolic(self, capsys):
        _, out = run(capsys, "grove-prob", "--colors", "R=1-2,G=3-4,B=5-6", "--n", "6")
        expected = (Path(__file__).parent / "golden" / "pfaffexample.txt").read_text().strip()
        assert out == {"partition": "16|23|45", "polynomial": expected}

    def test_matrix_input(self, capsys, tmp_path, table):
        _, resp = run(capsys, "response", GRAPH)
        path = tmp_path / "L.json"
        path.write_text(json.dumps(resp))
        _, out = run(capsys, "grove-prob", "--partition", "16|23|45", str(path))
        assert Fraction(out["pu"]) == table.ratio(P("16|23|45"))


class TestOtherCommands:
    def test_carroll_speyer(self, capsys):
        code, out = run(capsys, "carroll-speyer", "--N", "7")
        assert code == 0
        assert out == {"count": "531441", "forests": "135418115000"}

    def test_carroll_speyer_product_check(self, capsys):
        _, out = run(capsys, "carroll-speyer", "--N", "5", "--check-product")
        assert out["count"] == str(3**6)

    def test_project_crossing(self, capsys):
        _, out = run(capsys, "project", "--partition", "13|24")
        assert out["terms"] == [[1, "1|234"], [-1, "12|34"], [1, "123|4"], [1, "124|3"], [1, "134|2"], [-1, "14|23"]]

    def test_project_seed_is_reproducible(self, capsys):
        first = run(capsys, "--seed", "5", "project", "--partition", "14|25|36")
        again = run(capsys, "--seed", "5", "project", "--partition", "14|25|36")
        plain = run(capsys, "project", "--partition", "14|25|36")
        assert first == again == plain

    def test_minors(self, capsys):
        _, out = run(capsys, "minors", "--rows", "1,2", "--cols", "4,5", GRAPH)
        assert out["equal"] is True and out["det"] == out["groves"]

    def test_reconstruct(self, capsys, tmp_path):
        a = [Fraction(k + 1, 3) for k in range(6)]
        path = tmp_path / "sigma4.json"
        path.write_text(standard_graph(4, a).to_json())
        _, out = run(capsys, "reconstruct", str(path))
        assert out["n"] == 4
        assert [Fraction(c) for _, _, c in out["edges"]] == a

    def test_dd_prob(self, capsys):
        g = BipartiteNetwork.from_json(Path(BIPARTITE).read_text())
        _, out = run(capsys, "dd-prob", "--colors", "R=1-2,G=3-4,B=5-6", BIPARTITE)
        z = dimer_partition_function(gbw(g))
        assert Fraction(out["pr"]) * z**2 == dd_bruteforce(g).get(P(out["partition"]), 0)

    def test_dd_symbolic(self, capsys):
        _, out = run(capsys, "dd-prob", "--colors", "R=1-2,G=3-4", "--n", "4")
        assert out == {"partition": "14|23", "polynomial": "X[1,4]*X[2,3]"}

    def test_enumerate(self, capsys, table):
        _, out = run(capsys, "enumerate", GRAPH)
        assert {p: Fraction(w) for p, w in out["groves"]} == {str(p): w for p, w in table.items()}
        assert Fraction(out["total"]) == table.total

    def test_resistance_and_dual(self, capsys):
        _, out = run(capsys, "resistance", GRAPH)
        assert out["n"] == 6 and out["R"][0][0] == "0"
        _, out = run(capsys, "dual", GRAPH)
        assert out["n"] == 6

    def test_transform_round_trip(self, capsys, tmp_path):
        path = tmp_path / "star.json"
        path.write_text(Network(4, [1, 2, 3], [(4, 1, 1), (4, 2, 2), (4, 3, 3)]).to_json())
        _, out = run(capsys, "transform", "--move", "wye-delta", "--at", "4", str(path))
        again = Network.from_dict(out)
        assert response_matrix(again) == response_matrix(Network.from_json(path.read_text()))


class TestExitCodes:
    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["grove-prob", "--normalize", "sideways"])
        assert exc.value.code == 1
        capsys.readouterr()

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, err = run(capsys, "response", str(bad))
        assert code == 2 and "not valid JSON" in err
        code, _ = run(capsys, "project", "--partition", "1x|2")
        assert code == 2

    def test_precondition(self, capsys):
        # an odd node count cannot be paired
        code, _ = run(capsys, "dd-prob", "--colors", "R=1-2,G=3-4,B=5-5", "--n", "5")
        assert code == 3
        code, _ = run(capsys, "minors", "--rows", "1", "--cols", "2,3", GRAPH)
        assert code == 3

    def test_subprocess_entry_point(self):
        out = subprocess.run(
            [sys.executable, "-m", "grovekit", "carroll-speyer", "--N", "3"], capture_output=True, text=True, check=True
        )
        assert json.loads(out.stdout) == {"count": "9", "forests": str(forest_count_product_formula(3))}
