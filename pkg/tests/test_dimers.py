import random
from fractions import Fraction

import pytest

from grovekit.exact import MultiPoly, det, pfaffian
from grovekit.groves import tripartite_matrix
from grovekit.dimers import (
    BipartiteNetwork,
    dd_bruteforce,
    dd_from_grove_polynomial,
    dd_tripartite_prob,
    dimer_partition_function,
    gbw,
    gbw_ij,
    grid_bipartite,
    gwb,
    kasteleyn_signs,
    l_to_x_substitute,
    matching_sum,
    substitution_sign,
    x_matrix,
)
from grovekit.oracle import ScaleError
from grovekit.partitions import ColorSpec, Partition, tripartite_partition

from fixtures import color_specs, weights

P = Partition.parse
PERIMETER = [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2), (3, 3), (2, 3), (1, 3), (0, 3), (0, 2), (0, 1)]
PICKS = [
    (0, 1, 2, 3),
    (0, 2, 5, 9),
    (0, 3, 4, 7, 8, 11),
    (1, 2, 5, 6, 9, 10),
    (0, 1, 3, 4, 6, 7, 9, 10),
    (0, 2, 3, 5, 6, 8, 9, 11),
]


def X(i, j):
    return MultiPoly.variable("X", i, j)


def grid4(picks, seed):
    rng = random.Random(seed)
    return grid_bipartite(4, 4, [PERIMETER[k] for k in picks], weights(rng))


def odd_even_colourings(n):
    for c, p in color_specs(n):
        if p.is_pairing() and all((a - b) % 2 for a, b in p.parts):
            yield c, p


@pytest.fixture(scope="module", params=range(len(PICKS)))
def grid_case(request):
    g = grid4(PICKS[request.param], request.param)
    return g, dd_bruteforce(g)


class TestKasteleyn:
    def test_single_edge(self):
        g = BipartiteNetwork(2, "BW", [(1, 2, Fraction(7, 2))], [])
        assert dimer_partition_function(g) == Fraction(7, 2)

    def test_four_cycle(self):
        g = BipartiteNetwork(4, "BWBW", [(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 1, 1)], [], [[1, 2, 3, 4]])
        assert dimer_partition_function(g) == 2

    def test_face_sign_rule(self):
        g = grid_bipartite(3, 4, [])
        signs = kasteleyn_signs(g)
        where = {frozenset((u, v)): k for k, (u, v, _) in enumerate(g.edges)}
        for face in g.faces:
            ring = zip(face, face[1:] + face[:1])
            negatives = sum(signs[where[frozenset(e)]] < 0 for e in ring)
            assert negatives % 2 == (len(face) // 2 + 1) % 2

    @pytest.mark.parametrize("rows,cols", [(2, 4), (3, 4), (4, 4), (2, 6)])
    def test_grid_against_matching_sum(self, rows, cols):
        rng = random.Random(rows * cols)
        g = grid_bipartite(rows, cols, [], weights(rng))
        assert dimer_partition_function(g) == matching_sum(g)

    def test_symbolic_weights(self):
        a, b, c, d = (MultiPoly.variable(v) for v in "abcd")
        g = BipartiteNetwork(4, "BWBW", [(1, 2, a), (2, 3, b), (3, 4, c), (4, 1, d)], [], [[1, 2, 3, 4]])
        assert dimer_partition_function(g) == a * c + b * d

    def test_empty_graph(self):
        g = BipartiteNetwork(0, "", [], [])
        assert dimer_partition_function(g) == 1
        assert dd_bruteforce(g) == {P(""): 1}


class TestXMatrix:
    def test_same_node_rejected(self):
        with pytest.raises(ValueError):
            gbw_ij(grid4(PICKS[0], 0), 2, 2)

    def test_same_parity_entries_vanish(self):
        X_ = x_matrix(grid4(PICKS[2], 1))
        n = len(X_)
        assert all(X_[i][j] == 0 for i in range(n) for j in range(n) if (i + j) % 2 == 0)

    def test_scaling(self):
        # X_ij picks up lam^(extra dimers), so it is invariant only when the counts agree
        g = grid4(PICKS[4], 2)
        scaled = BipartiteNetwork(g.vertices, g.coloring, [(u, v, 3 * w) for u, v, w in g.edges], g.nodes, g.faces)
        before, after = x_matrix(g), x_matrix(scaled)
        base = len(gbw(g).kept())
        invariant = 0
        for i in range(1, 9):
            for j in range(i + 1, 9, 2):
                extra = (len(gbw_ij(g, i, j).kept()) - base) // 2
                assert after[i - 1][j - 1] == before[i - 1][j - 1] * Fraction(3) ** extra
                invariant += extra == 0
        assert invariant

    def test_single_square_by_hand(self):
        a, b, c, d = (MultiPoly.variable(v) for v in "abcd")
        g = BipartiteNetwork(4, "BWBW", [(1, 2, a), (2, 3, b), (3, 4, c), (4, 1, d)], [1, 2, 3, 4], [[1, 2, 3, 4]])
        assert gbw(g).removed == frozenset()
        assert dimer_partition_function(gbw_ij(g, 1, 2)) == c
        assert dimer_partition_function(gbw_ij(g, 1, 4)) == b

    def test_json_round_trip(self):
        g = grid4(PICKS[3], 3)
        again = BipartiteNetwork.from_json(g.to_json())
        assert again.to_dict() == g.to_dict()


class TestBruteForce:
    def test_factorization(self, grid_case):
        g, Z = grid_case
        assert sum(Z.values()) == dimer_partition_function(gbw(g)) * dimer_partition_function(gwb(g))

    def test_tripartite_determinant(self, grid_case):
        g, Z = grid_case
        zbw = dimer_partition_function(gbw(g))
        X_ = x_matrix(g)
        checked = 0
        for c, p in odd_even_colourings(len(g.nodes)):
            assert dd_tripartite_prob(X_, c) * zbw**2 == Z.get(p, 0), c
            checked += 1
        assert checked

    def test_single_square_two_nodes(self):
        a, b, c, d = (MultiPoly.variable(v) for v in "abcd")
        g = BipartiteNetwork(4, "BWBW", [(1, 2, a), (2, 3, b), (3, 4, c), (4, 1, d)], [1, 2], [[1, 2, 3, 4]])
        Z = dd_bruteforce(g)
        assert Z == {P("12"): a * c * c + b * c * d}
        assert Z[P("12")] == dimer_partition_function(gbw(g)) * dimer_partition_function(gwb(g))

    def test_scale_bound(self):
        with pytest.raises(ScaleError):
            dd_bruteforce(grid_bipartite(6, 6, []))


class TestPrintedShapes:
    def test_two_pairs(self):
        assert dd_tripartite_prob(None, ColorSpec("RRGG")) == X(1, 4) * X(3, 2)

    @pytest.mark.parametrize(
        "colors,partition,matrix",
        [
            ("RGGGRR", "12|36|45", [[X(1, 2), 0, X(1, 4)], [0, X(3, 6), 0], [X(5, 2), 0, X(5, 4)]]),
            ("RGGBBR", "12|34|56", [[X(1, 2), X(1, 4), 0], [0, X(3, 4), X(3, 6)], [X(5, 2), 0, X(5, 6)]]),
            (
                "RGGGGRRR",
                "12|38|47|56",
                [[X(1, 2), 0, 0, X(1, 4)], [0, X(3, 8), X(3, 6), 0], [0, X(5, 8), X(5, 6), 0], [X(7, 2), 0, 0, X(7, 4)]],
            ),
            (
                "RGGGBBRR",
                "12|38|45|67",
                [[X(1, 2), 0, X(1, 4), X(1, 6)], [0, X(3, 8), 0, X(3, 6)], [X(5, 2), X(5, 8), X(5, 4), 0], [X(7, 2), 0, X(7, 4), X(7, 6)]],
            ),
        ],
    )
    def test_shape(self, colors, partition, matrix):
        c = ColorSpec(colors)
        assert str(tripartite_partition(c)) == partition
        assert dd_tripartite_prob(None, c) == det(matrix)


class TestSubstitution:
    def test_trivial_cases(self):
        L = lambda i, j: MultiPoly.variable("L", i, j)  # noqa: E731
        assert l_to_x_substitute(L(1, 3)) == 0
        assert l_to_x_substitute(L(1, 2)) == X(1, 2)
        assert l_to_x_substitute(L(1, 4)) == -X(1, 4)
        assert l_to_x_substitute(MultiPoly.constant(5)) == 5

    def test_sign(self):
        assert substitution_sign(P("14|23")) == -1
        assert substitution_sign(P("12|34")) == 1
        with pytest.raises(ValueError):
            substitution_sign(P("13|24"))

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_grove_polynomial_gives_dd_polynomial(self, n):
        for c, p in odd_even_colourings(n):
            grove = pfaffian(tripartite_matrix(None, c))
            assert dd_from_grove_polynomial(grove, p) == dd_tripartite_prob(None, c), c

    def test_own_monomial_is_positive(self):
        c = ColorSpec("RGGBBR")
        poly = dd_tripartite_prob(None, c)
        values = {k: Fraction(0) for k in poly.variables()}
        for a, b in tripartite_partition(c).parts:
            values[MultiPoly.var_key("X", a, b)] = Fraction(1)
        assert poly.evaluate(values) == 1
