import random
from fractions import Fraction
from pathlib import Path

import pytest

from grovekit import _backend
from grovekit.exact import (
    MultiPoly,
    ShapeError,
    SingularMatrixError,
    det,
    identity,
    interpolate,
    inverse,
    matmul,
    pfaffian,
    pfaffianoid,
    polynomial_in_parameter,
    schur_complement,
    solve,
)
from grovekit.groves import tripartite_matrix
from grovekit.partitions import ColorSpec

from oracles import det_leibniz, pfaffian_by_pairings, pfaffianoid_by_permutations, sympy_det, sympy_inverse

GOLDEN = Path(__file__).parent / "golden"


def rand_matrix(rng, n):
    return [[Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)]


def rand_skew(rng, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
            m[j][i] = -m[i][j]
    return m


def L(i, j):
    return MultiPoly.variable("L", i, j)


class TestMultiPoly:
    def test_pair_indices_are_sorted(self):
        assert L(3, 1) == L(1, 3)
        assert str(L(4, 2)) == "L[2,4]"

    def test_arithmetic_and_display(self):
        p = L(1, 2) * L(3, 4) - 2 * L(1, 3) + 1
        assert str(p) == "1 + L[1,2]*L[3,4] - 2*L[1,3]"
        assert p - p == 0
        assert (p * 0).is_constant

    def test_division_by_scalar(self):
        assert (L(1, 2) * 4) / 2 == L(1, 2) * 2

    def test_degree_and_coefficient(self):
        t = MultiPoly.variable("t")
        p = t * L(1, 2) + t * t * 3 + 5
        assert p.degree(MultiPoly.var_key("t")) == 2
        assert p.coefficient(MultiPoly.var_key("t"), 1) == L(1, 2)
        assert p.coefficient(MultiPoly.var_key("t"), 0) == 5

    def test_evaluate_and_substitute(self):
        p = L(1, 2) * L(2, 3) + L(1, 3)
        assert p.evaluate({MultiPoly.var_key("L", 1, 2): 2, MultiPoly.var_key("L", 2, 3): 3, MultiPoly.var_key("L", 1, 3): 1}) == 7
        q = p.substitute({MultiPoly.var_key("L", 1, 3): 0})
        assert q == L(1, 2) * L(2, 3)

    def test_hash_matches_equality(self):
        assert hash(L(1, 2) + 0) == hash(L(2, 1))


class TestDeterminant:
    def test_trivial(self):
        assert det([]) == 1
        assert det(identity(4)) == 1
        assert det([[Fraction(3)]]) == 3

    def test_against_sympy(self):
        rng = random.Random(1)
        for n in range(1, 9):
            m = rand_matrix(rng, n)
            assert det(m) == sympy_det(m)

    def test_singular(self):
        assert det([[1, 2], [2, 4]]) == 0

    def test_symbolic_against_leibniz(self):
        m = [[L(i, j) if i != j else 0 for j in range(1, 5)] for i in range(1, 5)]
        assert det(m) == det_leibniz(m)

    def test_not_square(self):
        with pytest.raises(ShapeError):
            det([[1, 2]])

    def test_backends_agree(self):
        rng = random.Random(2)
        m = rand_matrix(rng, 7)
        before = _backend.NAME
        try:
            _backend.use("python")
            slow = det(m), inverse(m)
            if _backend.gmpy2 is not None:
                _backend.use("gmpy2")
            assert (det(m), inverse(m)) == slow
        finally:
            _backend.use(before)


class TestInverseSolve:
    def test_against_sympy(self):
        rng = random.Random(3)
        for n in (1, 2, 5, 8):
            m = rand_matrix(rng, n)
            if det(m):
                assert inverse(m) == sympy_inverse(m)
                assert matmul(m, inverse(m)) == identity(n)

    def test_singular_raises(self):
        with pytest.raises(SingularMatrixError):
            inverse([[1, 2], [2, 4]])

    def test_solve(self):
        m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
        assert solve(m, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]

    def test_schur_complement(self):
        m = [[Fraction(2), Fraction(-1), Fraction(-1)], [Fraction(-1), Fraction(2), Fraction(-1)], [Fraction(-1), Fraction(-1), Fraction(2)]]
        assert schur_complement(m, [0, 1]) == [[Fraction(3, 2), Fraction(-3, 2)], [Fraction(-3, 2), Fraction(3, 2)]]


class TestPfaffian:
    def test_small_cases(self):
        assert pfaffian([]) == 1
        assert pfaffian([[0, Fraction(5)], [Fraction(-5), 0]]) == 5

    def test_odd_size_rejected(self):
        with pytest.raises(ValueError):
            pfaffian([[0]])

    def test_not_antisymmetric(self):
        with pytest.raises(ValueError):
            pfaffian([[0, 1], [1, 0]])

    def test_against_pairing_sum(self):
        rng = random.Random(4)
        for n in (2, 4, 6, 8):
            m = rand_skew(rng, n)
            assert pfaffian(m) == pfaffian_by_pairings(m)

    def test_square_is_determinant(self):
        rng = random.Random(5)
        for n in (2, 4, 6, 10):
            m = rand_skew(rng, n)
            assert pfaffian(m) ** 2 == det(m)

    def test_golden_tripartite_example(self):
        expected = (GOLDEN / "pfaffexample.txt").read_text().strip()
        m = tripartite_matrix(None, ColorSpec.parse("R=1-2,G=3-4,B=5-6", 6))
        assert str(pfaffian(m)) == expected

    def test_symbolic_matches_rational(self):
        rng = random.Random(6)
        m = tripartite_matrix(None, ColorSpec("RRGGBB"))
        values = {}
        for i in range(1, 7):
            for j in range(i + 1, 7):
                values[MultiPoly.var_key("L", i, j)] = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        num = [[x.evaluate(values) if isinstance(x, MultiPoly) else Fraction(x) for x in row] for row in m]
        assert pfaffian(m).evaluate(values) == pfaffian(num)


class TestPfaffianoid:
    def test_three_by_three(self):
        x, y, z = (MultiPoly.variable(v) for v in "xyz")
        m = [[0, x, y], [-x, 0, z], [-y, -z, 0]]
        assert pfaffianoid(m) == x * z + z * y + y * x

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_against_permutation_definition(self, n):
        m = rand_skew(random.Random(n), n)
        assert pfaffianoid(m) == pfaffianoid_by_permutations(m)

    def test_even_size_rejected(self):
        with pytest.raises(ValueError):
            pfaffianoid(rand_skew(random.Random(0), 4))

    def test_restricted_triples_partition_the_sum(self):
        m = rand_skew(random.Random(9), 5)
        from itertools import combinations

        triples = list(combinations(range(5), 3))
        assert pfaffianoid(m, triples[:4]) + pfaffianoid(m, triples[4:]) == pfaffianoid(m)


class TestInterpolation:
    def test_recovers_coefficients(self):
        assert interpolate([Fraction(1), Fraction(3), Fraction(7)]) == [1, 1, 1]

    def test_polynomial_in_parameter(self):
        coeffs = polynomial_in_parameter(lambda t: 2 * t**3 - t + Fraction(1, 2), 5)
        assert coeffs[:4] == [Fraction(1, 2), -1, 0, 2]
        assert all(c == 0 for c in coeffs[4:])
