import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from grovekit.exact import det, inverse, matmul, identity, pfaffian, pfaffianoid
from grovekit.groves import tripartite_pairing_prob, tripod_prob
from grovekit.network import (
    Network,
    apply_transform,
    check_response_matrix,
    resistance_matrix,
    response_matrix,
    standard_graph,
)
from grovekit.partitions import ColorSpec, Partition, is_planar, project, tripartite_partition
from grovekit.reconstruction import reconstruct

from fixtures import color_specs, random_grid_fixture
from oracles import pfaffianoid_by_permutations

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
positive = st.fractions(min_value=Fraction(1, 6), max_value=6, max_denominator=6)
seeds = st.integers(min_value=0, max_value=10**6)


@st.composite
def skew_matrices(draw, sizes):
    n = draw(st.sampled_from(sizes))
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = draw(rationals)
            m[j][i] = -m[i][j]
    return m


@st.composite
def partitions(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    labels = [draw(st.integers(min_value=0, max_value=n - 1)) for _ in range(n)]
    groups: dict[int, list[int]] = {}
    for node, g in enumerate(labels, start=1):
        groups.setdefault(g, []).append(node)
    return Partition(list(groups.values()), n)


def rotate_matrix(L, k):
    n = len(L)
    return [[L[(i + k) % n][(j + k) % n] for j in range(n)] for i in range(n)]


def rotate_colors(c, k):
    n = c.n
    return ColorSpec([c.color[(i + k) % n] for i in range(n)])


@given(skew_matrices([2, 4, 6, 8]))
def test_pfaffian_squares_to_determinant(m):
    assert pfaffian(m) ** 2 == det(m)


@given(skew_matrices([3, 5]))
def test_pfaffianoid_matches_permutation_sum(m):
    assert pfaffianoid(m) == pfaffianoid_by_permutations(m)


@given(st.integers(min_value=1, max_value=6), seeds)
def test_inverse_is_two_sided(n, seed):
    rng = random.Random(seed)
    m = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    if det(m):
        assert matmul(m, inverse(m)) == identity(n) == matmul(inverse(m), m)


@given(partitions(), seeds)
def test_projection_ignores_move_order(p, seed):
    assert project(p, random.Random(seed)) == project(p)


@given(partitions())
def test_projection_lands_on_planar_partitions(p):
    assert all(is_planar(s) for s, _ in project(p).items())


@given(partitions(max_n=12))
def test_partition_text_round_trip(p):
    assert Partition.parse(str(p), p.n) == p


@settings(max_examples=25)
@given(seeds, st.sampled_from([4, 5, 6]))
def test_response_matrix_invariants(seed, n):
    L = response_matrix(random_grid_fixture(random.Random(seed), n))
    check_response_matrix(L)
    R = resistance_matrix(L)
    assert all(R[i][j] == R[j][i] > 0 for i in range(n) for j in range(n) if i != j)


@settings(max_examples=25)
@given(seeds, st.integers(min_value=1, max_value=5))
def test_tripartite_pairing_is_rotation_invariant(seed, k):
    L = response_matrix(random_grid_fixture(random.Random(seed), 6))
    rng = random.Random(seed)
    specs = [c for c, p in color_specs(6) if p.is_pairing()]
    c = rng.choice(specs)
    # rotating both labels and colours relabels the same grove type
    shifted = rotate_colors(c, k)
    assert tripartite_pairing_prob(rotate_matrix(L, k), shifted).value == tripartite_pairing_prob(L, c).value


@settings(max_examples=25)
@given(seeds, st.integers(min_value=1, max_value=4))
def test_tripod_is_rotation_invariant(seed, k):
    L = response_matrix(random_grid_fixture(random.Random(seed), 5))
    rng = random.Random(seed)
    specs = [c for c, p in color_specs(5) if p.tripletons()]
    c = rng.choice(specs)
    rotated = rotate_colors(c, k)
    assert tripartite_partition(rotated).n == 5
    assert tripod_prob(rotate_matrix(L, k), rotated).value == tripod_prob(L, c).value


@given(positive, positive, positive)
def test_wye_delta_preserves_response(a, b, c):
    star = Network(4, [1, 2, 3], [(4, 1, a), (4, 2, b), (4, 3, c)])
    assert response_matrix(apply_transform(star, "wye-delta", 4)) == response_matrix(star)


@given(positive, positive, positive)
def test_series_and_parallel_preserve_response(a, b, c):
    chain = Network(4, [1, 2, 3], [(1, 4, a), (4, 2, b), (2, 3, c)])
    assert response_matrix(apply_transform(chain, "series", 4)) == response_matrix(chain)
    doubled = Network(3, [1, 2, 3], [(1, 2, a), (1, 2, b), (2, 3, c)])
    assert response_matrix(apply_transform(doubled, "parallel", (1, 2))) == response_matrix(doubled)


@settings(max_examples=30)
@given(st.integers(min_value=2, max_value=5).flatmap(lambda n: st.lists(positive, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2)))
def test_reconstruction_round_trip(a):
    n = next(k for k in range(2, 6) if k * (k - 1) // 2 == len(a))
    assert reconstruct(response_matrix(standard_graph(n, a))) == a

