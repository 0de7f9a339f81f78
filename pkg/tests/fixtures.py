"""Shared fixture builders; every random choice goes through an explicit rng."""

import itertools
import random
from fractions import Fraction

from grovekit.network import Network, grid_boundary, grid_graph, random_conductance
from grovekit.partitions import ColorSpec, partition_from_cuts, tripartite_partition


def weights(rng):
    return lambda: random_conductance(rng)


def grid_fixture(rows, cols, picks, rng):
    """Grid whose nodes are the perimeter points at positions ``picks``."""
    bnd = grid_boundary(rows, cols)
    return grid_graph(rows, cols, [bnd[i] for i in picks], weights(rng))


def random_grid_fixture(rng, n_nodes):
    rows, cols = rng.choice([(3, 3), (3, 4), (2, 4), (2, 5)])
    per = 2 * (rows + cols) - 4
    picks = sorted(rng.sample(range(per), n_nodes))
    return grid_fixture(rows, cols, picks, rng)


def color_specs(n):
    """Every colouring of ``n`` nodes into at most three circular arcs with a tripartite partition."""
    seen = set()
    for r in range(n + 1):
        for g in range(n + 1 - r):
            for rot in range(n):
                cols = ["R"] * r + ["G"] * g + ["B"] * (n - r - g)
                cols = tuple(cols[rot:] + cols[:rot])
                if cols in seen:
                    continue
                seen.add(cols)
                try:
                    c = ColorSpec(cols)
                    p = tripartite_partition(c)
                except ValueError:
                    continue
                yield c, p


def cut_partitions(n):
    """Tripartite partitions from three cuts, each on a gap or a node."""
    out = set()
    for kinds in itertools.product(("gap", "node"), repeat=3):
        for pos in itertools.combinations(range(1, n + 1), 3):
            try:
                out.add(partition_from_cuts(n, list(zip(kinds, pos))))
            except ValueError:
                pass
    return sorted(out)


def nonplanar_fixture(rng):
    """K5 on nodes 1..5 minus edge 12, plus an interior vertex joined to 1 and 3."""
    edges = [(u, v, random_conductance(rng)) for u, v in itertools.combinations(range(1, 6), 2) if (u, v) != (1, 2)]
    edges += [(6, 1, Fraction(2)), (6, 3, Fraction(1))]
    return Network(6, [1, 2, 3, 4, 5], edges)


def random_splits(rng, n, count, max_pairs=2, max_common=2):
    """Random ``(A, B, C, D)`` with ``|A| = |B|`` covering ``1..n``."""
    out = []
    while len(out) < count:
        nodes = list(range(1, n + 1))
        rng.shuffle(nodes)
        k = rng.randint(1, max_pairs)
        c = rng.randint(0, max_common)
        if 2 * k + c > n:
            continue
        out.append((nodes[:k], nodes[k : 2 * k], nodes[2 * k : 2 * k + c], nodes[2 * k + c :]))
    return out


def seeded(seed):
    return random.Random(seed)
