"""Brute-force ground truth for grove counts.

Two independent grove enumerators are provided: a frontier dynamic program
over the edges (the main oracle) and a plain subset scan for very small
graphs.  Weights may be rationals or :class:`~grovekit.exact.MultiPoly`
values, so the same code produces symbolic grove polynomials.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Any

import mpmath

from .exact import det
from .network import Network, cs_graph, laplacian, response_matrix
from .partitions import Partition, partition_from_cuts, uncrossing

MAX_FRONTIER_EDGES = 60
MAX_SUBSET_EDGES = 16


class ScaleError(ValueError):
    """Input is beyond the enumeration bound."""


class GroveTable:
    """Weighted grove sums ``Z(sigma)`` keyed by boundary partition."""

    __slots__ = ("n", "weights")

    def __init__(self, n: int, weights: dict[Partition, Any]):
        self.n = n
        self.weights = {p: w for p, w in weights.items() if w}

    def __getitem__(self, p: Partition):
        return self.weights.get(p, 0)

    @property
    def total(self):
        return sum(self.weights.values(), 0)

    @property
    def uncrossing(self):
        return self[uncrossing(self.n)]

    def ratio(self, p: Partition):
        """``pû(p) = Z(p) / Z(1|2|...|n)``."""
        return Fraction(self[p]) / Fraction(self.uncrossing)

    def items(self):
        return sorted(self.weights.items())

    def __eq__(self, other):
        return isinstance(other, GroveTable) and self.n == other.n and self.weights == other.weights

    def __repr__(self):
        return f"GroveTable(n={self.n}, partitions={len(self.weights)})"


def _edge_order(net: Network) -> list[int]:
    """Edges sorted by a breadth-first vertex ranking, to keep the frontier thin."""
    adj: dict[int, list[int]] = {v: [] for v in range(1, net.vertices + 1)}
    for u, v, _ in net.edges:
        adj[u].append(v)
        adj[v].append(u)
    rank: dict[int, int] = {}
    for start in list(net.nodes) + list(range(1, net.vertices + 1)):
        if start in rank:
            continue
        rank[start] = len(rank)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in rank:
                    rank[y] = len(rank)
                    queue.append(y)
    key = lambda k: tuple(sorted((rank[net.edges[k][0]], rank[net.edges[k][1]]), reverse=True))  # noqa: E731
    return sorted(range(len(net.edges)), key=key)


def enumerate_groves(net: Network, max_edges: int = MAX_FRONTIER_EDGES) -> GroveTable:
    """Exact ``Z(sigma)`` for every boundary partition realised by a grove.

    Edges are added one at a time.  A state records, for each frontier vertex,
    its component, the nodes each open component already holds, and the node
    sets of components that can no longer grow.
    """
    if len(net.edges) > max_edges:
        raise ScaleError(f"{len(net.edges)} edges exceeds the enumeration bound {max_edges}")
    label = {v: k + 1 for k, v in enumerate(net.nodes)}
    order = _edge_order(net)
    last_use: dict[int, int] = {}
    first_use: dict[int, int] = {}
    for step, k in enumerate(order):
        for x in net.edges[k][:2]:
            first_use.setdefault(x, step)
            last_use[x] = step
    done0 = frozenset(frozenset([label[v]]) for v in net.nodes if v not in first_use)

    # state: (frontier comp ids, nodes held by each comp id, closed parts)
    frontier: list[int] = []
    states: dict[tuple, Any] = {((), (), done0): 1}

    for step, k in enumerate(order):
        u, v, c = net.edges[k]
        for x in (u, v):
            if first_use[x] == step:
                frontier.append(x)
                held = frozenset([label[x]]) if x in label else frozenset()
                states = _add_vertex(states, held)
        iu, iv = frontier.index(u), frontier.index(v)
        nxt: dict[tuple, Any] = {}
        for st, w in states.items():
            _accumulate(nxt, st, w)
            comps, held, done = st
            a, b = comps[iu], comps[iv]
            if a != b:
                merged = tuple(a if x == b else x for x in comps)
                new_held = list(held)
                new_held[a] = held[a] | held[b]
                new_held[b] = frozenset()
                _accumulate(nxt, _canonical(merged, new_held, done), w * c)
        states = nxt
        for x in (u, v):
            if last_use[x] == step and x in frontier:
                states = _retire(states, frontier.index(x))
                frontier.remove(x)

    out: dict[Partition, Any] = {}
    for (_, _, done), w in states.items():
        p = Partition(done, len(net.nodes))
        out[p] = out.get(p, 0) + w
    return GroveTable(len(net.nodes), out)


def _accumulate(acc: dict, key, w) -> None:
    acc[key] = acc[key] + w if key in acc else w


def _canonical(comps: tuple, held: list, done) -> tuple:
    relabel: dict[int, int] = {}
    new_comps = []
    for x in comps:
        if x not in relabel:
            relabel[x] = len(relabel)
        new_comps.append(relabel[x])
    new_held = [frozenset()] * len(relabel)
    for old, new in relabel.items():
        new_held[new] = held[old]
    return tuple(new_comps), tuple(new_held), done


def _add_vertex(states: dict, held: frozenset) -> dict:
    out: dict = {}
    for (comps, hs, done), w in states.items():
        key = (comps + (len(hs),), hs + (held,), done)
        _accumulate(out, key, w)
    return out


def _retire(states: dict, pos: int) -> dict:
    out: dict = {}
    for (comps, hs, done), w in states.items():
        cid = comps[pos]
        rest = comps[:pos] + comps[pos + 1:]
        if cid in rest:
            _accumulate(out, _canonical(rest, list(hs), done), w)
            continue
        if not hs[cid]:
            continue  # a finished tree without any node is not allowed
        _accumulate(out, _canonical(rest, list(hs), done | {hs[cid]}), w)
    return out


def enumerate_groves_subsets(net: Network, max_edges: int = MAX_SUBSET_EDGES) -> GroveTable:
    """Second oracle: scan every edge subset and keep the groves."""
    m = len(net.edges)
    if m > max_edges:
        raise ScaleError(f"{m} edges exceeds the subset-scan bound {max_edges}")
    label = {v: k + 1 for k, v in enumerate(net.nodes)}
    out: dict[Partition, Any] = {}
    for mask in range(1 << m):
        parent = list(range(net.vertices + 1))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        w: Any = 1
        ok = True
        for k in range(m):
            if mask >> k & 1:
                u, v, c = net.edges[k]
                ru, rv = find(u), find(v)
                if ru == rv:
                    ok = False
                    break
                parent[ru] = rv
                w = w * c
        if not ok:
            continue
        comps: dict[int, list[int]] = {}
        for x in range(1, net.vertices + 1):
            comps.setdefault(find(x), []).append(x)
        parts = []
        for members in comps.values():
            held = [label[x] for x in members if x in label]
            if not held:
                break
            parts.append(held)
        else:
            p = Partition(parts, len(net.nodes))
            out[p] = out.get(p, 0) + w
    return GroveTable(len(net.nodes), out)


# ---------------------------------------------------------------------------
# forest counts


def forest_count_interior_rooted(net: Network) -> Fraction:
    """Weighted count of forests with one node per tree: ``det K_II``."""
    K = laplacian(net)
    inner = [v - 1 for v in net.interior()]
    return det([[K[i][j] for j in inner] for i in inner])


def cs_partition(N: int) -> Partition:
    """Side-coloured tripartite partition of the Carroll-Speyer triangle; corners are singletons."""
    if N < 2:
        raise ValueError("N must be at least 2")
    return partition_from_cuts(3 * N, [("node", N), ("node", 2 * N), ("node", 3 * N)])


def cs_count(N: int) -> int:
    """Number of Carroll-Speyer groves, as ``pû(cs_partition) * Z(uncrossing)``."""
    from .groves import grove_probability

    net = cs_graph(N)
    L = response_matrix(net)
    pu = grove_probability(L, cs_partition(N)).value
    count = pu * forest_count_interior_rooted(net)
    if count.denominator != 1:
        raise ArithmeticError(f"grove count {count} is not an integer")
    return int(count)


def _root_product(N: int, prec: int):
    m = 3 * N
    seen = set()
    with mpmath.workprec(prec):
        total = mpmath.mpf(1)
        for a in range(m):
            for z in range(N):
                b = (a - 3 * z) % m
                c = (-a - b) % m
                key = tuple(sorted((a, b, c)))
                if len(set(key)) < 3 or key in seen:
                    continue
                seen.add(key)
                factor = 6
                for idx in key:
                    factor -= 2 * mpmath.cos(2 * mpmath.pi * idx / m)
                total *= factor
        return total


def forest_count_product_formula(N: int, prec: int = 200) -> int:
    """Interior-rooted forest count of the side-``N`` triangle from the root-of-unity product.

    The product runs over unordered triples of distinct ``3N``-th roots of
    unity ``alpha, beta, gamma`` with ``(alpha/beta)^N = 1`` and
    ``alpha*beta*gamma = 1``, of ``6 - alpha - 1/alpha - beta - 1/beta - gamma - 1/gamma``.
    The value is evaluated at ``prec`` and ``2*prec`` bits and rounded only
    when both agree to well within one half.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    low = _root_product(N, prec)
    high = _root_product(N, 2 * prec)
    with mpmath.workprec(2 * prec):
        nearest = int(mpmath.nint(high))
        if abs(low - high) > mpmath.mpf(1) / 8 or abs(high - nearest) > mpmath.mpf(1) / 8:
            raise ArithmeticError(f"product is not resolved to an integer at {prec} bits")
    return nearest
