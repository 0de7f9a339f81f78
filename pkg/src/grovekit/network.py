"""Resistor networks with ordered boundary nodes.

Vertices are numbered ``1..V``.  ``nodes`` lists the boundary nodes in
counterclockwise order; node ``k`` (1-based) is ``nodes[k-1]``.  Matrices
indexed by nodes use 0-based rows, so ``L[0][1]`` is ``L_{1,2}``.

The response matrix is the negated Schur complement of the Laplacian onto the
nodes, so its off-diagonal entries are non-negative.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .exact import MultiPoly, SingularMatrixError, inverse, is_rational, schur_complement


class NetworkError(ValueError):
    """The network violates a structural precondition."""


def _to_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def format_rational(x) -> str:
    return str(Fraction(x))


class Network:
    """Weighted graph with boundary nodes.  Treat instances as immutable."""

    __slots__ = ("vertices", "nodes", "edges", "faces")

    def __init__(
        self,
        vertices: int,
        nodes: Sequence[int],
        edges: Iterable[tuple[int, int, Any]],
        faces: Sequence[Sequence[int]] | None = None,
    ):
        nodes = tuple(nodes)
        if not nodes:
            raise NetworkError("a network needs at least one node")
        if len(set(nodes)) != len(nodes):
            raise NetworkError("nodes must be distinct")
        if any(not 1 <= v <= vertices for v in nodes):
            raise NetworkError("node outside the vertex range")
        clean = []
        for u, v, c in edges:
            if u == v:
                raise NetworkError(f"self-loop at {u}")
            if not (1 <= u <= vertices and 1 <= v <= vertices):
                raise NetworkError(f"edge ({u}, {v}) outside the vertex range")
            if not isinstance(c, MultiPoly):
                c = _to_fraction(c)
                if c <= 0:
                    raise NetworkError(f"conductance {c} on edge ({u}, {v}) is not positive")
            clean.append((u, v, c))
        self.vertices = vertices
        self.nodes = nodes
        self.edges = tuple(clean)
        self.faces = tuple(tuple(f) for f in faces) if faces is not None else None
        self._check_components()

    def _check_components(self) -> None:
        parent = list(range(self.vertices + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in self.edges:
            parent[find(u)] = find(v)
        with_node = {find(v) for v in self.nodes}
        lost = [v for v in range(1, self.vertices + 1) if find(v) not in with_node]
        if lost:
            raise NetworkError(f"vertices {lost} lie in a component without nodes")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def interior(self) -> list[int]:
        ns = set(self.nodes)
        return [v for v in range(1, self.vertices + 1) if v not in ns]

    def neighbours(self, v: int) -> list[tuple[int, int, Any]]:
        """Edges at ``v`` as ``(index, other end, conductance)``."""
        out = []
        for k, (a, b, c) in enumerate(self.edges):
            if a == v:
                out.append((k, b, c))
            elif b == v:
                out.append((k, a, c))
        return out

    def with_conductances(self, values: Sequence) -> "Network":
        if len(values) != len(self.edges):
            raise ValueError(f"expected {len(self.edges)} conductances, got {len(values)}")
        return Network(self.vertices, self.nodes, [(u, v, c) for (u, v, _), c in zip(self.edges, values)], self.faces)

    # JSON ---------------------------------------------------------------
    def to_dict(self) -> dict:
        d = {
            "vertices": self.vertices,
            "nodes": list(self.nodes),
            "edges": [[u, v, format_rational(c)] for u, v, c in self.edges],
        }
        if self.faces is not None:
            d["faces"] = [list(f) for f in self.faces]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Network":
        try:
            vertices = int(d["vertices"])
            nodes = [int(x) for x in d["nodes"]]
            edges = [(int(u), int(v), _to_fraction(c)) for u, v, c in d["edges"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed network description: {exc}") from exc
        faces = d.get("faces")
        return cls(vertices, nodes, edges, faces)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Network":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        return (
            isinstance(other, Network)
            and (self.vertices, self.nodes, self.edges, self.faces)
            == (other.vertices, other.nodes, other.edges, other.faces)
        )

    def __repr__(self):
        return f"Network(vertices={self.vertices}, nodes={list(self.nodes)}, edges={len(self.edges)})"


# ---------------------------------------------------------------------------
# electrical quantities


def laplacian(net: Network) -> list[list]:
    """Weighted Laplacian ``K`` indexed by vertex (0-based)."""
    V = net.vertices
    K = [[Fraction(0)] * V for _ in range(V)]
    for u, v, c in net.edges:
        u, v = u - 1, v - 1
        K[u][u] += c
        K[v][v] += c
        K[u][v] -= c
        K[v][u] -= c
    return K


def response_matrix(net: Network) -> list[list[Fraction]]:
    """``L = -(K_NN - K_NI K_II^-1 K_IN)`` in node order."""
    K = laplacian(net)
    try:
        S = schur_complement(K, [v - 1 for v in net.nodes])
    except SingularMatrixError as exc:
        raise NetworkError("an interior component does not reach any node") from exc
    return [[-x for x in row] for row in S]


def check_response_matrix(L) -> int:
    n = len(L)
    for i in range(n):
        if len(L[i]) != n:
            raise ValueError("response matrix must be square")
        if sum(L[i]) != 0:
            raise ValueError(f"row {i + 1} of the response matrix does not sum to zero")
        for j in range(n):
            if L[i][j] != L[j][i]:
                raise ValueError("response matrix must be symmetric")
            if i != j and L[i][j] < 0:
                raise ValueError(f"negative off-diagonal entry at ({i + 1}, {j + 1})")
    return n


def _green(L) -> list[list[Fraction]]:
    """Inverse of ``L - J/n``: agrees with ``L^+`` on zero-sum vectors."""
    n = len(L)
    shifted = [[Fraction(L[i][j]) - Fraction(1, n) for j in range(n)] for i in range(n)]
    try:
        return inverse(shifted)
    except SingularMatrixError as exc:
        raise NetworkError("response matrix has a kernel beyond constants (disconnected network)") from exc


def _form(G, u: dict[int, int], v: dict[int, int]) -> Fraction:
    return sum((cu * cv * G[i][j] for i, cu in u.items() for j, cv in v.items()), Fraction(0))


def resistance_matrix(L) -> list[list[Fraction]]:
    """``R_ij = -(d_i - d_j)^T L^+ (d_i - d_j)``."""
    n = check_response_matrix(L)
    G = _green(L)
    R = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = {i: 1, j: -1}
            R[i][j] = R[j][i] = -_form(G, d, d)
    return R


def resistance_matrix_reduced(L) -> list[list[Fraction]]:
    """Same values via ``M = (-L~)^-1`` with the last node grounded."""
    n = check_response_matrix(L)
    if n == 1:
        return [[Fraction(0)]]
    M = inverse([[-Fraction(L[i][j]) for j in range(n - 1)] for i in range(n - 1)])

    def m(i, j):
        return M[i][j] if i < n - 1 and j < n - 1 else Fraction(0)

    return [[m(i, i) + m(j, j) - 2 * m(i, j) for j in range(n)] for i in range(n)]


def dual_response(L) -> list[list[Fraction]]:
    """Response matrix of the planar dual; dual node ``i`` sits between ``i`` and ``i+1``."""
    n = check_response_matrix(L)
    G = _green(L)
    D = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            u = {i: 1}
            u[(i + 1) % n] = u.get((i + 1) % n, 0) - 1
            v = {j: 1}
            v[(j + 1) % n] = v.get((j + 1) % n, 0) - 1
            D[i][j] = _form(G, u, v)
    for i in range(n):
        D[i][i] = -sum(D[i][j] for j in range(n) if j != i)
    return D


def uncrossing_tree_ratio(L) -> Fraction:
    """``Z(12...n) / Z(1|2|...|n)`` as ``det(-L~)``."""
    from .exact import det

    n = len(L)
    return det([[-Fraction(L[i][j]) for j in range(n - 1)] for i in range(n - 1)])


# ---------------------------------------------------------------------------
# electrical moves


def _drop_vertex(net: Network, v: int, edges: list[tuple[int, int, Any]]) -> Network:
    shift = lambda x: x - 1 if x > v else x  # noqa: E731
    return Network(
        net.vertices - 1,
        [shift(x) for x in net.nodes],
        [(shift(a), shift(b), c) for a, b, c in edges],
    )


def _interior_vertex(net: Network, v: int, degree: int) -> list[tuple[int, int, Any]]:
    if v in net.nodes or not 1 <= v <= net.vertices:
        raise ValueError(f"vertex {v} is not an interior vertex")
    nb = net.neighbours(v)
    if len(nb) != degree:
        raise ValueError(f"vertex {v} has degree {len(nb)}, expected {degree}")
    if len({w for _, w, _ in nb}) != degree:
        raise ValueError(f"vertex {v} has repeated neighbours; merge parallel edges first")
    return nb


def apply_transform(net: Network, move: str, location) -> Network:
    """Apply one local move that leaves the response matrix unchanged.

    ``move`` and ``location``:

    * ``"series"``: interior vertex of degree 2
    * ``"parallel"``: pair ``(u, v)`` joined by at least two edges
    * ``"pendant"``: interior vertex of degree 1
    * ``"wye-delta"``: interior vertex of degree 3
    * ``"delta-wye"``: triangle ``(u, v, w)`` with one edge on each side

    The result carries no face data.
    """
    if move == "series":
        nb = _interior_vertex(net, location, 2)
        (k1, u, a), (k2, w, b) = nb
        rest = [e for k, e in enumerate(net.edges) if k not in (k1, k2)]
        return _drop_vertex(net, location, rest + [(u, w, a * b / (a + b))])
    if move == "pendant":
        (k, _, _), = _interior_vertex(net, location, 1)
        return _drop_vertex(net, location, [e for j, e in enumerate(net.edges) if j != k])
    if move == "wye-delta":
        nb = _interior_vertex(net, location, 3)
        (ka, u, a), (kb, v, b), (kc, w, c) = nb
        s = a + b + c
        rest = [e for k, e in enumerate(net.edges) if k not in (ka, kb, kc)]
        return _drop_vertex(net, location, rest + [(u, v, a * b / s), (u, w, a * c / s), (v, w, b * c / s)])
    if move == "parallel":
        u, v = location
        ks = [k for k, (a, b, _) in enumerate(net.edges) if {a, b} == {u, v}]
        if len(ks) < 2:
            raise ValueError(f"no parallel edges between {u} and {v}")
        total = sum((net.edges[k][2] for k in ks), Fraction(0))
        rest = [e for k, e in enumerate(net.edges) if k not in ks]
        return Network(net.vertices, net.nodes, rest + [(u, v, total)])
    if move == "delta-wye":
        u, v, w = location
        found = {}
        for pair in ((u, v), (u, w), (v, w)):
            ks = [k for k, (a, b, _) in enumerate(net.edges) if {a, b} == set(pair)]
            if len(ks) != 1:
                raise ValueError(f"triangle side {pair} needs exactly one edge, found {len(ks)}")
            found[pair] = ks[0]
        cuv, cuw, cvw = (net.edges[found[p]][2] for p in ((u, v), (u, w), (v, w)))
        p = cuv * cuw + cuv * cvw + cuw * cvw
        centre = net.vertices + 1
        rest = [e for k, e in enumerate(net.edges) if k not in found.values()]
        rest += [(u, centre, p / cvw), (v, centre, p / cuw), (w, centre, p / cuv)]
        return Network(centre, net.nodes, rest)
    raise ValueError(f"unknown move {move!r}")


# ---------------------------------------------------------------------------
# generators

WeightSource = Callable[[], Any] | random.Random | None


def _weight_fn(weights: WeightSource) -> Callable[[], Any]:
    if weights is None:
        return lambda: Fraction(1)
    if isinstance(weights, random.Random):
        return lambda: random_conductance(weights)
    return weights


def random_conductance(rng: random.Random) -> Fraction:
    """Small positive rational, numerator and denominator in 1..5."""
    return Fraction(rng.randint(1, 5), rng.randint(1, 5))


def _assemble(points_nodes: list, points_rest: list, edge_pairs: list, weights: WeightSource, faces_pts=None) -> tuple[Network, dict]:
    vid = {p: k + 1 for k, p in enumerate(points_nodes + points_rest)}
    w = _weight_fn(weights)
    edges = [(vid[p], vid[q], w()) for p, q in edge_pairs]
    faces = None
    if faces_pts is not None:
        faces = [[vid[p] for p in f] for f in faces_pts]
    net = Network(len(vid), [vid[p] for p in points_nodes], edges, faces)
    return net, vid


def grid_boundary(rows: int, cols: int) -> list[tuple[int, int]]:
    """Perimeter points ``(x, y)`` of a grid in counterclockwise order from ``(0, 0)``."""
    if rows == 1 or cols == 1:
        return [(x, y) for y in range(rows) for x in range(cols)]
    out = [(x, 0) for x in range(cols)]
    out += [(cols - 1, y) for y in range(1, rows)]
    out += [(x, rows - 1) for x in range(cols - 2, -1, -1)]
    out += [(0, y) for y in range(rows - 2, 0, -1)]
    return out


def grid_graph(rows: int, cols: int, nodes="boundary", weights: WeightSource = None) -> Network:
    """``rows x cols`` square grid.

    ``nodes`` is ``"boundary"``, ``"corners"`` or a counterclockwise list of
    perimeter points ``(x, y)``.  Node vertices get ids ``1..n``; the rest
    follow in row-major order.  Bounded faces are the unit squares.
    """
    if nodes == "boundary":
        chosen = grid_boundary(rows, cols)
    elif nodes == "corners":
        chosen = [(0, 0), (cols - 1, 0), (cols - 1, rows - 1), (0, rows - 1)]
        chosen = list(dict.fromkeys(chosen))
    else:
        chosen = [tuple(p) for p in nodes]
    pts = [(x, y) for y in range(rows) for x in range(cols)]
    rest = [p for p in pts if p not in set(chosen)]
    pairs = [((x, y), (x + 1, y)) for y in range(rows) for x in range(cols - 1)]
    pairs += [((x, y), (x, y + 1)) for y in range(rows - 1) for x in range(cols)]
    faces = [[(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)] for y in range(rows - 1) for x in range(cols - 1)]
    net, _ = _assemble(chosen, rest, pairs, weights, faces)
    return net


def cs_points(N: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Boundary points (node order) and interior points of the side-``N`` triangle."""
    bnd = [(i, 0) for i in range(1, N + 1)]
    bnd += [(N - k, k) for k in range(1, N + 1)]
    bnd += [(0, N - k) for k in range(1, N + 1)]
    inner = [(i, j) for j in range(1, N) for i in range(1, N - j)]
    return bnd, inner


def cs_graph(N: int) -> Network:
    """Triangular-lattice triangle of side ``N``; all ``3N`` boundary vertices are nodes."""
    if N < 2:
        raise ValueError("cs_graph needs N >= 2")
    bnd, inner = cs_points(N)
    inside = set(bnd) | set(inner)
    pairs = []
    for p in bnd + inner:
        for dx, dy in ((1, 0), (0, 1), (-1, 1)):
            q = (p[0] + dx, p[1] + dy)
            if q in inside:
                pairs.append((p, q))
    net, _ = _assemble(bnd, inner, pairs, None)
    return net


@dataclass(frozen=True)
class StandardLayout:
    """Integer-point model of the standard graph on ``n`` nodes.

    Points ``(x, y)`` with ``x >= 0`` and ``x - a <= y <= b - x``.  The lower
    line ``y = x - a`` carries nodes ``1, 2, ...`` (left to right) and the upper
    line ``y = b - x`` carries nodes ``n, n-1, ...``.  Edges join points at unit
    distance and are listed in lexicographic order of their endpoints.
    """

    n: int
    a: int
    b: int
    vertex: dict = field(repr=False)  # point -> vertex id
    point: dict = field(repr=False)  # vertex id -> point
    edge_points: tuple = field(repr=False)

    def inside(self, p) -> bool:
        x, y = p
        return x >= 0 and x - self.a <= y <= self.b - x


def standard_layout(n: int) -> StandardLayout:
    if n < 1:
        raise ValueError("standard graphs need n >= 1")
    k = (n - 1) // 2
    a, b = (k, k) if n % 2 else (k, k + 1)
    pts = [(x, y) for x in range(0, b + 1) for y in range(x - a, b - x + 1)]
    label = {}
    for x, y in pts:
        if y == x - a:
            label[(x, y)] = x + 1
        elif y == b - x:
            label[(x, y)] = n - x
    nodes = sorted(label, key=label.get)
    rest = sorted(p for p in pts if p not in label)
    vertex = {p: i + 1 for i, p in enumerate(nodes + rest)}
    inside = set(pts)
    pairs = []
    for p in sorted(pts):
        for q in ((p[0] + 1, p[1]), (p[0], p[1] + 1)):
            if q in inside:
                pairs.append((p, q))
    return StandardLayout(n, a, b, vertex, {v: p for p, v in vertex.items()}, tuple(pairs))


def standard_graph(n: int, conductances: Sequence | None = None) -> Network:
    """Standard critical circular planar graph on ``n`` nodes (``n(n-1)/2`` edges)."""
    lay = standard_layout(n)
    m = len(lay.edge_points)
    if conductances is None:
        conductances = [Fraction(1)] * m
    if len(conductances) != m:
        raise ValueError(f"standard graph on {n} nodes has {m} edges, got {len(conductances)} conductances")
    edges = [(lay.vertex[p], lay.vertex[q], c) for (p, q), c in zip(lay.edge_points, conductances)]
    faces = []
    for x, y in sorted(lay.vertex):
        sq = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
        if all(lay.inside(p) for p in sq):
            faces.append([lay.vertex[p] for p in sq])
    return Network(len(lay.vertex), list(range(1, n + 1)), edges, faces)


# ---------------------------------------------------------------------------
# response-matrix JSON


def matrix_to_json(L) -> dict:
    return {"n": len(L), "L": [[format_rational(x) for x in row] for row in L]}


def matrix_from_json(d) -> list[list[Fraction]]:
    """Accept ``{"n":..,"L":[[..]]}`` or a bare array of rows."""
    try:
        rows = d["L"] if isinstance(d, dict) else d
        L = [[_to_fraction(x) for x in row] for row in rows]
        if isinstance(d, dict) and int(d.get("n", len(L))) != len(L):
            raise ValueError("n does not match the number of rows")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed response matrix: {exc}") from exc
    if any(len(r) != len(L) for r in L):
        raise ValueError("response matrix must be square")
    return L
