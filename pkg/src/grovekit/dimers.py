"""Double-dimer boundary connections on planar bipartite graphs.

A :class:`BipartiteNetwork` has ``2n`` boundary nodes in counterclockwise
order and an explicit list of bounded faces, which is all that is needed to
build a Kasteleyn signing.  ``G^BW`` keeps the nodes that are black and odd or
white and even; ``X_ij`` is the ratio of dimer partition functions of ``G^BW``
with the membership of nodes ``i`` and ``j`` toggled and of ``G^BW`` itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .exact import MultiPoly, det
from .oracle import ScaleError
from .partitions import ColorSpec, Partition, tripartite_partition

MAX_BRUTE_EDGES = 40


class BipartiteNetwork:
    """Properly 2-coloured weighted graph with boundary nodes and bounded faces."""

    __slots__ = ("vertices", "coloring", "edges", "nodes", "faces")

    def __init__(
        self,
        vertices: int,
        coloring: Sequence[str],
        edges: Iterable[tuple[int, int, Any]],
        nodes: Sequence[int],
        faces: Sequence[Sequence[int]] = (),
    ):
        coloring = tuple(str(c).upper() for c in coloring)
        if len(coloring) != vertices or any(c not in ("B", "W") for c in coloring):
            raise ValueError("coloring needs one 'B' or 'W' per vertex")
        clean = []
        for u, v, w in edges:
            if not (1 <= u <= vertices and 1 <= v <= vertices):
                raise ValueError(f"edge ({u}, {v}) outside the vertex range")
            if coloring[u - 1] == coloring[v - 1]:
                raise ValueError(f"edge ({u}, {v}) joins two vertices of the same colour")
            if not isinstance(w, MultiPoly):
                w = Fraction(w)
                if w <= 0:
                    raise ValueError(f"weight {w} on edge ({u}, {v}) is not positive")
            clean.append((u, v, w))
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes) or len(nodes) % 2:
            raise ValueError("need an even number of distinct nodes")
        self.vertices = vertices
        self.coloring = coloring
        self.edges = tuple(clean)
        self.nodes = nodes
        self.faces = tuple(tuple(f) for f in faces)

    @property
    def n(self) -> int:
        """Number of node pairs."""
        return len(self.nodes) // 2

    def color(self, v: int) -> str:
        return self.coloring[v - 1]

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices,
            "nodes": list(self.nodes),
            "edges": [[u, v, str(Fraction(w))] for u, v, w in self.edges],
            "coloring": list(self.coloring),
            "faces": [list(f) for f in self.faces],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BipartiteNetwork":
        try:
            return cls(
                int(d["vertices"]),
                d["coloring"],
                [(int(u), int(v), Fraction(str(w))) for u, v, w in d["edges"]],
                [int(x) for x in d["nodes"]],
                d.get("faces", []),
            )
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed bipartite network: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "BipartiteNetwork":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class DimerGraph:
    """A bipartite network with some vertices deleted."""

    graph: BipartiteNetwork
    removed: frozenset = frozenset()

    def kept(self) -> list[int]:
        return [v for v in range(1, self.graph.vertices + 1) if v not in self.removed]


# ---------------------------------------------------------------------------
# Kasteleyn signs


def kasteleyn_signs(g: BipartiteNetwork) -> list[int]:
    """Edge signs with ``(-1)^(k+1)`` as the sign product around every bounded ``2k``-face.

    Solved as a linear system over GF(2); free variables are set to ``+1``.
    """
    index: dict[frozenset, int] = {}
    for k, (u, v, _) in enumerate(g.edges):
        key = frozenset((u, v))
        if key in index:
            index[key] = -1  # parallel edges cannot be named by their ends
        else:
            index[key] = k
    rows = []
    for face in g.faces:
        mask = 0
        for a, b in zip(face, face[1:] + face[:1]):
            k = index.get(frozenset((a, b)))
            if k is None or k < 0:
                raise ValueError(f"face {face} uses a missing or doubled edge ({a}, {b})")
            mask ^= 1 << k
        rhs = (len(face) // 2 + 1) % 2
        rows.append((mask, rhs))
    # Gaussian elimination over GF(2)
    pivots: list[tuple[int, int, int]] = []
    for mask, rhs in rows:
        for bit, pmask, prhs in pivots:
            if mask >> bit & 1:
                mask ^= pmask
                rhs ^= prhs
        if mask == 0:
            if rhs:
                raise ValueError("faces admit no Kasteleyn signing")
            continue
        bit = mask.bit_length() - 1
        pivots = [(b, pm ^ mask if pm >> bit & 1 else pm, pr ^ rhs if pm >> bit & 1 else pr) for b, pm, pr in pivots]
        pivots.append((bit, mask, rhs))
    neg = 0
    for bit, pmask, prhs in pivots:
        # free variables are 0, so each pivot variable equals its right side
        if prhs:
            neg |= 1 << bit
    return [-1 if neg >> k & 1 else 1 for k in range(len(g.edges))]


def kasteleyn_matrix(d: DimerGraph, signs: Sequence[int] | None = None) -> tuple[list, list[int], list[int]]:
    g = d.graph
    signs = kasteleyn_signs(g) if signs is None else signs
    kept = d.kept()
    black = [v for v in kept if g.color(v) == "B"]
    white = [v for v in kept if g.color(v) == "W"]
    bpos = {v: k for k, v in enumerate(black)}
    wpos = {v: k for k, v in enumerate(white)}
    K: list[list] = [[Fraction(0)] * len(white) for _ in black]
    for (u, v, w), s in zip(g.edges, signs):
        if u in d.removed or v in d.removed:
            continue
        if g.color(u) == "W":
            u, v = v, u
        K[bpos[u]][wpos[v]] = K[bpos[u]][wpos[v]] + s * w
    return K, black, white


def dimer_partition_function(d: DimerGraph | BipartiteNetwork, signs: Sequence[int] | None = None):
    """Weighted number of perfect matchings, as ``|det K|`` of the Kasteleyn matrix."""
    if isinstance(d, BipartiteNetwork):
        d = DimerGraph(d)
    K, black, white = kasteleyn_matrix(d, signs)
    if len(black) != len(white):
        return Fraction(0)
    value = det(K)
    if isinstance(value, MultiPoly):
        return value if _leading_sign(value) > 0 else -value
    return abs(value)


def _leading_sign(p: MultiPoly) -> int:
    terms = p.sorted_terms()
    return 1 if not terms or terms[0][1] > 0 else -1


def matching_sum(d: DimerGraph | BipartiteNetwork):
    """Perfect-matching weight by plain backtracking (test oracle)."""
    if isinstance(d, BipartiteNetwork):
        d = DimerGraph(d)
    g = d.graph
    kept = d.kept()
    adj: dict[int, list[tuple[int, Any]]] = {v: [] for v in kept}
    for u, v, w in g.edges:
        if u in adj and v in adj:
            adj[u].append((v, w))
            adj[v].append((u, w))

    def rec(free: frozenset):
        if not free:
            return 1
        v = min(free)
        total = 0
        for u, w in adj[v]:
            if u in free:
                sub = rec(free - {v, u})
                if sub:
                    total = total + w * sub
        return total

    return rec(frozenset(kept))


# ---------------------------------------------------------------------------
# node-deleted graphs and X


def _node_kept_bw(g: BipartiteNetwork, i: int) -> bool:
    """Node ``i`` (1-based) belongs to ``G^BW`` when black-odd or white-even."""
    c = g.color(g.nodes[i - 1])
    return (c == "B") == (i % 2 == 1)


def gbw(g: BipartiteNetwork) -> DimerGraph:
    drop = {g.nodes[i - 1] for i in range(1, len(g.nodes) + 1) if not _node_kept_bw(g, i)}
    return DimerGraph(g, frozenset(drop))


def gwb(g: BipartiteNetwork) -> DimerGraph:
    drop = {g.nodes[i - 1] for i in range(1, len(g.nodes) + 1) if _node_kept_bw(g, i)}
    return DimerGraph(g, frozenset(drop))


def gbw_ij(g: BipartiteNetwork, i: int, j: int) -> DimerGraph:
    """``G^BW`` with the membership of nodes ``i`` and ``j`` toggled."""
    if i == j:
        raise ValueError("need two distinct nodes")
    for k in (i, j):
        if not 1 <= k <= len(g.nodes):
            raise ValueError(f"no node {k}")
    base = gbw(g).removed
    return DimerGraph(g, base ^ {g.nodes[i - 1], g.nodes[j - 1]})


def x_matrix(g: BipartiteNetwork) -> list[list[Fraction]]:
    """``X_ij = Z(G^BW_ij) / Z(G^BW)`` for nodes of opposite parity, 0 otherwise."""
    signs = kasteleyn_signs(g)
    z = dimer_partition_function(gbw(g), signs)
    if not z:
        raise ValueError("G^BW has no perfect matching")
    m = len(g.nodes)
    X = [[Fraction(0)] * m for _ in range(m)]
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            if (i + j) % 2:
                X[i - 1][j - 1] = X[j - 1][i - 1] = dimer_partition_function(gbw_ij(g, i, j), signs) / z
    return X


# ---------------------------------------------------------------------------
# formulas


def _x_entry(X, i: int, j: int):
    if X is None:
        return MultiPoly.variable("X", i, j)
    return X[i - 1][j - 1]


def dd_tripartite_prob(X, c: ColorSpec):
    """Normalised double-dimer probability of the tripartite pairing of ``c``.

    The determinant has rows ``1, 3, ..., 2n-1`` and columns their partners,
    with entries ``X_ij`` for differently coloured ``i, j`` and 0 otherwise.
    ``X=None`` gives the symbolic polynomial.
    """
    sigma = tripartite_partition(c)
    if any(len(p) != 2 for p in sigma.parts):
        raise ValueError(f"{sigma} is not a pairing of all nodes")
    partner = {}
    for a, b in sigma.parts:
        partner[a], partner[b] = b, a
    rows = list(range(1, c.n + 1, 2))
    cols = [partner[i] for i in rows]
    M = [[_x_entry(X, i, j) if c.of(i) != c.of(j) else 0 for j in cols] for i in rows]
    return det(M)


def l_to_x_substitute(p: MultiPoly) -> MultiPoly:
    """Replace ``L[i,j]`` by 0 (same parity) or ``(-1)^((|i-j|-1)/2) X[i,j]``."""
    mapping = {}
    for var in p.variables():
        if var[0] != "L":
            continue
        _, i, j = var
        if (i - j) % 2 == 0:
            mapping[var] = 0
        else:
            sign = -1 if ((abs(i - j) - 1) // 2) % 2 else 1
            mapping[var] = MultiPoly.variable("X", i, j) * sign
    return p.substitute(mapping)


def substitution_sign(sigma: Partition) -> int:
    """Product of ``(-1)^((|i-j|-1)/2)`` over the pairs of ``sigma``."""
    if not sigma.is_pairing() or any((a - b) % 2 == 0 for a, b in sigma.parts):
        raise ValueError(f"{sigma} does not pair odd nodes with even nodes")
    return -1 if sum((b - a - 1) // 2 for a, b in sigma.parts) % 2 else 1


def dd_from_grove_polynomial(p: MultiPoly, sigma: Partition) -> MultiPoly:
    """Double-dimer polynomial of ``sigma`` from its grove polynomial.

    The plain substitution is off by the global sign :func:`substitution_sign`,
    which makes the monomial of ``sigma`` itself come out positive.
    """
    return l_to_x_substitute(p) * substitution_sign(sigma)


def dd_bruteforce(g: BipartiteNetwork, max_edges: int = MAX_BRUTE_EDGES) -> dict[Partition, Any]:
    """``Z^DD(pi)`` for every boundary pairing ``pi``.

    Enumerates edge multiplicities 0, 1 or 2 so that nodes have degree 1 and
    all other vertices degree 2; doubled edges carry no loop credit and each
    longer loop contributes a factor 2.
    """
    m = len(g.edges)
    if m > max_edges:
        raise ScaleError(f"{m} edges exceeds the enumeration bound {max_edges}")
    label = {v: k + 1 for k, v in enumerate(g.nodes)}
    need = [0] + [1 if v in label else 2 for v in range(1, g.vertices + 1)]
    cap = [0] * (g.vertices + 1)
    for u, v, _ in g.edges:
        cap[u] += 2
        cap[v] += 2
    out: dict[Partition, Any] = {}
    mult = [0] * m

    def finish(weight):
        adj: dict[int, list[int]] = {}
        loops = 0
        for k, (u, v, _) in enumerate(g.edges):
            if mult[k] == 1:
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
        parts = []
        seen = set()
        for start in g.nodes:
            if start in seen:
                continue
            seen.add(start)
            prev, cur = None, start
            while True:
                nxt = [x for x in adj.get(cur, []) if x != prev] if prev is not None else adj.get(cur, [])
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                seen.add(cur)
                if cur in label:
                    break
            parts.append([label[start], label[cur]])
        for v in adj:
            if v in seen:
                continue
            loops += 1
            stack = [v]
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                stack.extend(adj[x])
        p = Partition(parts, len(g.nodes))
        w = weight * (2 ** loops)
        out[p] = out[p] + w if p in out else w

    def rec(k: int, weight):
        if k == m:
            if all(x == 0 for x in need[1:]):
                finish(weight)
            return
        u, v, w = g.edges[k]
        cap[u] -= 2
        cap[v] -= 2
        for t in (0, 1, 2):
            if need[u] < t or need[v] < t:
                break
            need[u] -= t
            need[v] -= t
            if need[u] <= cap[u] and need[v] <= cap[v]:
                mult[k] = t
                rec(k + 1, weight * w ** t if t else weight)
            need[u] += t
            need[v] += t
        mult[k] = 0
        cap[u] += 2
        cap[v] += 2

    rec(0, 1)
    return out


# ---------------------------------------------------------------------------
# fixtures


def grid_bipartite(rows: int, cols: int, nodes: Sequence[tuple[int, int]], weights=None) -> BipartiteNetwork:
    """Square grid, vertex ``(x, y)`` black when ``x + y`` is even.

    ``nodes`` lists perimeter points counterclockwise; node vertices come
    first in the numbering.  ``weights`` is ``None`` (unit) or a callable.
    """
    pts = [(x, y) for y in range(rows) for x in range(cols)]
    order = list(nodes) + [p for p in pts if p not in set(nodes)]
    vid = {p: k + 1 for k, p in enumerate(order)}
    wf = weights or (lambda: Fraction(1))
    edges = [(vid[(x, y)], vid[(x + 1, y)], wf()) for y in range(rows) for x in range(cols - 1)]
    edges += [(vid[(x, y)], vid[(x, y + 1)], wf()) for y in range(rows - 1) for x in range(cols)]
    faces = [
        [vid[(x, y)], vid[(x + 1, y)], vid[(x + 1, y + 1)], vid[(x, y + 1)]]
        for y in range(rows - 1)
        for x in range(cols - 1)
    ]
    coloring = ["B" if (p[0] + p[1]) % 2 == 0 else "W" for p in order]
    return BipartiteNetwork(len(order), coloring, edges, [vid[p] for p in nodes], faces)
