"""Recover the conductances of a standard graph from its response matrix.

Each edge conductance is a ratio of four connection probabilities: two
tripod partitions attached to the endpoints of the edge and two tripartite
pairings attached to the faces on either side.  On the standard graph each of
these partitions is realised by exactly one grove, which is what makes the
ratio collapse to a single conductance.

Geometry follows :func:`grovekit.network.standard_layout`.  A face is named
by the lower-left corner ``(x, y)`` of its unit square; squares that do not
fit inside the layout are external faces.  Node endpoints and external faces
that are not on the left side all use the fully nested pairing
``1,n | 2,n-1 | ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .groves import grove_probability
from .network import Network, StandardLayout, standard_graph, standard_layout
from .partitions import Partition, partition_from_cuts

Point = tuple[int, int]


def _nested(arc: list[int]) -> list[list[int]]:
    parts = []
    i, j = 0, len(arc) - 1
    while i < j:
        parts.append([arc[i], arc[j]])
        i, j = i + 1, j - 1
    if i == j:
        parts.append([arc[i]])
    return parts


def nested_pairing(n: int) -> Partition:
    """``1,n | 2,n-1 | ...`` with a middle singleton for odd ``n``."""
    return Partition(_nested(list(range(1, n + 1))), n)


def _tripod(lay: StandardLayout, p: Point) -> Partition:
    n, a, b = lay.n, lay.a, lay.b
    x, y = p
    up, down = n - x, x + 1
    right = n - (b - y) if b - y <= y + a else y + a + 1
    l0, l1, l2 = sorted((up, down, right))
    parts = [[l0, l1, l2]]
    parts += _nested(list(range(l0 + 1, l1)))
    parts += _nested(list(range(l1 + 1, l2)))
    parts += _nested(list(range(l2 + 1, n + 1)) + list(range(1, l0)))
    return Partition(parts, n)


def _cut(lay: StandardLayout, twice_x: int, upper: bool) -> tuple[str, int]:
    """Cut where a diagonal ray meets the upper or lower line at ``x = twice_x / 2``."""
    whole, half = divmod(twice_x, 2)
    if upper:
        return ("gap", lay.n - whole - 1) if half else ("node", lay.n - whole)
    return ("gap", whole + 1) if half else ("node", whole + 1)


def _face_partition(lay: StandardLayout, f: Point, bounded: bool) -> Partition:
    x, y = f
    if not bounded and x >= 0:
        return nested_pairing(lay.n)
    cuts = [
        ("gap", lay.n),
        _cut(lay, x - y + lay.b, upper=True),
        _cut(lay, x + y + lay.a + 1, upper=False),
    ]
    return partition_from_cuts(lay.n, cuts)


def _edge_faces(p: Point, q: Point) -> tuple[Point, Point]:
    (x, y), (x2, y2) = p, q
    if y == y2:
        return (x, y), (x, y - 1)
    return (x, y), (x - 1, y)


@dataclass(frozen=True)
class StandardGraphAnnotation:
    """The standard graph on ``n`` nodes with its vertex and face partitions."""

    n: int
    layout: StandardLayout = field(repr=False)
    interior_vertices: tuple[int, ...]
    bounded_faces: tuple[Point, ...]
    external_faces: tuple[Point, ...]
    vertex_partitions: dict = field(repr=False)  # vertex id -> Partition
    face_partitions: dict = field(repr=False)  # face corner -> Partition
    edge_faces: tuple = field(repr=False)  # per edge: (face, face)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as vertex-id pairs, in the order used for conductances."""
        v = self.layout.vertex
        return tuple((v[p], v[q]) for p, q in self.layout.edge_points)

    def graph(self, conductances=None) -> Network:
        return standard_graph(self.n, conductances)


@lru_cache(maxsize=None)
def annotate(n: int) -> StandardGraphAnnotation:
    lay = standard_layout(n)
    interior = tuple(sorted(v for v in lay.point if v > n))
    vertex_partitions = {v: _tripod(lay, lay.point[v]) for v in interior}
    edge_faces = tuple(_edge_faces(p, q) for p, q in lay.edge_points)
    bounded, external = set(), set()
    for pair in edge_faces:
        for x, y in pair:
            corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
            (bounded if all(lay.inside(c) for c in corners) else external).add((x, y))
    face_partitions = {f: _face_partition(lay, f, True) for f in bounded}
    face_partitions.update({f: _face_partition(lay, f, False) for f in external})
    return StandardGraphAnnotation(
        n, lay, interior, tuple(sorted(bounded)), tuple(sorted(external)), vertex_partitions, face_partitions, edge_faces
    )


def pi_v(ann: StandardGraphAnnotation, v: int) -> Partition:
    """Tripod partition of an interior vertex."""
    try:
        return ann.vertex_partitions[v]
    except KeyError:
        raise ValueError(f"{v} is not an interior vertex of the standard graph on {ann.n} nodes") from None


def pi_f(ann: StandardGraphAnnotation, f: Point) -> Partition:
    """Tripartite pairing of a face, named by its lower-left corner."""
    try:
        return ann.face_partitions[tuple(f)]
    except KeyError:
        raise ValueError(f"{f} is not a face of the standard graph on {ann.n} nodes") from None


def endpoint_partition(ann: StandardGraphAnnotation, v: int) -> Partition:
    """``pi_v`` for interior vertices, the nested pairing for nodes."""
    return nested_pairing(ann.n) if v <= ann.n else pi_v(ann, v)


def reconstruct(L, n: int | None = None) -> list[Fraction]:
    """Conductances of the standard graph whose response matrix is ``L``.

    Returned in the edge order of :attr:`StandardGraphAnnotation.edges`.
    """
    n = len(L) if n is None else n
    if len(L) != n:
        raise ValueError(f"expected a {n}x{n} response matrix")
    ann = annotate(n)
    cache: dict[Partition, Fraction] = {}

    def pu(p: Partition) -> Fraction:
        if p not in cache:
            value = grove_probability(L, p).value
            if value <= 0:
                raise ValueError(f"pû({p}) = {value}: not the response matrix of a positive standard graph")
            cache[p] = value
        return cache[p]

    out = []
    for (u, v), (f1, f2) in zip(ann.edges, ann.edge_faces):
        num = pu(endpoint_partition(ann, u)) * pu(endpoint_partition(ann, v))
        out.append(num / (pu(pi_f(ann, f1)) * pu(pi_f(ann, f2))))
    return out
