"""Set partitions of boundary nodes and the planar projection.

Nodes are labelled ``1..n`` in counterclockwise order.  A :class:`Partition`
is kept in canonical form: parts sorted by their least element, each part
sorted.  Formal integer combinations live in :class:`PartitionSum`.

The projection onto planar partitions works by rewriting.  A crossing
``a<b<c<d`` (``a,c`` in one part, ``b,d`` in another) is replaced using

    13|24 = 1|234 + 2|134 + 3|124 + 4|123 - 12|34 - 14|23

with the remaining members of the two crossing parts attached to one of the
witness elements, chosen so that every resulting term is strictly less
crossed.  Results are memoised.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Sequence

from .exact import MultiPoly, det

Parts = tuple  # tuple[tuple[int, ...], ...] in canonical order

MAX_GENERIC_NODES = 8


def _canon(parts: Iterable[Iterable[int]]) -> Parts:
    return tuple(sorted(tuple(sorted(p)) for p in parts if p))


def _labels(parts: Parts) -> dict[int, int]:
    return {x: k for k, p in enumerate(parts) for x in p}


class Partition:
    """A set partition of ``{1..n}``."""

    __slots__ = ("n", "parts", "_hash")

    def __init__(self, parts: Iterable[Iterable[int]], n: int | None = None):
        parts = _canon(parts)
        items = sorted(x for p in parts for x in p)
        if n is None:
            n = items[-1] if items else 0
        if items != list(range(1, n + 1)):
            raise ValueError(f"parts do not cover 1..{n} exactly once: {parts}")
        self.n = n
        self.parts = parts
        self._hash = hash((n, parts))

    # text form ----------------------------------------------------------
    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Partition":
        """Read ``1|278|345|6`` or, for ten or more nodes, ``3,9,15|1,17|...``."""
        text = text.strip()
        if not text:
            if n in (None, 0):
                return cls((), 0)
            raise ValueError("empty partition text")
        blocks = [b.strip() for b in text.split("|")]
        if any(not b or not b.replace(",", "").isdigit() for b in blocks):
            raise ValueError(f"bad partition text {text!r}")
        comma = [[int(x) for x in b.split(",")] for b in blocks]
        if "," in text or (n is not None and n >= 10):
            return cls(comma, n)
        try:
            return cls(([int(ch) for ch in b] for b in blocks), n)
        except ValueError:
            # all-singleton text such as 1|2|...|10 carries no commas
            return cls(comma, n)

    def __str__(self):
        sep = "," if self.n >= 10 else ""
        return "|".join(sep.join(str(x) for x in p) for p in self.parts)

    def __repr__(self):
        return f"Partition({str(self)!r}, n={self.n})"

    # value semantics ----------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Partition) and self.n == other.n and self.parts == other.parts

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Partition"):
        return (self.n, self.parts) < (other.n, other.parts)

    def __len__(self):
        return len(self.parts)

    def part_of(self, x: int) -> tuple[int, ...]:
        for p in self.parts:
            if x in p:
                return p
        raise KeyError(x)

    def singletons(self) -> list[int]:
        return [p[0] for p in self.parts if len(p) == 1]

    def is_pairing(self) -> bool:
        """Every part has size two, ignoring singletons."""
        return all(len(p) <= 2 for p in self.parts)

    def tripletons(self) -> list[tuple[int, ...]]:
        return [p for p in self.parts if len(p) == 3]

    def relabel(self, mapping: Mapping[int, int], n: int) -> "Partition":
        return Partition(([mapping[x] for x in p] for p in self.parts), n)


def uncrossing(n: int) -> Partition:
    return Partition(([i] for i in range(1, n + 1)), n)


def full(n: int) -> Partition:
    return Partition([range(1, n + 1)], n)


class PartitionSum:
    """Integer combination of partitions; zero coefficients are never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Partition, int] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Partition, int] = {}
        for p, c in items:
            acc[p] = acc.get(p, 0) + c
        self.coeffs = {p: c for p, c in acc.items() if c}

    def __add__(self, other: "PartitionSum"):
        return PartitionSum(list(self.coeffs.items()) + list(other.coeffs.items()))

    def __sub__(self, other: "PartitionSum"):
        return self + other * -1

    def __mul__(self, k: int):
        return PartitionSum({p: c * k for p, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PartitionSum) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __getitem__(self, p: Partition) -> int:
        return self.coeffs.get(p, 0)

    def __iter__(self):
        return iter(sorted(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def items(self) -> list[tuple[Partition, int]]:
        return [(p, self.coeffs[p]) for p in sorted(self.coeffs)]

    def to_list(self) -> list[tuple[int, str]]:
        return [(c, str(p)) for p, c in self.items()]

    def __str__(self):
        if not self.coeffs:
            return "0"
        out = []
        for p, c in self.items():
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            if not out:
                out.append(("-" if c < 0 else "") + mag + str(p))
            else:
                out.append((" - " if c < 0 else " + ") + mag + str(p))
        return "".join(out)

    def __repr__(self):
        return f"PartitionSum({str(self)!r})"


# ---------------------------------------------------------------------------
# enumeration


def set_partitions(n: int, k: int | None = None) -> Iterator[Partition]:
    """All partitions of ``{1..n}``, optionally only those with ``k`` parts."""

    def rec(i: int, parts: list[list[int]]):
        if k is not None and len(parts) + (n - i + 1) < k:
            return
        if i > n:
            if k is None or len(parts) == k:
                yield Partition(parts, n)
            return
        for p in parts:
            p.append(i)
            yield from rec(i + 1, parts)
            p.pop()
        if k is None or len(parts) < k:
            parts.append([i])
            yield from rec(i + 1, parts)
            parts.pop()

    yield from rec(1, [])


def planar_partitions(n: int, k: int | None = None) -> Iterator[Partition]:
    return (p for p in set_partitions(n, k) if is_planar(p))


# ---------------------------------------------------------------------------
# planarity and the bilinear form


def _crossing_measure(parts: Parts) -> tuple[int, int]:
    """(number of crossing pairs of parts, number of crossing quadruples)."""
    lab = _labels(parts)
    items = sorted(lab)
    quads = 0
    pairs = set()
    for a, b, c, d in combinations(items, 4):
        la, lb = lab[a], lab[b]
        if la == lab[c] and lb == lab[d] and la != lb:
            quads += 1
            pairs.add((min(la, lb), max(la, lb)))
    return len(pairs), quads


def _crossing_witnesses(parts: Parts) -> Iterator[tuple[int, int, int, int]]:
    lab = _labels(parts)
    items = sorted(lab)
    for a, b, c, d in combinations(items, 4):
        if lab[a] == lab[c] and lab[b] == lab[d] and lab[a] != lab[b]:
            yield a, b, c, d


def is_planar(p: Partition) -> bool:
    """True when no two parts interleave."""
    return next(_crossing_witnesses(p.parts), None) is None


def _check_same_n(a: Partition, b: Partition) -> None:
    if a.n != b.n:
        raise ValueError(f"partitions on different node counts ({a.n} and {b.n})")


def inner_product_t(t: Partition, s: Partition) -> int:
    """1 when the two partitions together form a tree on their parts, else 0."""
    _check_same_n(t, s)
    n = t.n
    if len(t) + len(s) != n + 1:
        return 0
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in t.parts + s.parts:
        r = find(part[0])
        for x in part[1:]:
            parent[find(x)] = r
    roots = {find(x) for x in range(1, n + 1)}
    return int(len(roots) == 1)


# ---------------------------------------------------------------------------
# projection onto planar partitions

_CROSS_RULE = (
    (1, ((0,), (1, 2, 3))),
    (1, ((1,), (0, 2, 3))),
    (1, ((2,), (0, 1, 3))),
    (1, ((3,), (0, 1, 2))),
    (-1, ((0, 1), (2, 3))),
    (-1, ((0, 3), (1, 2))),
)


def _rewrite(parts: Parts, w: tuple[int, int, int, int], attach: dict[int, int]) -> list[tuple[int, Parts]]:
    lab = _labels(parts)
    pa, pb = lab[w[0]], lab[w[1]]
    rest = [p for k, p in enumerate(parts) if k not in (pa, pb)]
    out = []
    for coef, blocks in _CROSS_RULE:
        new = []
        for blk in blocks:
            members = [w[i] for i in blk]
            members += [x for x, r in attach.items() if r in members]
            new.append(members)
        out.append((coef, _canon(new + [list(p) for p in rest])))
    return out


def _attachments(parts: Parts, w: tuple[int, int, int, int]) -> Iterator[dict[int, int]]:
    lab = _labels(parts)
    a, b, c, d = w
    extra_p = [x for x in parts[lab[a]] if x not in (a, c)]
    extra_q = [x for x in parts[lab[b]] if x not in (b, d)]
    for choice in product(*([(a, c)] * len(extra_p) + [(b, d)] * len(extra_q))):
        yield dict(zip(extra_p + extra_q, choice))


def _moves(parts: Parts) -> Iterator[list[tuple[int, Parts]]]:
    """Every rewrite whose terms are all strictly less crossed than ``parts``."""
    m = _crossing_measure(parts)
    for w in _crossing_witnesses(parts):
        for att in _attachments(parts, w):
            terms = _rewrite(parts, w, att)
            if all(_crossing_measure(t) < m for _, t in terms):
                yield terms


@lru_cache(maxsize=None)
def _project_parts(parts: Parts) -> tuple[tuple[Parts, int], ...]:
    if _crossing_measure(parts) == (0, 0):
        return ((parts, 1),)
    terms = next(_moves(parts), None)
    if terms is None:
        raise RuntimeError(f"no decreasing uncrossing move for {parts}")
    acc: dict[Parts, int] = {}
    for coef, t in terms:
        for s, v in _project_parts(t):
            acc[s] = acc.get(s, 0) + coef * v
    return tuple(sorted((s, v) for s, v in acc.items() if v))


def _project_random(parts: Parts, rng: random.Random, memo: dict) -> dict[Parts, int]:
    if parts in memo:
        return memo[parts]
    if _crossing_measure(parts) == (0, 0):
        res = {parts: 1}
    else:
        options = list(_moves(parts))
        if not options:
            raise RuntimeError(f"no decreasing uncrossing move for {parts}")
        res = {}
        for coef, t in rng.choice(options):
            for s, v in _project_random(t, rng, memo).items():
                res[s] = res.get(s, 0) + coef * v
        res = {s: v for s, v in res.items() if v}
    memo[parts] = res
    return res


def project(t: Partition, rng: random.Random | None = None) -> PartitionSum:
    """Planar combination equivalent to ``t`` under the bilinear form.

    With ``rng`` the rewrite applied at each step is picked at random (and
    nothing is cached across calls), which is how order independence is
    exercised.
    """
    if rng is None:
        terms = _project_parts(t.parts)
    else:
        terms = _project_random(t.parts, rng, {}).items()
    return PartitionSum({Partition(s, t.n): v for s, v in terms})


def projection_coefficient(s: Partition, t: Partition) -> int:
    """Entry ``P[s, t]`` of the projection matrix."""
    _check_same_n(s, t)
    if not is_planar(s):
        raise ValueError(f"{s} is not planar")
    return project(t)[s]


# ---------------------------------------------------------------------------
# grove polynomials


def _weight(L, i: int, j: int):
    if L is None:
        return MultiPoly.variable("L", i, j)
    return L[i - 1][j - 1]


def _tree_sum(part: Sequence[int], L):
    """Weighted spanning-tree sum of the complete graph on ``part``."""
    k = len(part)
    if k == 1:
        return 1
    if k == 2:
        return _weight(L, part[0], part[1])
    # matrix-tree theorem: reduced weighted Laplacian
    lap = [[0] * (k - 1) for _ in range(k - 1)]
    for a in range(k):
        for b in range(a + 1, k):
            w = _weight(L, part[a], part[b])
            for x, y in ((a, b), (b, a)):
                if x < k - 1:
                    lap[x][x] = lap[x][x] + w
                    if y < k - 1:
                        lap[x][y] = lap[x][y] - w
    return det(lap)


def l_tau_polynomial(t: Partition, L=None):
    """Sum over forests whose trees span the parts of ``t`` of the product of ``L_ij``.

    ``L`` is an ``n x n`` matrix (0-based rows for nodes ``1..n``) of numbers
    or polynomials; ``None`` gives the symbolic polynomial in ``L[i,j]``.
    """
    out = MultiPoly.constant(1) if L is None else Fraction(1)
    for part in t.parts:
        out = out * _tree_sum(part, L)
    return out


def grove_prob_generic(s: Partition, L, bound: int = MAX_GENERIC_NODES):
    """``pû(s)`` as the projected sum of ``L_tau`` over all partitions ``tau``."""
    if s.n > bound:
        raise ValueError(f"{s.n} nodes exceeds the enumeration bound {bound}")
    if not is_planar(s):
        raise ValueError(f"{s} is not planar")
    total = MultiPoly() if L is None else Fraction(0)
    for t in set_partitions(s.n, len(s)):
        coef = project(t)[s]
        if coef:
            total = total + coef * l_tau_polynomial(t, L)
    return total


# ---------------------------------------------------------------------------
# colourings and tripartite partitions

COLORS = ("R", "G", "B")


class ColorSpec:
    """Three circularly contiguous colour classes covering nodes ``1..n``."""

    __slots__ = ("n", "color")

    def __init__(self, colors: Sequence[str]):
        colors = tuple(colors)
        if not colors:
            raise ValueError("need at least one node")
        if any(c not in COLORS for c in colors):
            raise ValueError(f"colours must be among {COLORS}")
        n = len(colors)
        for c in COLORS:
            idx = [i for i in range(n) if colors[i] == c]
            if not idx or len(idx) == n:
                continue
            # contiguous on the circle iff exactly one entry point
            starts = sum(1 for i in idx if colors[i - 1] != c)
            if starts != 1:
                raise ValueError(f"colour class {c} is not a circular arc")
        self.n = n
        self.color = colors

    @classmethod
    def from_ranges(cls, n: int, ranges: Mapping[str, tuple[int, int]]) -> "ColorSpec":
        """Build from inclusive circular ranges, e.g. ``{"R": (1, 2), "B": (7, 2)}``."""
        colors: list[str | None] = [None] * n
        for c, (a, b) in ranges.items():
            if c not in COLORS:
                raise ValueError(f"unknown colour {c!r}")
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"range {a}-{b} outside 1..{n}")
            i = a
            while True:
                if colors[i - 1] is not None:
                    raise ValueError(f"node {i} coloured twice")
                colors[i - 1] = c
                if i == b:
                    break
                i = i % n + 1
        if None in colors:
            missing = [i + 1 for i, c in enumerate(colors) if c is None]
            raise ValueError(f"nodes without a colour: {missing}")
        return cls(colors)

    @classmethod
    def parse(cls, text: str, n: int) -> "ColorSpec":
        """Parse ``R=1-2,G=3-4,B=5-6``; a single node may be written ``G=3``."""
        ranges = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            name, _, rng = item.partition("=")
            name = name.strip().upper()
            if not rng:
                raise ValueError(f"bad colour item {item!r}")
            a, _, b = rng.partition("-")
            ranges[name] = (int(a), int(b or a))
        return cls.from_ranges(n, ranges)

    def classes(self) -> dict[str, list[int]]:
        return {c: [i + 1 for i in range(self.n) if self.color[i] == c] for c in COLORS}

    def of(self, node: int) -> str:
        return self.color[node - 1]

    def __eq__(self, other):
        return isinstance(other, ColorSpec) and self.color == other.color

    def __hash__(self):
        return hash(self.color)

    def __str__(self):
        out = []
        for c, nodes in self.classes().items():
            if not nodes:
                continue
            start = next(i for i in nodes if self.of((i - 2) % self.n + 1) != c) if len(nodes) < self.n else 1
            end = (start + len(nodes) - 2) % self.n + 1
            out.append(f"{c}={start}-{end}")
        return ",".join(out)

    def __repr__(self):
        return f"ColorSpec({''.join(self.color)!r})"


def _nested_from_gaps(n: int, cuts: Sequence[int]) -> Partition:
    """Tripartite partition of nodes ``1..n`` for three gap cuts.

    ``cuts[k] = g`` means a cut between node ``g`` and node ``g+1`` (mod n).
    Cuts are given in counterclockwise order and may coincide.
    """
    g = sorted(c % n for c in cuts)
    # arc k runs from just after cut k to cut k+1
    sizes = [(g[(k + 1) % 3] - g[k]) % n for k in range(3)]
    if len(set(g)) == 1:
        sizes = [n, 0, 0]
    for k in range(3):
        if 2 * sizes[k] > n:
            raise ValueError(f"colour class sizes {sizes} violate the triangle inequality")
    parts: list[list[int]] = []
    used: set[int] = set()
    node = lambda x: (x - 1) % n + 1  # noqa: E731
    for k in range(3):
        left, right = sizes[k - 1], sizes[k]
        opposite = sizes[(k + 1) % 3]
        chords = (left + right - opposite) // 2
        for m in range(chords):
            a, b = node(g[k] - m), node(g[k] + 1 + m)
            parts.append([a, b])
            used.update((a, b))
    rest = [i for i in range(1, n + 1) if i not in used]
    if rest:
        if len(rest) != 3:
            raise AssertionError(f"unexpected leftover nodes {rest}")
        parts.append(rest)
    return Partition(parts, n)


def _gap_cuts(c: ColorSpec) -> list[int]:
    n = c.n
    cuts = [i for i in range(1, n + 1) if c.of(i) != c.of(i % n + 1)]
    if len(cuts) > 3:
        raise AssertionError("more than three colour changes")
    # an empty class puts two cuts in the same gap
    while len(cuts) < 3:
        cuts.append(cuts[0] if cuts else n)
    return cuts


def tripartite_partition(c: ColorSpec) -> Partition:
    """The least-parts noncrossing partition of ``c`` with no single-coloured part."""
    return _nested_from_gaps(c.n, _gap_cuts(c))


def partition_from_cuts(n: int, cuts: Sequence[tuple[str, int]]) -> Partition:
    """Tripartite partition where a cut may sit on a node.

    Each cut is ``("gap", i)`` (between ``i`` and ``i+1``) or ``("node", i)``.
    A node cut splits node ``i`` into two halves, one on each side; the two
    halves are the innermost pair across that cut, which makes ``i`` a
    singleton in the result.
    """
    split = sorted({i for kind, i in cuts if kind == "node"})
    # enlarged circle: every split node i is followed by its twin
    pos: dict[int, int] = {}
    back: dict[int, int] = {}
    m = 0
    for i in range(1, n + 1):
        m += 1
        pos[i] = m
        back[m] = i
        if i in split:
            m += 1
            back[m] = i
    gaps = [pos[i] if kind == "node" else (pos[i] + (1 if i in split else 0)) for kind, i in cuts]
    big = _nested_from_gaps(m, gaps)
    parts = []
    for p in big.parts:
        orig = {back[x] for x in p}
        parts.append(sorted(orig))
    for i in split:
        if [i] not in parts:
            raise ValueError(f"node cut at {i} does not isolate it (no chord across that cut)")
    return Partition(parts, n)


def color_spec_for(p: Partition) -> ColorSpec:
    """A colouring whose tripartite partition is ``p`` (no singletons allowed).

    Raises ``ValueError`` when ``p`` is not tripartite.
    """
    n = p.n
    if p.singletons() and n > 1:
        raise ValueError("partitions with singletons need node splitting first")
    if any(len(q) > 3 for q in p.parts) or len(p.tripletons()) > 1 or not is_planar(p):
        raise ValueError(f"{p} is not a tripartite partition")
    pairs = [q for q in p.parts if len(q) == 2]
    succ = lambda x: x % n + 1  # noqa: E731
    # innermost chords join circular neighbours; cut in the middle of each
    cuts = []
    for a, b in pairs:
        # with two nodes the pair is adjacent on both sides
        if b == succ(a):
            cuts.append(a)
        if a == succ(b):
            cuts.append(b)
    tri = p.tripletons()
    if tri:
        legs = list(tri[0])
        for k in range(3):
            x, y = legs[k], legs[(k + 1) % 3]
            inside = [g for g in cuts if (g - x) % n < (y - x) % n]
            if not inside:
                cuts.append(x)
    if len(cuts) > 3:
        raise ValueError(f"{p} is not a tripartite partition")
    while len(cuts) < 3:
        cuts.append(cuts[0] if cuts else n)
    g = sorted(cuts)
    colors = [""] * n
    for k in range(3):
        count = (g[(k + 1) % 3] - g[k]) % n
        if k == 0 and g[0] == g[2]:
            count = n
        for step in range(1, count + 1):
            colors[(g[k] + step - 1) % n] = COLORS[k]
    result = ColorSpec(colors)
    if tripartite_partition(result) != p:
        raise ValueError(f"{p} is not a tripartite partition")
    return result


# ---------------------------------------------------------------------------
# duality


def kreweras_dual(p: Partition) -> Partition:
    """Planar dual partition; dual node ``i`` sits between nodes ``i`` and ``i+1``."""
    if not is_planar(p):
        raise ValueError(f"{p} is not planar")
    n = p.n
    lab = {x: k for k, q in enumerate(p.parts) for x in q}

    def arc(i: int, j: int) -> set[int]:
        # nodes i+1 .. j going counterclockwise
        out = set()
        x = i
        while x != j:
            x = x % n + 1
            out.add(x)
        return out

    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in combinations(range(1, n + 1), 2):
        one = {lab[x] for x in arc(i, j)}
        other = {lab[x] for x in arc(j, i)}
        if not one & other:
            parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(1, n + 1):
        groups.setdefault(find(i), []).append(i)
    return Partition(groups.values(), n)
