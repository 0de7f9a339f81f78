"""Closed-form grove connection probabilities from the response matrix.

``L`` is an ``n x n`` response matrix with 0-based rows for nodes ``1..n``.
Passing ``L=None`` to the Pfaffian formulas gives symbolic polynomials in the
variables ``L[i,j]``.  Targets are either a :class:`ColorSpec` or a
tripartite-shaped :class:`Partition` (pairs, at most one tripleton and any
number of singletons).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Any, Sequence

from .exact import MultiPoly, det, pfaffian, pfaffianoid, polynomial_in_parameter, submatrix
from .network import dual_response, uncrossing_tree_ratio
from .partitions import (
    ColorSpec,
    Partition,
    color_spec_for,
    grove_prob_generic,
    is_planar,
    kreweras_dual,
    tripartite_partition,
)

PER_UNCROSSING = "per-uncrossing"
PER_TREE = "per-tree"


@dataclass(frozen=True)
class GroveProbability:
    """A grove probability ratio tagged with what it is divided by.

    ``per-uncrossing`` values are ``Pr(sigma)/Pr(1|2|...|n)``;
    ``per-tree`` values are ``Pr(sigma)/Pr(12...n)``.
    """

    value: Any
    normalization: str = PER_UNCROSSING

    def per_uncrossing(self, L) -> "GroveProbability":
        if self.normalization == PER_UNCROSSING:
            return self
        return GroveProbability(self.value * uncrossing_tree_ratio(L), PER_UNCROSSING)

    def per_tree(self, L) -> "GroveProbability":
        if self.normalization == PER_TREE:
            return self
        return GroveProbability(self.value / uncrossing_tree_ratio(L), PER_TREE)


class NotApplicableError(ValueError):
    """The target partition has the wrong shape for this formula."""


def _entry(L, i: int, j: int):
    if L is None:
        return MultiPoly.variable("L", i, j)
    return L[i - 1][j - 1]


def _node_count(L, target) -> int:
    return target.n if L is None else len(L)


def _target_partition(target, n: int) -> tuple[Partition, ColorSpec | None]:
    if isinstance(target, ColorSpec):
        if target.n != n:
            raise ValueError(f"colouring has {target.n} nodes, matrix has {n}")
        return tripartite_partition(target), target
    if isinstance(target, Partition):
        if target.n != n:
            raise ValueError(f"partition has {target.n} nodes, matrix has {n}")
        return target, None
    raise TypeError("target must be a ColorSpec or a Partition")


def tripartite_matrix(L, colors: ColorSpec, labels: Sequence[int] | None = None) -> list[list]:
    """Antisymmetric matrix with ``L_ij`` for differently coloured ``i < j``.

    ``labels`` maps position ``k`` of the colouring to a row of ``L``
    (defaults to the identity).
    """
    n = colors.n
    labels = list(labels) if labels is not None else list(range(1, n + 1))
    M: list[list] = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if colors.color[i] != colors.color[j]:
                x = _entry(L, labels[i], labels[j])
                M[i][j] = x
                M[j][i] = -x
    return M


def tripartite_pairing_prob(L, target) -> GroveProbability:
    """``pû`` of a tripartite pairing as a Pfaffian; singleton nodes are dropped first."""
    sigma, colors = _target_partition(target, _node_count(L, target))
    if not sigma.is_pairing():
        raise NotApplicableError(f"{sigma} is not a pairing; use tripod_prob")
    if not is_planar(sigma):
        raise NotApplicableError(f"{sigma} is not planar")
    kept = [i for i in range(1, sigma.n + 1) if i not in set(sigma.singletons())]
    if not kept:
        return GroveProbability(Fraction(1) if L is not None else MultiPoly.constant(1))
    pos = {x: k + 1 for k, x in enumerate(kept)}
    if colors is None or len(kept) != sigma.n:
        reduced = Partition(([pos[x] for x in p] for p in sigma.parts if len(p) > 1), len(kept))
        colors = color_spec_for(reduced)
    return GroveProbability(pfaffian(tripartite_matrix(L, colors, kept)))


def split_singletons(L, sigma: Partition) -> tuple[Any, Partition, dict[int, int]]:
    """Give every singleton node a pendant twin joined to it by a unit edge.

    Returns the enlarged response matrix (``None`` stays symbolic), the
    enlarged partition in which each singleton is paired with its twin, and
    the map from old labels to new labels.
    """
    singles = set(sigma.singletons())
    new: dict[int, int] = {}
    twin: dict[int, int] = {}
    m = 0
    for i in range(1, sigma.n + 1):
        m += 1
        new[i] = m
        if i in singles:
            m += 1
            twin[i] = m
    parts = [[new[x] for x in p] for p in sigma.parts if len(p) > 1]
    parts += [[new[i], twin[i]] for i in sorted(singles)]
    big = Partition(parts, m)
    if L is None:
        if singles:
            raise NotImplementedError("symbolic node splitting is not supported")
        return None, big, new
    L2: list[list] = [[Fraction(0)] * m for _ in range(m)]
    for i in range(1, sigma.n + 1):
        for j in range(1, sigma.n + 1):
            L2[new[i] - 1][new[j] - 1] = L[i - 1][j - 1]
    for i, t in twin.items():
        a, b = new[i] - 1, t - 1
        L2[a][b] = L2[b][a] = Fraction(1)
        L2[a][a] -= 1
        L2[b][b] = Fraction(-1)
    return L2, big, new


def tripod_prob(L, target) -> GroveProbability:
    """``pû`` of a tripod partition via the Pfaffianoid with sign ``(-1)^(sum of the tripleton)``.

    Nodes are renumbered to start at a colour boundary, singleton nodes get a
    pendant twin, and the Pfaffianoid expansion runs over tripletons holding
    one node of each colour.
    """
    sigma, colors = _target_partition(target, _node_count(L, target))
    if len(sigma.tripletons()) != 1 or any(len(p) > 3 for p in sigma.parts):
        raise NotApplicableError(f"{sigma} is not a tripod partition")
    if not is_planar(sigma):
        raise NotApplicableError(f"{sigma} is not planar")
    L2, big, _ = split_singletons(L, sigma)
    if colors is None or big.n != sigma.n:
        colors = color_spec_for(big)
    # number from the start of a colour class so that no class wraps past n
    m = big.n
    r = next(k for k in range(m) if colors.color[k] != colors.color[k - 1])
    order = [(r + k) % m + 1 for k in range(m)]
    rotated = ColorSpec([colors.of(x) for x in order])
    where = {x: k + 1 for k, x in enumerate(order)}
    sign = -1 if sum(where[x] for x in big.tripletons()[0]) % 2 else 1
    # only tripletons with one node of each colour contribute
    triples = [t for t in combinations(range(m), 3) if len({rotated.color[k] for k in t}) == 3]
    return GroveProbability(sign * pfaffianoid(tripartite_matrix(L2, rotated, order), triples))


def tripod_prob_via_dual(L, target) -> GroveProbability:
    """``pû`` of a tripod from the dual response matrix and the pairing dual partition."""
    if L is None:
        raise NotImplementedError("the dual route needs a numeric response matrix")
    sigma, _ = _target_partition(target, len(L))
    if len(sigma.tripletons()) != 1:
        raise NotApplicableError(f"{sigma} is not a tripod partition")
    dual = kreweras_dual(sigma)
    per_tree = tripartite_pairing_prob(dual_response(L), dual).value
    return GroveProbability(per_tree * uncrossing_tree_ratio(L))


def grove_probability(L, sigma: Partition) -> GroveProbability:
    """Dispatch to the pairing Pfaffian, the tripod Pfaffianoid or the generic sum."""
    if sigma.is_pairing():
        return tripartite_pairing_prob(L, sigma)
    if len(sigma.tripletons()) == 1 and all(len(p) <= 3 for p in sigma.parts):
        try:
            return tripod_prob(L, sigma)
        except ValueError:
            pass
    return GroveProbability(grove_prob_generic(sigma, L))


# ---------------------------------------------------------------------------
# minors


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def minor_grove_identity(L, A: Sequence[int], B: Sequence[int], C: Sequence[int], D: Sequence[int], groves=None):
    """Both sides of the all-minors identity for ``det L[(A,C),(B,C)]``.

    The grove side is ``(-1)^|C|`` times the signed sum over matchings ``pi`` of
    ``A`` to ``B`` of ``pû(a_k b_pi(k) | d_1 | ... )``, with every node of ``C``
    placed in any of those parts.  Probabilities come from ``groves`` (a
    :class:`~grovekit.oracle.GroveTable`) when given; otherwise from the
    generic projection sum, which assumes a circular planar network so that
    crossing partitions contribute nothing.
    """
    n = len(L)
    A, B, C, D = (list(s) for s in (A, B, C, D))
    every = A + B + C + D
    if len(A) != len(B):
        raise ValueError("A and B must have the same size")
    if sorted(every) != list(range(1, n + 1)):
        raise ValueError("A, B, C, D must be disjoint and cover all nodes")
    rows = [a - 1 for a in A + C]
    cols = [b - 1 for b in B + C]
    lhs = det(submatrix(L, rows, cols)) if rows else Fraction(1)

    def pu(parts) -> Fraction:
        p = Partition(parts, n)
        if groves is not None:
            return groves.ratio(p)
        if not is_planar(p):
            return Fraction(0)
        return Fraction(grove_prob_generic(p, L))

    total = Fraction(0)
    k = len(A)
    for perm in permutations(range(k)):
        base = [[A[i], B[perm[i]]] for i in range(k)] + [[d] for d in D]
        sign = _perm_sign(perm)
        if not base:
            continue
        for placement in product(range(len(base)), repeat=len(C)):
            parts = [list(p) for p in base]
            for c, where in zip(C, placement):
                parts[where].append(c)
            total += sign * pu(parts)
    if len(C) % 2:
        total = -total
    return lhs, total


# ---------------------------------------------------------------------------
# resistance forms


def _half(x):
    return x / 2 if isinstance(x, MultiPoly) else Fraction(x) / 2


def pairing_prob_from_resistances(R, A: Sequence[int], B: Sequence[int]) -> GroveProbability:
    """``[t] det[t - R_ij/2]`` over rows ``A`` and columns ``B`` (sorted), per tree."""
    n = len(R)
    A, B = sorted(A), sorted(B)
    if len(A) != len(B) or set(A) & set(B) or sorted(A + B) != list(range(1, n + 1)):
        raise ValueError("A and B must be disjoint, equinumerous and cover all nodes")

    def at(t: Fraction) -> Fraction:
        return det([[t - _half(R[a - 1][b - 1]) for b in B] for a in A])

    coeffs = polynomial_in_parameter(at, len(A))
    if len(coeffs) > 2:
        raise ArithmeticError(f"determinant has degree {len(coeffs) - 1} in t, expected at most 1")
    return GroveProbability(coeffs[1] if len(coeffs) > 1 else Fraction(0), PER_TREE)


def resistance_pfaffian(R, colors: ColorSpec) -> MultiPoly:
    """Pfaffian of ``t - R_ij/2`` over differently coloured ``i < j``, as a polynomial in ``t``."""
    n = colors.n
    t = MultiPoly.variable("t")
    M: list[list] = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if colors.color[i] != colors.color[j]:
                x = t - _half(R[i][j])
                M[i][j] = x
                M[j][i] = -x
    return pfaffian(M)


def tripartite_prob_from_resistances(R, target) -> GroveProbability:
    """``Pr(sigma)/Pr(12...n)`` for a tripartite pairing, from resistances."""
    sigma, colors = _target_partition(target, len(R))
    if not sigma.is_pairing() or sigma.singletons():
        raise NotApplicableError(f"{sigma} is not a pairing of all nodes")
    if colors is None:
        colors = color_spec_for(sigma)
    poly = resistance_pfaffian(R, colors)
    tvar = ("t",)
    if poly.degree(tvar) > 1:
        raise ArithmeticError(f"resistance Pfaffian has degree {poly.degree(tvar)} in t")
    lin = poly.coefficient(tvar, 1)
    return GroveProbability(Fraction(lin.constant_value()), PER_TREE)
